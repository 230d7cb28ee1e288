#pragma once

// g-frame systems {Λ_i : H -> H_i} over H = C^n, H_i = C^{m_i}.
//
// Conventions used throughout the library:
//   synthesis  T_Λ = [Λ_1* | ... | Λ_N*]          n x Σm_i
//   analysis   T_Λ* = vertical stack of the Λ_i   Σm_i x n
//   frame op   S_Λ = T_Λ T_Λ* = Σ Λ_i* Λ_i         n x n
//
// A family is a K-g-frame when A ||K* f||^2 <= Σ ||Λ_i f||^2 <= B ||f||^2 for
// some A > 0; equivalently S_Λ ⪰ A K K*.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "kgframe/numerics.hpp"

namespace kgframe {

class GFrameSystem {
 public:
  // Throws DimensionMismatch unless there is at least one block and each
  // operator has shape block_dims[i] x ambient_dim.
  GFrameSystem(std::size_t ambient_dim, std::vector<ComplexMatrix> operators);

  // All-zero system with the given block structure.
  static GFrameSystem zeros(std::size_t ambient_dim, std::span<const std::size_t> block_dims);

  std::size_t ambient_dim() const noexcept { return ambient_dim_; }
  std::size_t block_count() const noexcept { return operators_.size(); }
  std::size_t coefficient_dim() const noexcept { return coefficient_dim_; }
  std::vector<std::size_t> block_dims() const;
  // Row offset of block i inside the analysis operator.
  std::size_t block_offset(std::size_t i) const { return offsets_.at(i); }

  const ComplexMatrix& op(std::size_t i) const { return operators_.at(i); }
  const std::vector<ComplexMatrix>& operators() const noexcept { return operators_; }

  bool same_structure(const GFrameSystem& other) const;

  friend bool operator==(const GFrameSystem&, const GFrameSystem&) = default;

 private:
  std::size_t ambient_dim_;
  std::vector<ComplexMatrix> operators_;
  std::vector<std::size_t> offsets_;
  std::size_t coefficient_dim_ = 0;
};

// Element of ⊕ H_i.
class CoefficientVector {
 public:
  CoefficientVector(std::vector<std::size_t> block_dims, std::vector<CVector> blocks);
  // Splits a flat vector of length Σm_i into blocks.
  static CoefficientVector from_flat(std::span<const std::size_t> block_dims,
                                     std::span<const cplx> flat);
  // e_{ij} δ_i: standard basis vector j placed in block i, zero elsewhere.
  static CoefficientVector unit(std::span<const std::size_t> block_dims, std::size_t block,
                                std::size_t index);

  const std::vector<std::size_t>& block_dims() const noexcept { return block_dims_; }
  const std::vector<CVector>& blocks() const noexcept { return blocks_; }
  const CVector& block(std::size_t i) const { return blocks_.at(i); }
  CVector flat() const;
  double norm() const;

 private:
  std::vector<std::size_t> block_dims_;
  std::vector<CVector> blocks_;
};

struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
  bool is_bessel = true;
  bool is_g_frame = false;
  bool is_k_g_frame = false;
  bool is_parseval = false;
  std::optional<double> tightness;  // λ when Σ||Λ_i f||^2 = λ ||K* f||^2 for all f
};

struct InducedFrame {
  std::size_t ambient_dim = 0;
  // u_{i,j} in block-major order; u_{i,j} sits at block_offset(i) + j.
  std::vector<CVector> vectors;
  std::vector<std::size_t> block_dims;
};

ComplexMatrix synthesis(const GFrameSystem& sys);
ComplexMatrix analysis(const GFrameSystem& sys);
ComplexMatrix frame_operator(const GFrameSystem& sys);

// T_Λ {f_i} = Σ Λ_i* f_i
CVector synthesize(const GFrameSystem& sys, const CoefficientVector& coeffs);
// f -> {Λ_i f}
CoefficientVector analyze(const GFrameSystem& sys, std::span<const cplx> f);

// Builds a system from an analysis operator (Σm_i x n) split at block_dims.
GFrameSystem system_from_analysis(const ComplexMatrix& analysis_op,
                                  std::span<const std::size_t> block_dims);

// Optimal lower bound max{λ >= 0 : S_Λ - λ K K* ⪰ 0}, by 60-step bisection.
// K = 0 reports λ_max(S_Λ). Throws DimensionMismatch.
double optimal_k_lower_bound(const GFrameSystem& sys, const ComplexMatrix& k,
                             const ToleranceConfig& tol = {});

// Closed form 1 / ||T_Λ^+ K||^2, valid when R(K) ⊆ R(T_Λ) and K != 0.
double closed_form_k_lower_bound(const GFrameSystem& sys, const ComplexMatrix& k,
                                 const ToleranceConfig& tol = {});

FrameBounds classify(const GFrameSystem& sys, const ComplexMatrix& k, const ToleranceConfig& tol = {});

InducedFrame induced_frame(const GFrameSystem& sys);
FrameBounds induced_frame_bounds(const InducedFrame& ind, const ToleranceConfig& tol = {});

}  // namespace kgframe
