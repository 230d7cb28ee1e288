#pragma once

// Atomic systems for K and the constructions that preserve them.
//
// A family {Λ_i} is an atomic system for K when it is Bessel and every K f has
// a coefficient representation K f = Σ Λ_i* a_i with ||a|| <= c ||f||. In
// finite dimensions this is the same as being a K-g-frame, and the minimal
// coefficients are a = T_Λ^+ K f.

#include <optional>

#include "kgframe/duality.hpp"
#include "kgframe/gframe.hpp"

namespace kgframe {

struct AtomicCertificate {
  bool is_atomic = false;
  double coefficient_bound = 0.0;           // c = ||T_Λ^+ K||
  std::optional<GFrameSystem> witness_dual;  // canonical K-dual when atomic
};

struct AtomicCoefficients {
  CoefficientVector a;
  double c = 0.0;
};

struct CombinedBound {
  double predicted_lower = 0.0;
  double predicted_upper = 0.0;
  double measured_lower = 0.0;
  double measured_upper = 0.0;
  bool holds = false;
  // αK1 + βK2 (or K1 K2) vanished; bounds follow the K = 0 convention.
  bool degenerate = false;
  // combine_linear only: the constant without the factor 2 from
  // ||a + b||^2 <= 2||a||^2 + 2||b||^2. It can exceed the true optimal bound.
  std::optional<double> unfactored_lower;
};

// holds <=> predicted_lower <= measured_lower + psd_rel * max(1, predicted_lower)
//       and measured_upper <= predicted_upper + psd_rel * max(1, predicted_upper)
bool bound_holds(const CombinedBound& b, const ToleranceConfig& tol);

struct CombinedSystem {
  GFrameSystem combined;
  CombinedBound bound;
};

struct ParsevalSum {
  GFrameSystem combined;
  double tightness = 0.0;  // least-squares λ in S_combined ≈ λ K K*
  double residual = 0.0;   // ||S_combined - 2 K K*||_F / ||K K*||_F
};

struct PositivePerturbation {
  GFrameSystem combined;
  double frame_op_residual = 0.0;  // ||S_c - (I+U^n)* S (I+U^n)||_F / ||S||_F
  double measured_lower = 0.0;     // optimal K lower bound of the combined system
  double base_lower = 0.0;         // optimal K lower bound of the input system
  bool combined_is_k_g_frame = false;
};

struct FrameOperatorCriterion {
  bool holds = false;
  double lambda_star = 0.0;
};

// Minimal-norm coefficients a = T_Λ^+ K f. Throws NotKGFrame.
AtomicCoefficients atomic_coefficients(const GFrameSystem& sys, const ComplexMatrix& k,
                                       std::span<const cplx> f, const ToleranceConfig& tol = {});

AtomicCertificate is_atomic_system(const GFrameSystem& sys, const ComplexMatrix& k,
                                   const ToleranceConfig& tol = {});

// Bound for αK1 + βK2: A1 A2 / (2 (A2 |α|^2 + A1 |β|^2)). Throws NotAtomicForInputs.
CombinedBound combine_linear(const GFrameSystem& sys, const ComplexMatrix& k1, const ComplexMatrix& k2,
                             cplx alpha, cplx beta, const ToleranceConfig& tol = {});

// Bound for K1 K2: A1 / ||K2*||^2. Throws NotAtomicForInputs.
CombinedBound combine_product(const GFrameSystem& sys, const ComplexMatrix& k1, const ComplexMatrix& k2,
                              const ToleranceConfig& tol = {});

// {Λ_i U + Γ_i V} for T_Λ T_Γ* = 0 with U (or V) surjective and commuting with K*.
// A1 is the lower bound of the witness system for K, 0 if it is not a K-g-frame by itself.
// Throws OrthogonalityViolated, NotSurjective, CommutationViolated.
CombinedSystem perturb_sum(const GFrameSystem& sys_l, const GFrameSystem& sys_g, const ComplexMatrix& u,
                           const ComplexMatrix& v, const ComplexMatrix& k, const ToleranceConfig& tol = {});

// {Λ_i + Γ_i} for two Parseval K-g-frames with T_Λ T_Γ* = 0; S = 2 K K*.
// Throws NotParseval, OrthogonalityViolated.
ParsevalSum parseval_sum(const GFrameSystem& sys_l, const GFrameSystem& sys_g, const ComplexMatrix& k,
                         const ToleranceConfig& tol = {});

// {Λ_i U1 + Γ_i U2} with R(T_i) ⊆ R(U_i* T_i); bound 1/λ1 + 1/λ2 where
// λ_i = inf{μ : K K* ⪯ μ (U_i* T_i)(U_i* T_i)*}. A term whose system is
// identically zero contributes nothing.
// Throws OrthogonalityViolated, RangeHypothesisViolated, NotAtomicForInputs.
CombinedSystem operator_weighted_sum(const GFrameSystem& sys_l, const GFrameSystem& sys_g,
                                     const ComplexMatrix& u1, const ComplexMatrix& u2,
                                     const ComplexMatrix& k, const ToleranceConfig& tol = {});

// {Λ_i (I + U^n)} for U ⪰ 0. The frame-operator identity is exact; the lower
// bound of the result is measured, not assumed. Throws NotPositive, NotAtomicForInputs.
PositivePerturbation positive_perturbation(const GFrameSystem& sys, const ComplexMatrix& u,
                                           const ComplexMatrix& k, int n_power,
                                           const ToleranceConfig& tol = {});

// K-g-frame iff S_Λ ⪰ λ K K* for some λ > 0.
FrameOperatorCriterion k_g_frame_via_frame_operator(const GFrameSystem& sys, const ComplexMatrix& k,
                                                    const ToleranceConfig& tol = {});

// Blockwise Λ_i A + Γ_i B. Throws DimensionMismatch.
GFrameSystem mix_systems(const GFrameSystem& sys_l, const ComplexMatrix& a, const GFrameSystem& sys_g,
                         const ComplexMatrix& b);

// ||T_Λ T_Γ*||_F <= residual_rel * max(1, ||T_Λ||_F ||T_Γ||_F)
bool are_orthogonal(const GFrameSystem& sys_l, const GFrameSystem& sys_g, const ToleranceConfig& tol);

}  // namespace kgframe
