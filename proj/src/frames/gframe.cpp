#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "kgframe/douglas.hpp"
#include "kgframe/errors.hpp"
#include "kgframe/gframe.hpp"

namespace kgframe {

// ---- GFrameSystem ----------------------------------------------------------

GFrameSystem::GFrameSystem(std::size_t ambient_dim, std::vector<ComplexMatrix> operators)
    : ambient_dim_(ambient_dim), operators_(std::move(operators)) {
  if (operators_.empty())
    throw Error(ErrorKind::DimensionMismatch, "a g-frame system needs at least one block");
  offsets_.reserve(operators_.size());
  for (std::size_t i = 0; i < operators_.size(); ++i) {
    if (operators_[i].cols() != ambient_dim_)
      throw Error(ErrorKind::DimensionMismatch,
                  "block " + std::to_string(i) + " has " + std::to_string(operators_[i].cols()) +
                      " columns, ambient dimension is " + std::to_string(ambient_dim_));
    offsets_.push_back(coefficient_dim_);
    coefficient_dim_ += operators_[i].rows();
  }
}

GFrameSystem GFrameSystem::zeros(std::size_t ambient_dim, std::span<const std::size_t> block_dims) {
  std::vector<ComplexMatrix> ops;
  ops.reserve(block_dims.size());
  for (std::size_t m : block_dims) ops.emplace_back(m, ambient_dim);
  return {ambient_dim, std::move(ops)};
}

std::vector<std::size_t> GFrameSystem::block_dims() const {
  std::vector<std::size_t> dims;
  dims.reserve(operators_.size());
  for (const auto& op : operators_) dims.push_back(op.rows());
  return dims;
}

bool GFrameSystem::same_structure(const GFrameSystem& other) const {
  return ambient_dim_ == other.ambient_dim_ && block_dims() == other.block_dims();
}

// ---- CoefficientVector -----------------------------------------------------

CoefficientVector::CoefficientVector(std::vector<std::size_t> block_dims, std::vector<CVector> blocks)
    : block_dims_(std::move(block_dims)), blocks_(std::move(blocks)) {
  if (block_dims_.size() != blocks_.size())
    throw Error(ErrorKind::DimensionMismatch, "block count does not match block_dims");
  for (std::size_t i = 0; i < blocks_.size(); ++i)
    if (blocks_[i].size() != block_dims_[i])
      throw Error(ErrorKind::DimensionMismatch, "block " + std::to_string(i) + " has length " +
                                                    std::to_string(blocks_[i].size()) + ", expected " +
                                                    std::to_string(block_dims_[i]));
}

CoefficientVector CoefficientVector::from_flat(std::span<const std::size_t> block_dims,
                                               std::span<const cplx> flat) {
  const std::size_t total = std::accumulate(block_dims.begin(), block_dims.end(), std::size_t{0});
  if (flat.size() != total)
    throw Error(ErrorKind::DimensionMismatch, "flat coefficient length " + std::to_string(flat.size()) +
                                                  " != " + std::to_string(total));
  std::vector<CVector> blocks;
  std::size_t at = 0;
  for (std::size_t m : block_dims) {
    blocks.emplace_back(flat.begin() + static_cast<std::ptrdiff_t>(at),
                        flat.begin() + static_cast<std::ptrdiff_t>(at + m));
    at += m;
  }
  return {std::vector<std::size_t>(block_dims.begin(), block_dims.end()), std::move(blocks)};
}

CoefficientVector CoefficientVector::unit(std::span<const std::size_t> block_dims, std::size_t block,
                                          std::size_t index) {
  if (block >= block_dims.size() || index >= block_dims[block])
    throw Error(ErrorKind::DimensionMismatch, "unit coefficient index out of range");
  std::vector<CVector> blocks;
  for (std::size_t m : block_dims) blocks.emplace_back(m, cplx{0.0, 0.0});
  blocks[block][index] = 1.0;
  return {std::vector<std::size_t>(block_dims.begin(), block_dims.end()), std::move(blocks)};
}

CVector CoefficientVector::flat() const {
  CVector out;
  for (const auto& b : blocks_) out.insert(out.end(), b.begin(), b.end());
  return out;
}

double CoefficientVector::norm() const { return vector_norm(flat()); }

// ---- operators -------------------------------------------------------------

ComplexMatrix analysis(const GFrameSystem& sys) {
  ComplexMatrix out(sys.coefficient_dim(), sys.ambient_dim());
  for (std::size_t i = 0; i < sys.block_count(); ++i) out.set_block(sys.block_offset(i), 0, sys.op(i));
  return out;
}

ComplexMatrix synthesis(const GFrameSystem& sys) { return adjoint(analysis(sys)); }

ComplexMatrix frame_operator(const GFrameSystem& sys) {
  const ComplexMatrix t = synthesis(sys);
  return t * adjoint(t);
}

CVector synthesize(const GFrameSystem& sys, const CoefficientVector& coeffs) {
  if (coeffs.block_dims() != sys.block_dims())
    throw Error(ErrorKind::DimensionMismatch, "coefficient blocks do not match the system");
  return synthesis(sys) * std::span<const cplx>(coeffs.flat());
}

CoefficientVector analyze(const GFrameSystem& sys, std::span<const cplx> f) {
  const auto dims = sys.block_dims();
  return CoefficientVector::from_flat(dims, analysis(sys) * f);
}

GFrameSystem system_from_analysis(const ComplexMatrix& analysis_op,
                                  std::span<const std::size_t> block_dims) {
  const std::size_t total = std::accumulate(block_dims.begin(), block_dims.end(), std::size_t{0});
  if (analysis_op.rows() != total)
    throw Error(ErrorKind::DimensionMismatch, "analysis operator has " +
                                                  std::to_string(analysis_op.rows()) +
                                                  " rows, blocks need " + std::to_string(total));
  std::vector<ComplexMatrix> ops;
  std::size_t at = 0;
  for (std::size_t m : block_dims) {
    ops.push_back(analysis_op.block(at, 0, m, analysis_op.cols()));
    at += m;
  }
  return {analysis_op.cols(), std::move(ops)};
}

// ---- bounds ----------------------------------------------------------------

namespace {

void require_square_k(const GFrameSystem& sys, const ComplexMatrix& k) {
  if (k.rows() != sys.ambient_dim() || k.cols() != sys.ambient_dim())
    throw Error(ErrorKind::DimensionMismatch,
                "K must be " + std::to_string(sys.ambient_dim()) + "x" +
                    std::to_string(sys.ambient_dim()) + ", got " + std::to_string(k.rows()) + "x" +
                    std::to_string(k.cols()));
}

double largest_eigenvalue(const ComplexMatrix& h, const ToleranceConfig& tol) {
  const auto ev = hermitian_eigenvalues(h, tol);
  return ev.empty() ? 0.0 : std::max(ev.back(), 0.0);
}

}  // namespace

double optimal_k_lower_bound(const GFrameSystem& sys, const ComplexMatrix& k, const ToleranceConfig& tol) {
  require_square_k(sys, k);
  const ComplexMatrix s = frame_operator(sys);
  const double upper = largest_eigenvalue(s, tol);
  const double k_norm = operator_norm(k);
  if (k_norm == 0.0) return upper;
  if (upper == 0.0) return 0.0;

  // A <= f*Sf / f*KK*f for f on the smallest positive singular direction of K*.
  const double smin = smallest_positive_singular_value(k, tol);
  const double hi = upper / (smin * smin);
  const double a = max_psd_multiplier(s, k * adjoint(k), hi, tol);

  // Anything below psd_rel on the natural scale λ_max(S)/||K||^2 is the
  // bisection's floor, not a bound.
  if (a < tol.psd_rel * upper / (k_norm * k_norm)) return 0.0;
  return a;
}

double closed_form_k_lower_bound(const GFrameSystem& sys, const ComplexMatrix& k,
                                 const ToleranceConfig& tol) {
  require_square_k(sys, k);
  const double q = operator_norm(pinv(synthesis(sys), tol) * k);
  if (q == 0.0) return largest_eigenvalue(frame_operator(sys), tol);
  return 1.0 / (q * q);
}

FrameBounds classify(const GFrameSystem& sys, const ComplexMatrix& k, const ToleranceConfig& tol) {
  require_square_k(sys, k);
  const std::size_t n = sys.ambient_dim();
  const ComplexMatrix t = synthesis(sys);
  const ComplexMatrix s = t * adjoint(t);
  const ComplexMatrix kk = k * adjoint(k);

  FrameBounds out;
  out.upper = largest_eigenvalue(s, tol);
  out.lower = optimal_k_lower_bound(sys, k, tol);
  out.is_bessel = true;
  out.is_k_g_frame = range_included(k, t, tol);
  out.is_g_frame = range_included(ComplexMatrix::identity(n), t, tol);

  const double s_norm = frobenius_norm(s);
  const double kk_norm = frobenius_norm(kk);
  out.is_parseval = frobenius_norm(s - kk) <= tol.residual_rel * std::max({s_norm, kk_norm, 0.0});
  if (out.is_parseval) {
    out.tightness = 1.0;
  } else if (kk_norm > 0.0) {
    // least-squares λ for S = λ KK*, accepted if it fits
    cplx inner = 0.0;
    for (std::size_t i = 0; i < s.data().size(); ++i) inner += std::conj(kk.data()[i]) * s.data()[i];
    const double lambda = inner.real() / (kk_norm * kk_norm);
    if (frobenius_norm(s - cplx(lambda) * kk) <= tol.residual_rel * s_norm) out.tightness = lambda;
  }
  return out;
}

InducedFrame induced_frame(const GFrameSystem& sys) {
  InducedFrame out;
  out.ambient_dim = sys.ambient_dim();
  out.block_dims = sys.block_dims();
  for (const auto& op : sys.operators()) {
    // u_{i,j} = Λ_i* e_{i,j}: column j of Λ_i*, i.e. the conjugated row j of Λ_i
    for (std::size_t j = 0; j < op.rows(); ++j) {
      CVector u(op.cols());
      for (std::size_t c = 0; c < op.cols(); ++c) u[c] = std::conj(op(j, c));
      out.vectors.push_back(std::move(u));
    }
  }
  return out;
}

FrameBounds induced_frame_bounds(const InducedFrame& ind, const ToleranceConfig& tol) {
  const std::size_t n = ind.ambient_dim;
  ComplexMatrix cols(n, ind.vectors.size());
  for (std::size_t j = 0; j < ind.vectors.size(); ++j) {
    if (ind.vectors[j].size() != n)
      throw Error(ErrorKind::DimensionMismatch, "induced vector " + std::to_string(j) + " has wrong length");
    for (std::size_t r = 0; r < n; ++r) cols(r, j) = ind.vectors[j][r];
  }
  const ComplexMatrix s = cols * adjoint(cols);
  const auto ev = hermitian_eigenvalues(s, tol);

  FrameBounds out;
  out.is_bessel = true;
  out.upper = ev.empty() ? 0.0 : std::max(ev.back(), 0.0);
  out.is_g_frame = range_included(ComplexMatrix::identity(n), cols, tol);
  out.is_k_g_frame = out.is_g_frame;
  out.lower = (out.is_g_frame && !ev.empty()) ? std::max(ev.front(), 0.0) : 0.0;
  if (n == 0) out.lower = out.upper;
  const ComplexMatrix id = ComplexMatrix::identity(n);
  out.is_parseval = frobenius_norm(s - id) <= tol.residual_rel * std::max(frobenius_norm(id), 1.0);
  if (out.is_g_frame && out.upper - out.lower <= tol.residual_rel * out.upper)
    out.tightness = out.is_parseval ? 1.0 : out.upper;
  return out;
}

}  // namespace kgframe
