#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kgframe/douglas.hpp"
#include "kgframe/duality.hpp"
#include "kgframe/errors.hpp"

namespace kgframe {

namespace {

void require_pair_shapes(const GFrameSystem& primal, const GFrameSystem& dual, const ComplexMatrix& k) {
  if (!primal.same_structure(dual))
    throw Error(ErrorKind::DimensionMismatch, "primal and dual systems have different block structure");
  const std::size_t n = primal.ambient_dim();
  if (k.rows() != n || k.cols() != n)
    throw Error(ErrorKind::DimensionMismatch, "K must be " + std::to_string(n) + "x" + std::to_string(n));
}

// Column norms of A * F for a probe matrix F whose columns are the probes.
std::vector<double> column_norms(const ComplexMatrix& a) {
  std::vector<double> out(a.cols(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out[c] += std::norm(a(r, c));
  for (double& x : out) x = std::sqrt(x);
  return out;
}

ComplexMatrix probe_matrix(const std::vector<CVector>& probes, std::size_t n) {
  ComplexMatrix f(n, probes.size());
  for (std::size_t j = 0; j < probes.size(); ++j) {
    if (probes[j].size() != n) throw Error(ErrorKind::DimensionMismatch, "probe has wrong length");
    for (std::size_t r = 0; r < n; ++r) f(r, j) = probes[j][r];
  }
  return f;
}

}  // namespace

double dual_reconstruction_residual(const GFrameSystem& primal, const GFrameSystem& dual,
                                    const ComplexMatrix& k) {
  require_pair_shapes(primal, dual, k);
  const ComplexMatrix recon = synthesis(primal) * analysis(dual);
  return frobenius_norm(recon - k) / std::max(frobenius_norm(k), 1.0);
}

bool is_k_dual(const GFrameSystem& primal, const GFrameSystem& dual, const ComplexMatrix& k,
               const ToleranceConfig& tol) {
  return dual_reconstruction_residual(primal, dual, k) <= tol.residual_rel;
}

KDualPair canonical_k_dual(const GFrameSystem& sys, const ComplexMatrix& k, const ToleranceConfig& tol) {
  const std::size_t n = sys.ambient_dim();
  if (k.rows() != n || k.cols() != n)
    throw Error(ErrorKind::DimensionMismatch, "K must be " + std::to_string(n) + "x" + std::to_string(n));

  DouglasFactor factor;
  try {
    factor = douglas_factor(k, synthesis(sys), tol);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::RangeNotIncluded) throw;
    throw Error(ErrorKind::NotKGFrame, "R(K) is not contained in R(T_Λ); no K-dual exists");
  }
  // T_Θ* = Q, so Θ_i is the i-th block row of Q.
  GFrameSystem dual = system_from_analysis(factor.q, sys.block_dims());
  const double residual = dual_reconstruction_residual(sys, dual, k);
  return {sys, std::move(dual), k, residual};
}

double worst_minimality_excess(const KDualPair& pair, const std::vector<GFrameSystem>& alternates,
                               const std::vector<CVector>& probes) {
  const std::size_t n = pair.primal.ambient_dim();
  const ComplexMatrix f = probe_matrix(probes, n);
  const auto f_norms = column_norms(f);
  const auto canon = column_norms(analysis(pair.dual) * f);
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& alt : alternates) {
    const auto other = column_norms(analysis(alt) * f);
    for (std::size_t j = 0; j < probes.size(); ++j) {
      if (f_norms[j] == 0.0) continue;
      worst = std::max(worst, (canon[j] - other[j]) / f_norms[j]);
    }
  }
  return worst;
}

bool dual_minimality_check(const KDualPair& pair, const std::vector<GFrameSystem>& alternates,
                           const std::vector<CVector>& probes, const ToleranceConfig& tol) {
  for (std::size_t i = 0; i < alternates.size(); ++i)
    if (!is_k_dual(pair.primal, alternates[i], pair.k, tol))
      throw Error(ErrorKind::NotADual, "alternate " + std::to_string(i) + " is not a K-dual");

  const double canon_norm = operator_norm(analysis(pair.dual));
  for (const auto& alt : alternates)
    if (canon_norm > operator_norm(analysis(alt)) + tol.residual_rel) return false;
  if (alternates.empty() || probes.empty()) return true;
  return worst_minimality_excess(pair, alternates, probes) <= tol.residual_rel;
}

SubspaceDualResult subspace_dual_implies_k_g_frame(const GFrameSystem& sys,
                                                   const GFrameSystem& dual_on_range,
                                                   const ComplexMatrix& k, const ToleranceConfig& tol) {
  require_pair_shapes(sys, dual_on_range, k);
  const std::size_t n = sys.ambient_dim();
  const ComplexMatrix s = frame_operator(sys);

  SubspaceDualResult out;
  const double k_norm = operator_norm(k);
  if (k_norm == 0.0) {
    out.measured_lower = optimal_k_lower_bound(sys, k, tol);
    out.predicted_lower = out.measured_lower;
    out.holds = true;
    return out;
  }

  const ComplexMatrix basis = range_basis(k, tol);
  const ComplexMatrix p = basis * adjoint(basis);
  const ComplexMatrix mixed = synthesis(dual_on_range) * analysis(sys);  // Σ Γ_i* Λ_i
  const ComplexMatrix recon = p * mixed * basis - basis;
  const double dual_scale = std::max(operator_norm(mixed), 1.0);
  for (std::size_t j = 0; j < basis.cols(); ++j)
    if (vector_norm(recon.col(j)) > tol.residual_rel * dual_scale)
      throw Error(ErrorKind::HypothesisViolated,
                  "duality on R(K): P Σ Γ_i* Λ_i g != g for basis vector " + std::to_string(j));

  const ComplexMatrix leak = (ComplexMatrix::identity(n) - p) * s * p;
  if (frobenius_norm(leak) > tol.residual_rel * frobenius_norm(s))
    throw Error(ErrorKind::HypothesisViolated, "S_Λ-invariance: S_Λ(R(K)) is not contained in R(K)");

  const auto ev = hermitian_eigenvalues(frame_operator(dual_on_range), tol);
  const double d = ev.empty() ? 0.0 : ev.back();
  out.predicted_lower = 1.0 / (d * k_norm * k_norm);
  out.measured_lower = optimal_k_lower_bound(sys, k, tol);
  out.holds = out.measured_lower >= out.predicted_lower - tol.psd_rel * std::max(1.0, out.predicted_lower);
  return out;
}

}  // namespace kgframe
