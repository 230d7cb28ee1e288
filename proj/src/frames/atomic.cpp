#include <algorithm>
#include <cmath>
#include <string>

#include "kgframe/atomic.hpp"
#include "kgframe/douglas.hpp"
#include "kgframe/errors.hpp"

namespace kgframe {

namespace {

void require_k_shape(const GFrameSystem& sys, const ComplexMatrix& k, const char* name) {
  const std::size_t n = sys.ambient_dim();
  if (k.rows() != n || k.cols() != n)
    throw Error(ErrorKind::DimensionMismatch,
                std::string(name) + " must be " + std::to_string(n) + "x" + std::to_string(n));
}

double lambda_max(const ComplexMatrix& h, const ToleranceConfig& tol) {
  const auto ev = hermitian_eigenvalues(h, tol);
  return ev.empty() ? 0.0 : std::max(ev.back(), 0.0);
}

bool is_zero_system(const GFrameSystem& sys) { return frobenius_norm(analysis(sys)) == 0.0; }

// Lower bound of sys for K, or NotAtomicForInputs.
double atomic_lower_bound(const GFrameSystem& sys, const ComplexMatrix& k, const char* what,
                          const ToleranceConfig& tol) {
  const FrameBounds b = classify(sys, k, tol);
  if (!b.is_k_g_frame)
    throw Error(ErrorKind::NotAtomicForInputs, std::string("system is not atomic for ") + what);
  return b.lower;
}

void measure(CombinedBound& out, const GFrameSystem& sys, const ComplexMatrix& k,
             const ToleranceConfig& tol) {
  const FrameBounds b = classify(sys, k, tol);
  out.measured_lower = b.lower;
  out.measured_upper = b.upper;
  out.holds = bound_holds(out, tol) && b.is_k_g_frame;
}

ComplexMatrix matrix_power(const ComplexMatrix& u, int n) {
  ComplexMatrix out = u;
  for (int i = 1; i < n; ++i) out = out * u;
  return out;
}

}  // namespace

bool bound_holds(const CombinedBound& b, const ToleranceConfig& tol) {
  return b.predicted_lower <= b.measured_lower + tol.psd_rel * std::max(1.0, b.predicted_lower) &&
         b.measured_upper <= b.predicted_upper + tol.psd_rel * std::max(1.0, b.predicted_upper);
}

GFrameSystem mix_systems(const GFrameSystem& sys_l, const ComplexMatrix& a, const GFrameSystem& sys_g,
                         const ComplexMatrix& b) {
  if (!sys_l.same_structure(sys_g))
    throw Error(ErrorKind::DimensionMismatch, "systems have different block structure");
  require_k_shape(sys_l, a, "U");
  require_k_shape(sys_l, b, "V");
  std::vector<ComplexMatrix> ops;
  ops.reserve(sys_l.block_count());
  for (std::size_t i = 0; i < sys_l.block_count(); ++i) ops.push_back(sys_l.op(i) * a + sys_g.op(i) * b);
  return {sys_l.ambient_dim(), std::move(ops)};
}

bool are_orthogonal(const GFrameSystem& sys_l, const GFrameSystem& sys_g, const ToleranceConfig& tol) {
  if (!sys_l.same_structure(sys_g))
    throw Error(ErrorKind::DimensionMismatch, "systems have different block structure");
  const ComplexMatrix tl = synthesis(sys_l);
  const ComplexMatrix tg = synthesis(sys_g);
  const double scale = std::max(1.0, frobenius_norm(tl) * frobenius_norm(tg));
  return frobenius_norm(tl * adjoint(tg)) <= tol.residual_rel * scale;
}

AtomicCoefficients atomic_coefficients(const GFrameSystem& sys, const ComplexMatrix& k,
                                       std::span<const cplx> f, const ToleranceConfig& tol) {
  require_k_shape(sys, k, "K");
  if (f.size() != sys.ambient_dim())
    throw Error(ErrorKind::DimensionMismatch, "vector f has length " + std::to_string(f.size()) +
                                                  ", expected " + std::to_string(sys.ambient_dim()));
  const ComplexMatrix t = synthesis(sys);
  if (!range_included(k, t, tol)) throw Error(ErrorKind::NotKGFrame, "R(K) is not contained in R(T_Λ)");
  const ComplexMatrix q = pinv(t, tol) * k;
  const auto dims = sys.block_dims();
  return {CoefficientVector::from_flat(dims, q * f), operator_norm(q)};
}

AtomicCertificate is_atomic_system(const GFrameSystem& sys, const ComplexMatrix& k,
                                   const ToleranceConfig& tol) {
  require_k_shape(sys, k, "K");
  AtomicCertificate out;
  out.is_atomic = classify(sys, k, tol).is_k_g_frame;
  out.coefficient_bound = operator_norm(pinv(synthesis(sys), tol) * k);
  if (out.is_atomic) out.witness_dual = canonical_k_dual(sys, k, tol).dual;
  return out;
}

CombinedBound combine_linear(const GFrameSystem& sys, const ComplexMatrix& k1, const ComplexMatrix& k2,
                             cplx alpha, cplx beta, const ToleranceConfig& tol) {
  require_k_shape(sys, k1, "K1");
  require_k_shape(sys, k2, "K2");
  const double a1 = atomic_lower_bound(sys, k1, "K1", tol);
  const double a2 = atomic_lower_bound(sys, k2, "K2", tol);
  const ComplexMatrix kc = alpha * k1 + beta * k2;

  CombinedBound out;
  out.predicted_upper = lambda_max(frame_operator(sys), tol);
  if (operator_norm(kc) == 0.0) {
    out.degenerate = true;
    out.predicted_lower = out.predicted_upper;
  } else {
    const double denom = a2 * std::norm(alpha) + a1 * std::norm(beta);
    out.predicted_lower = a1 * a2 / (2.0 * denom);
    out.unfactored_lower = a1 * a2 / denom;
  }
  measure(out, sys, kc, tol);
  return out;
}

CombinedBound combine_product(const GFrameSystem& sys, const ComplexMatrix& k1, const ComplexMatrix& k2,
                              const ToleranceConfig& tol) {
  require_k_shape(sys, k1, "K1");
  require_k_shape(sys, k2, "K2");
  const double a1 = atomic_lower_bound(sys, k1, "K1", tol);
  const ComplexMatrix kp = k1 * k2;

  CombinedBound out;
  out.predicted_upper = lambda_max(frame_operator(sys), tol);
  const double k2_norm = operator_norm(k2);
  if (operator_norm(kp) == 0.0) {
    out.degenerate = true;
    out.predicted_lower = out.predicted_upper;
  } else {
    out.predicted_lower = a1 / (k2_norm * k2_norm);
  }
  measure(out, sys, kp, tol);
  return out;
}

CombinedSystem perturb_sum(const GFrameSystem& sys_l, const GFrameSystem& sys_g, const ComplexMatrix& u,
                           const ComplexMatrix& v, const ComplexMatrix& k, const ToleranceConfig& tol) {
  require_k_shape(sys_l, k, "K");
  GFrameSystem combined = mix_systems(sys_l, u, sys_g, v);
  if (!are_orthogonal(sys_l, sys_g, tol))
    throw Error(ErrorKind::OrthogonalityViolated, "T_Λ T_Γ* != 0");

  const std::size_t n = sys_l.ambient_dim();
  const ComplexMatrix ks = adjoint(k);
  auto surjective = [&](const ComplexMatrix& w) { return rank(w, tol) == n; };
  auto commutes = [&](const ComplexMatrix& w) {
    return frobenius_norm(w * ks - ks * w) <= tol.residual_rel * frobenius_norm(k) * std::max(frobenius_norm(w), 1.0);
  };

  const bool u_ok = surjective(u) && commutes(u);
  const bool v_ok = surjective(v) && commutes(v);
  if (!u_ok && !v_ok) {
    if (!surjective(u) && !surjective(v))
      throw Error(ErrorKind::NotSurjective, "neither U nor V has full row rank");
    throw Error(ErrorKind::CommutationViolated, "no surjective operator commutes with K*");
  }

  const ComplexMatrix& witness = u_ok ? u : v;
  const GFrameSystem& witness_sys = u_ok ? sys_l : sys_g;
  const double a = classify(witness_sys, k, tol).lower;
  const auto sv = singular_values(witness);
  const double smin = sv.empty() ? 0.0 : sv.back();

  CombinedBound bound;
  bound.predicted_lower = a * smin * smin;
  const double nu = operator_norm(u);
  const double nv = operator_norm(v);
  bound.predicted_upper = lambda_max(frame_operator(sys_l), tol) * nu * nu +
                          lambda_max(frame_operator(sys_g), tol) * nv * nv;
  measure(bound, combined, k, tol);
  return {std::move(combined), bound};
}

ParsevalSum parseval_sum(const GFrameSystem& sys_l, const GFrameSystem& sys_g, const ComplexMatrix& k,
                         const ToleranceConfig& tol) {
  require_k_shape(sys_l, k, "K");
  if (!sys_l.same_structure(sys_g))
    throw Error(ErrorKind::DimensionMismatch, "systems have different block structure");
  const ComplexMatrix kk = k * adjoint(k);
  const double kk_norm = frobenius_norm(kk);
  auto parseval = [&](const GFrameSystem& s) {
    const ComplexMatrix so = frame_operator(s);
    return frobenius_norm(so - kk) <= tol.residual_rel * std::max(kk_norm, frobenius_norm(so));
  };
  if (!parseval(sys_l)) throw Error(ErrorKind::NotParseval, "first system: S_Λ != K K*");
  if (!parseval(sys_g)) throw Error(ErrorKind::NotParseval, "second system: S_Γ != K K*");
  if (!are_orthogonal(sys_l, sys_g, tol)) throw Error(ErrorKind::OrthogonalityViolated, "T_Λ T_Γ* != 0");

  const std::size_t n = sys_l.ambient_dim();
  const ComplexMatrix id = ComplexMatrix::identity(n);
  ParsevalSum out{mix_systems(sys_l, id, sys_g, id), 2.0, 0.0};
  const ComplexMatrix sc = frame_operator(out.combined);
  if (kk_norm > 0.0) {
    cplx inner = 0.0;
    for (std::size_t i = 0; i < sc.data().size(); ++i) inner += std::conj(kk.data()[i]) * sc.data()[i];
    out.tightness = inner.real() / (kk_norm * kk_norm);
    out.residual = frobenius_norm(sc - cplx(2.0) * kk) / kk_norm;
  } else {
    out.residual = frobenius_norm(sc);
  }
  return out;
}

CombinedSystem operator_weighted_sum(const GFrameSystem& sys_l, const GFrameSystem& sys_g,
                                     const ComplexMatrix& u1, const ComplexMatrix& u2,
                                     const ComplexMatrix& k, const ToleranceConfig& tol) {
  require_k_shape(sys_l, k, "K");
  GFrameSystem combined = mix_systems(sys_l, u1, sys_g, u2);
  if (!are_orthogonal(sys_l, sys_g, tol))
    throw Error(ErrorKind::OrthogonalityViolated, "T_Λ T_Γ* != 0");

  CombinedBound bound;
  const double k_norm = operator_norm(k);
  double predicted = 0.0;
  double upper = 0.0;
  const std::pair<const GFrameSystem*, const ComplexMatrix*> terms[] = {{&sys_l, &u1}, {&sys_g, &u2}};
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& [sys, u] = terms[i];
    const double nu = operator_norm(*u);
    upper += lambda_max(frame_operator(*sys), tol) * nu * nu;
    if (is_zero_system(*sys)) continue;

    const ComplexMatrix t = synthesis(*sys);
    const ComplexMatrix ut = adjoint(*u) * t;
    if (!range_included(t, ut, tol))
      throw Error(ErrorKind::RangeHypothesisViolated,
                  "R(T_" + std::to_string(i + 1) + ") is not contained in R(U_" + std::to_string(i + 1) + "* T_" +
                      std::to_string(i + 1) + ")");
    atomic_lower_bound(*sys, k, "K", tol);
    if (k_norm == 0.0) continue;
    predicted += 1.0 / min_majorization_constant(k, ut, tol);
  }
  bound.predicted_upper = upper;
  if (k_norm == 0.0) {
    bound.degenerate = true;
    predicted = lambda_max(frame_operator(combined), tol);
  }
  bound.predicted_lower = predicted;
  measure(bound, combined, k, tol);
  return {std::move(combined), bound};
}

PositivePerturbation positive_perturbation(const GFrameSystem& sys, const ComplexMatrix& u,
                                           const ComplexMatrix& k, int n_power,
                                           const ToleranceConfig& tol) {
  require_k_shape(sys, k, "K");
  require_k_shape(sys, u, "U");
  if (n_power < 1) throw Error(ErrorKind::InvalidArgument, "n_power must be >= 1");
  if (!is_hermitian(u, tol)) throw Error(ErrorKind::NotPositive, "U is not Hermitian");
  if (!psd_min_shift(u, tol).is_psd) throw Error(ErrorKind::NotPositive, "U has a negative eigenvalue");

  PositivePerturbation out{sys, 0.0, 0.0, 0.0, false};
  out.base_lower = atomic_lower_bound(sys, k, "K", tol);

  const std::size_t n = sys.ambient_dim();
  const ComplexMatrix w = ComplexMatrix::identity(n) + matrix_power(u, n_power);
  std::vector<ComplexMatrix> ops;
  for (const auto& op : sys.operators()) ops.push_back(op * w);
  out.combined = GFrameSystem(n, std::move(ops));

  const ComplexMatrix s = frame_operator(sys);
  const ComplexMatrix predicted = adjoint(w) * s * w;
  const double s_norm = frobenius_norm(s);
  const double diff = frobenius_norm(frame_operator(out.combined) - predicted);
  out.frame_op_residual = s_norm > 0.0 ? diff / s_norm : diff;

  const FrameBounds b = classify(out.combined, k, tol);
  out.measured_lower = b.lower;
  out.combined_is_k_g_frame = b.is_k_g_frame;
  return out;
}

FrameOperatorCriterion k_g_frame_via_frame_operator(const GFrameSystem& sys, const ComplexMatrix& k,
                                                    const ToleranceConfig& tol) {
  require_k_shape(sys, k, "K");
  FrameOperatorCriterion out;
  out.lambda_star = optimal_k_lower_bound(sys, k, tol);
  out.holds = out.lambda_star > 0.0 || operator_norm(k) == 0.0;
  return out;
}

}  // namespace kgframe
