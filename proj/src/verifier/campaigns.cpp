#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <thread>

#include "kgframe/douglas.hpp"
#include "kgframe/errors.hpp"
#include "kgframe/json_io.hpp"
#include "kgframe/verifier.hpp"

namespace kgframe {

namespace {

struct TrialResult {
  bool pass = true;
  double residual = 0.0;
  std::string reason;
  json instance;
  std::vector<std::pair<std::string, bool>> tallies;
  bool conclusion_failed = false;
};

struct Shape {
  std::size_t n = 1;
  std::vector<std::size_t> dims;
  std::size_t total() const { return std::accumulate(dims.begin(), dims.end(), std::size_t{0}); }
};

using TrialFn = std::function<void(Rng&, const CampaignDims&, const ToleranceConfig&, TrialResult&)>;

void check(TrialResult& r, bool ok, double residual, const std::string& what) {
  if (std::isfinite(residual)) r.residual = std::max(r.residual, residual);
  else r.residual = std::numeric_limits<double>::infinity();
  if (!ok) {
    r.pass = false;
    if (!r.reason.empty()) r.reason += "; ";
    r.reason += what;
  }
}

void audit(TrialResult& r, bool ok, const std::string& what) {
  if (!ok) check(r, false, 0.0, "hypothesis audit: " + what);
}

Shape sample_shape(Rng& rng, const CampaignDims& d) {
  Shape s;
  s.n = rng.index(d.n.lo, d.n.hi);
  const std::size_t blocks = rng.index(d.blocks.lo, d.blocks.hi);
  for (std::size_t i = 0; i < blocks; ++i) s.dims.push_back(rng.index(d.m.lo, d.m.hi));
  return s;
}

// Appends blocks of the largest allowed size until Σm_i >= need.
void grow_to(Shape& s, const CampaignDims& d, std::size_t need) {
  while (s.total() < need) s.dims.push_back(d.m.hi);
}

ComplexMatrix real_diagonal(std::span<const double> v) { return ComplexMatrix::diagonal(v); }

double rel_gap(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

json spec_json(const GFrameSystem& sys, std::optional<ComplexMatrix> k = std::nullopt) {
  FrameSpecFile f{sys};
  f.k = std::move(k);
  return frame_spec_to_json(f);
}

// ---- shared instance families ------------------------------------------------

GFrameSystem random_system(Rng& rng, const Shape& s) {
  if (rng.coin(0.3)) {
    const std::size_t r = rng.index(1, std::min(s.n, s.total()));
    return gen_low_rank_system(rng, s.n, s.dims, r);
  }
  return gen_system(rng, s.n, s.dims);
}

struct MembershipInstance {
  GFrameSystem sys;
  ComplexMatrix k;
  bool expected;
};

// K inside R(T_Λ) (possibly rank deficient) or with an engineered component outside it.
MembershipInstance membership_instance(Rng& rng, const CampaignDims& d, const ToleranceConfig& tol,
                                       bool force_inside) {
  const Shape s = sample_shape(rng, d);
  GFrameSystem sys = random_system(rng, s);
  const ComplexMatrix t = synthesis(sys);
  const std::size_t rt = rank(t, tol);
  const bool inside = force_inside || rt == s.n || rng.coin(0.5);
  if (inside) {
    const std::size_t r = rng.coin(0.05) ? 0 : rng.index(1, rt);
    return {std::move(sys), gen_k_with_range_in(rng, t, r, tol), true};
  }
  return {std::move(sys), gen_k_outside_range(rng, t, tol), false};
}

// Construction check independent of the rank test: size of the part of K outside R(T).
void audit_membership(TrialResult& r, const MembershipInstance& inst, const ToleranceConfig& tol) {
  const ComplexMatrix t = synthesis(inst.sys);
  const ComplexMatrix p = orth_projector(t, tol);
  const std::size_t n = inst.sys.ambient_dim();
  const double outside = frobenius_norm((ComplexMatrix::identity(n) - p) * inst.k);
  const double kn = frobenius_norm(inst.k);
  if (inst.expected) audit(r, outside <= 1e-10 * std::max(kn, 1.0), "K has a component outside R(T)");
  else audit(r, outside >= 0.5, "engineered component outside R(T) is missing");
}

// ---- campaigns -----------------------------------------------------------------

void trial_l23(Rng& rng, const CampaignDims& d, const ToleranceConfig& tol, TrialResult& r) {
  const Shape s = sample_shape(rng, d);
  const GFrameSystem sys = random_system(rng, s);
  r.instance = spec_json(sys);
  const InducedFrame ind = induced_frame(sys);
  audit(r, ind.vectors.size() == s.total(), "induced frame has the wrong number of vectors");

  const FrameBounds g = classify(sys, ComplexMatrix::identity(s.n), tol);
  const FrameBounds v = induced_frame_bounds(ind, tol);
  const double scale = std::max(1.0, g.upper);
  const double dl = std::abs(g.lower - v.lower) / scale;
  const double du = std::abs(g.upper - v.upper) / scale;
  check(r, dl <= 1e-8, dl, "lower bounds differ");
  check(r, du <= 1e-8, du, "upper bounds differ");
  check(r, g.is_g_frame == v.is_g_frame, 0.0, "g-frame and induced-frame classifications differ");
}

void trial_l24(Rng& rng, const CampaignDims& d, const ToleranceConfig& tol, TrialResult& r) {
  const MembershipInstance inst = membership_instance(rng, d, tol, false);
  r.instance = spec_json(inst.sys, inst.k);
  audit_membership(r, inst, tol);
  const ComplexMatrix t = synthesis(inst.sys);
  const FrameBounds b = classify(inst.sys, inst.k, tol);
  const bool by_rank = rank(hstack(t, inst.k), tol) == rank(t, tol);
  const bool by_bound = b.lower > 0.0 || operator_norm(inst.k) == 0.0;
  check(r, b.is_k_g_frame == inst.expected, 0.0, "classify disagrees with construction");
  check(r, by_rank == inst.expected, 0.0, "rank([T|K]) test disagrees with construction");
  check(r, by_bound == inst.expected, 0.0, "lower bound positivity disagrees with construction");
}

void trial_l25(Rng& rng, const CampaignDims& d, const ToleranceConfig& tol, TrialResult& r) {
  const MembershipInstance inst = membership_instance(rng, d, tol, false);
  r.instance = spec_json(inst.sys, inst.k);
  audit_membership(r, inst, tol);
  bool has_dual = false;
  try {
    const KDualPair pair = canonical_k_dual(inst.sys, inst.k, tol);
    has_dual = true;
    check(r, is_k_dual(pair.primal, pair.dual, inst.k, tol), pair.reconstruction_residual,
          "canonical dual does not reconstruct K");
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotKGFrame) throw;
  }
  check(r, has_dual == inst.expected, 0.0, "dual existence disagrees with construction");
  check(r, classify(inst.sys, inst.k, tol).is_k_g_frame == has_dual, 0.0, "dual existence disagrees with classify");
}

void trial_l26(Rng& rng, const CampaignDims& d, const ToleranceConfig& tol, TrialResult& r) {
  const std::size_t n = rng.index(d.n.lo, d.n.hi);
  const std::size_t p = rng.index(1, std::min(n + 2, d.max_dim));
  const std::size_t q = rng.index(1, n);
  const double sc = 1.0 / std::sqrt(static_cast<double>(n));
  ComplexMatrix v;
  if (rng.coin(0.3)) {
    const std::size_t rv = rng.index(1, std::min(n, p));
    v = random_matrix(rng, n, rv, sc) * random_matrix(rng, rv, p, sc);
  } else {
    v = random_matrix(rng, n, p, sc);
  }
  ComplexMatrix q0 = random_matrix(rng, p, q, sc);
  if (rng.coin(0.5)) q0 = orth_projector(adjoint(v), tol) * q0;
  const ComplexMatrix u = v * q0;
  r.instance = json{{"U", matrix_to_json(u)}, {"V", matrix_to_json(v)}, {"Q0", matrix_to_json(q0)}};
  audit(r, frobenius_norm(v) > 0.0, "V is zero");

  check(r, range_included(u, v, tol), 0.0, "range inclusion not detected");
  const DouglasFactor f = douglas_factor(u, v, tol);
  const double un = frobenius_norm(u);
  const double res = un > 0.0 ? frobenius_norm(u - v * f.q) / un : frobenius_norm(v * f.q);
  check(r, res <= 1e-10, res, "U != V Q");
  const double excess = operator_norm(f.q) - operator_norm(q0);
  check(r, excess <= 1e-10, std::max(excess, 0.0), "||Q|| exceeds ||Q0||");
  const double mu = min_majorization_constant(u, v, tol);
  const double gap = f.mu_star > 0.0 ? rel_gap(mu, f.mu_star) : mu;
  check(r, gap <= 1e-6, gap, "mu_star disagrees with the majorization bisection");

  // converse half on rank-deficient V
  if (rank(v, tol) < n && rng.coin(0.5)) {
    const ComplexMatrix perp = null_basis(adjoint(v), tol);
    ComplexMatrix u2 = u;
    const CVector dir = perp * std::span<const cplx>(random_vector(rng, perp.cols()));
    const double dn = vector_norm(dir);
    for (std::size_t i = 0; i < n; ++i) u2(i, 0) += dir[i] / dn;
    check(r, !range_included(u2, v, tol), 0.0, "outside component not detected");
    bool threw = false;
    try {
      (void)min_majorization_constant(u2, v, tol);
    } catch (const Error& e) {
      threw = e.kind() == ErrorKind::RangeNotIncluded;
    }
    check(r, threw, 0.0, "majorization constant finite for a non-included range");
  }
}

void trial_t32(Rng& rng, const CampaignDims& d, const ToleranceConfig& tol, TrialResult& r) {
  const MembershipInstance inst = membership_instance(rng, d, tol, true);
  r.instance = spec_json(inst.sys, inst.k);
  audit_membership(r, inst, tol);

  const KDualPair pair = canonical_k_dual(inst.sys, inst.k, tol);
  const double kf = frobenius_norm(inst.k);
  const double recon = frobenius_norm(synthesis(inst.sys) * analysis(pair.dual) - inst.k);
  check(r, recon <= 1e-10 * kf, kf > 0.0 ? recon / kf : recon, "T_Λ T_Θ* != K");
  if (kf > 0.0) {
    const double a = optimal_k_lower_bound(inst.sys, inst.k, tol);
    const double tn = operator_norm(synthesis(pair.dual));
    const double gap = std::abs(a * tn * tn - 1.0);
    check(r, gap <= 1e-6, gap, "A_opt ||T_Θ||^2 != 1");
  }

  std::vector<GFrameSystem> alternates;
  for (int i = 0; i < 5; ++i) {
    alternates.push_back(gen_alternate_dual(rng, pair, tol));
    audit(r, is_k_dual(inst.sys, alternates.back(), inst.k, tol), "alternate is not a K-dual");
  }
  std::vector<CVector> probes;
  for (int i = 0; i < 10; ++i) probes.push_back(random_vector(rng, inst.sys.ambient_dim()));
  const double excess = worst_minimality_excess(pair, alternates, probes);
  check(r, excess <= 1e-8, std::max(excess, 0.0), "an alternate dual beats the canonical dual");
}

// S = W diag(s) W* with s_j > 0 exactly for j < r0; T = W diag(sqrt s) C.
GFrameSystem diagonalized_system(Rng& rng, const Shape& s, const ComplexMatrix& w, std::span<const double> spec) {
  const std::size_t m = s.total();
  const ComplexMatrix z = random_unitary(rng, m);
  ComplexMatrix c(s.n, m);
  for (std::size_t i = 0; i < std::min(s.n, m); ++i)
    for (std::size_t j = 0; j < m; ++j) c(i, j) = z(i, j);
  std::vector<double> root(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) root[i] = std::sqrt(spec[i]);
  const ComplexMatrix t = w * real_diagonal(root) * c;
  return system_from_analysis(adjoint(t), s.dims);
}

void trial_t33(Rng& rng, const CampaignDims& d, const ToleranceConfig& tol, TrialResult& r) {
  const Shape s = sample_shape(rng, d);
  const std::size_t r0 = rng.index(1, std::min(s.n, s.total()));
  std::vector<double> spec(s.n, 0.0);
  for (std::size_t j = 0; j < r0; ++j) spec[j] = rng.uniform(0.2, 2.0);
  const ComplexMatrix w = random_unitary(rng, s.n);
  const GFrameSystem sys = diagonalized_system(rng, s, w, spec);

  const std::size_t rk = rng.index(1, r0);
  const ComplexMatrix k = w.block(0, 0, s.n, rk) * random_matrix(rng, rk, s.n, 1.0 / std::sqrt(double(s.n)));
  ComplexMatrix dual_analysis = analysis(sys) * pinv(frame_operator(sys), tol);
  if (rng.coin(0.5)) dual_analysis = dual_analysis * orth_projector(k, tol);
  const GFrameSystem dual = system_from_analysis(dual_analysis, s.dims);

  FrameSpecFile f{sys};
  f.k = k;
  f.second_system = dual;
  r.instance = frame_spec_to_json(f);

  SubspaceDualResult res;
  try {
    res = subspace_dual_implies_k_g_frame(sys, dual, k, tol);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::HypothesisViolated) throw;
    audit(r, false, e.what());
    return;
  }
  const double shortfall = std::max(0.0, res.predicted_lower - res.measured_lower) / std::max(1.0, res.predicted_lower);
  check(r, res.holds, shortfall, "measured lower bound below 1/(D ||K||^2)");
  check(r, classify(sys, k, tol).is_k_g_frame, 0.0, "system is not a K-g-frame");
}

void trial_t43(Rng& rng, const CampaignDims& d, const ToleranceConfig& tol, TrialResult& r) {
  const MembershipInstance inst = membership_instance(rng, d, tol, false);
  r.instance = spec_json(inst.sys, inst.k);
  audit_membership(r, inst, tol);
  const std::size_t n = inst.sys.ambient_dim();

  const AtomicCertificate cert = is_atomic_system(inst.sys, inst.k, tol);
  check(r, cert.is_atomic == inst.expected, 0.0, "atomic predicate disagrees with construction");
  check(r, cert.is_atomic == classify(inst.sys, inst.k, tol).is_k_g_frame, 0.0,
        "atomic predicate disagrees with the K-g-frame predicate");
  const CVector f = random_vector(rng, n);
  if (cert.is_atomic) {
    check(r, cert.witness_dual.has_value() && is_k_dual(inst.sys, *cert.witness_dual, inst.k, tol), 0.0,
          "witness is not a K-dual");
    const AtomicCoefficients a = atomic_coefficients(inst.sys, inst.k, f, tol);
    const CVector kf = inst.k * std::span<const cplx>(f);
    const CVector back = synthesize(inst.sys, a.a);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) err += std::norm(back[i] - kf[i]);
    err = std::sqrt(err) / std::max(1.0, vector_norm(kf));
    check(r, err <= 1e-10, err, "coefficients do not reconstruct K f");
    const double fn = vector_norm(f);
    check(r, a.a.norm() <= a.c * fn * (1.0 + 1e-10) + 1e-14, 0.0, "||a|| exceeds c ||f||");
  } else {
    bool threw = false;
    try {
      (void)atomic_coefficients(inst.sys, inst.k, f, tol);
    } catch (const Error& e) {
      threw = e.kind() == ErrorKind::NotKGFrame;
    }
    check(r, threw, 0.0, "coefficients produced for a non-atomic system");
  }
}

double bound_violation(const CombinedBound& b) {
  const double lo = std::max(0.0, b.predicted_lower - b.measured_lower) / std::max(1.0, b.predicted_lower);
  const double hi = std::max(0.0, b.measured_upper - b.predicted_upper) / std::max(1.0, b.predicted_upper);
  return std::max(lo, hi);
}

void trial_t44(Rng& rng, const CampaignDims& d, const ToleranceConfig& tol, TrialResult& r) {
  const Shape s = sample_shape(rng, d);
  const GFrameSystem sys = random_system(rng, s);
  const ComplexMatrix t = synthesis(sys);
  const std::size_t rt = rank(t, tol);
  const ComplexMatrix k1 = gen_k_with_range_in(rng, t, rng.index(1, rt), tol);
  const ComplexMatrix k2 = gen_k_with_range_in(rng, t, rng.index(1, rt), tol);
  cplx alpha = rng.complex_normal();
  cplx beta = rng.complex_normal();
  const double u = rng.uniform();
  if (u < 0.15) alpha = 0.0;
  else if (u < 0.3) beta = 0.0;
  ComplexMatrix k3 = random_matrix(rng, s.n, s.n, 1.0 / std::sqrt(double(s.n)));
  if (rng.coin(0.2)) {
    const std::size_t r3 = rng.index(0, s.n - 1);
    k3 = random_matrix(rng, s.n, r3, 1.0) * random_matrix(rng, r3, s.n, 1.0 / std::sqrt(double(s.n)));
  }

  FrameSpecFile f{sys};
  f.k1 = k1;
  f.k2 = k2;
  f.alpha = alpha;
  f.beta = beta;
  f.k = k3;
  r.instance = frame_spec_to_json(f);
  audit(r, classify(sys, k1, tol).is_k_g_frame && classify(sys, k2, tol).is_k_g_frame,
        "system is not atomic for K1 and K2");

  const CombinedBound lin = combine_linear(sys, k1, k2, alpha, beta, tol);
  check(r, lin.holds, bound_violation(lin), "linear combination bound fails");
  const CombinedBound prod = combine_product(sys, k1, k3, tol);
  check(r, prod.holds, bound_violation(prod), "product bound fails");
}

double cross_term(const GFrameSystem& combined, const GFrameSystem& sl, const GFrameSystem& sg,
                  const ComplexMatrix& u, const ComplexMatrix& v) {
  const ComplexMatrix sc = frame_operator(combined);
  const ComplexMatrix pred = adjoint(u) * frame_operator(sl) * u + adjoint(v) * frame_operator(sg) * v;
  return frobenius_norm(sc - pred) / std::max(1.0, frobenius_norm(sc));
}

void audit_commuting_surjective(TrialResult& r, const ComplexMatrix& w, const ComplexMatrix& k) {
  const ComplexMatrix ks = adjoint(k);
  audit(r, frobenius_norm(w * ks - ks * w) <= 1e-12 * std::max(1.0, frobenius_norm(w) * frobenius_norm(k)),
        "U does not commute with K*");
  const auto sv = singular_values(w);
  audit(r, !sv.empty() && sv.back() >= 0.5 - 1e-12, "sigma_min(U) < 1/2");
}

void trial_t45(Rng& rng, const CampaignDims& d, const ToleranceConfig& tol, TrialResult& r) {
  Shape s = sample_shape(rng, d);
  while (s.dims.size() < 2) s.dims.push_back(rng.index(d.m.lo, d.m.hi));
  const std::size_t split = rng.index(1, s.dims.size() - 1);
  const auto [sl, sg] = gen_orthogonal_pair(rng, s.n, s.dims, split);
  const bool witness_left = rng.coin(0.5);
  const ComplexMatrix tw = synthesis(witness_left ? sl : sg);
  const ComplexMatrix k = gen_k_with_range_in(rng, tw, rng.index(1, rank(tw, tol)), tol);
  const ComplexMatrix w = gen_commuting_surjective(rng, k);
  const ComplexMatrix other =
      rng.coin(0.3) ? ComplexMatrix(s.n, s.n) : random_matrix(rng, s.n, s.n, 1.0 / std::sqrt(double(s.n)));
  const ComplexMatrix& u = witness_left ? w : other;
  const ComplexMatrix& v = witness_left ? other : w;

  FrameSpecFile f{sl};
  f.second_system = sg;
  f.k = k;
  f.u = u;
  f.v = v;
  r.instance = frame_spec_to_json(f);
  audit(r, are_orthogonal(sl, sg, tol), "T_Λ T_Γ* != 0");
  audit_commuting_surjective(r, w, k);

  const CombinedSystem out = perturb_sum(sl, sg, u, v, k, tol);
  check(r, out.bound.holds, bound_violation(out.bound), "perturbed-sum bound fails");
  const double ct = cross_term(out.combined, sl, sg, u, v);
  check(r, ct <= 1e-10, ct, "cross term in the frame operator does not vanish");
}

void trial_c46(Rng& rng, const CampaignDims& d, const ToleranceConfig& tol, TrialResult& r) {
  const Shape s = sample_shape(rng, d);
  const GFrameSystem sys = random_system(rng, s);
  const ComplexMatrix t = synthesis(sys);
  const ComplexMatrix k = gen_k_with_range_in(rng, t, rng.index(1, rank(t, tol)), tol);
  const ComplexMatrix u = gen_commuting_surjective(rng, k);
  const GFrameSystem zero = GFrameSystem::zeros(s.n, s.dims);
  const ComplexMatrix v(s.n, s.n);

  FrameSpecFile f{sys};
  f.second_system = zero;
  f.k = k;
  f.u = u;
  f.v = v;
  r.instance = frame_spec_to_json(f);
  audit_commuting_surjective(r, u, k);

  const CombinedSystem out = perturb_sum(sys, zero, u, v, k, tol);
  check(r, out.bound.holds, bound_violation(out.bound), "bound for {Λ_i U} fails");
  double diff = 0.0;
  for (std::size_t i = 0; i < sys.block_count(); ++i)
    diff = std::max(diff, frobenius_norm(out.combined.op(i) - sys.op(i) * u));
  check(r, diff <= 1e-12, diff, "combined blocks differ from Λ_i U");
}

void trial_c47(Rng& rng, const CampaignDims& d, const ToleranceConfig& tol, TrialResult& r) {
  Shape s = sample_shape(rng, d);
  grow_to(s, d, 2 * s.n);
  const double sc = 1.0 / std::sqrt(double(s.n));
  ComplexMatrix k = random_matrix(rng, s.n, s.n, sc);
  if (rng.coin(0.3)) {
    const std::size_t rk = rng.index(0, s.n - 1);
    k = random_matrix(rng, s.n, rk, 1.0) * random_matrix(rng, rk, s.n, sc);
  }
  const auto [sl, sg] = gen_parseval_pair(rng, k, s.dims);

  FrameSpecFile f{sl};
  f.second_system = sg;
  f.k = k;
  r.instance = frame_spec_to_json(f);
  const ComplexMatrix kk = k * adjoint(k);
  const double kkn = frobenius_norm(kk);
  audit(r, frobenius_norm(frame_operator(sl) - kk) <= tol.residual_rel * std::max(kkn, 1e-300) ||
               (kkn == 0.0 && frobenius_norm(frame_operator(sl)) == 0.0),
        "first system is not Parseval");
  audit(r, frobenius_norm(frame_operator(sg) - kk) <= tol.residual_rel * std::max(kkn, 1e-300) ||
               (kkn == 0.0 && frobenius_norm(frame_operator(sg)) == 0.0),
        "second system is not Parseval");
  audit(r, are_orthogonal(sl, sg, tol), "T_Λ T_Γ* != 0");

  const ParsevalSum out = parseval_sum(sl, sg, k, tol);
  check(r, out.residual <= 1e-10, out.residual, "S_combined != 2 K K*");
  if (kkn > 0.0) check(r, std::abs(out.tightness - 2.0) <= 1e-9, std::abs(out.tightness - 2.0) / 2.0, "tightness != 2");
}

// U* = B G B* + (I - BB*) H (I - BB*): invertible on R(T) and maps it onto itself.
ComplexMatrix range_preserving(Rng& rng, const ComplexMatrix& t, const ToleranceConfig& tol) {
  const std::size_t n = t.rows();
  const ComplexMatrix b = range_basis(t, tol);
  const std::size_t r = b.cols();
  std::vector<double> scale(r);
  for (auto& x : scale) x = rng.uniform(0.5, 2.0);
  const ComplexMatrix g = random_unitary(rng, r) * real_diagonal(scale);
  const ComplexMatrix comp = ComplexMatrix::identity(n) - b * adjoint(b);
  const ComplexMatrix h = random_matrix(rng, n, n, 1.0 / std::sqrt(double(n)));
  const ComplexMatrix us = b * g * adjoint(b) + comp * h * comp;
  return adjoint(us);
}

void trial_t48(Rng& rng, const CampaignDims& d, const ToleranceConfig& tol, TrialResult& r) {
  Shape s = sample_shape(rng, d);
  grow_to(s, d, 2);
  const std::size_t n = s.n;
  const std::size_t m = s.total();
  const std::size_t r1 = rng.index(1, std::min(n, m - 1));
  const std::size_t r2 = rng.index(1, std::min(n, m - r1));
  const std::size_t c = rng.index(1, std::min(r1, r2));
  const double sc = 1.0 / std::sqrt(double(n));
  const ComplexMatrix z = random_unitary(rng, m);
  const ComplexMatrix common = random_matrix(rng, n, c, sc);
  const ComplexMatrix a = hstack(common, random_matrix(rng, n, r1 - c, sc));
  const ComplexMatrix b = hstack(common, random_matrix(rng, n, r2 - c, sc));
  const ComplexMatrix tl = a * z.block(0, 0, r1, m);
  const ComplexMatrix tg = b * z.block(r1, 0, r2, m);
  const GFrameSystem sl = system_from_analysis(adjoint(tl), s.dims);
  const GFrameSystem sg = system_from_analysis(adjoint(tg), s.dims);
  const ComplexMatrix k = gen_k_with_range_in(rng, common, rng.index(1, rank(common, tol)), tol);
  const ComplexMatrix u1 = range_preserving(rng, tl, tol);
  const ComplexMatrix u2 = range_preserving(rng, tg, tol);

  FrameSpecFile f{sl};
  f.second_system = sg;
  f.k = k;
  f.u1 = u1;
  f.u2 = u2;
  r.instance = frame_spec_to_json(f);
  audit(r, are_orthogonal(sl, sg, tol), "T_Λ T_Γ* != 0");
  audit(r, range_included(tl, adjoint(u1) * tl, tol), "R(T_1) not inside R(U_1* T_1)");
  audit(r, range_included(tg, adjoint(u2) * tg, tol), "R(T_2) not inside R(U_2* T_2)");
  audit(r, classify(sl, k, tol).is_k_g_frame && classify(sg, k, tol).is_k_g_frame,
        "a summand is not atomic for K");

  const CombinedSystem out = operator_weighted_sum(sl, sg, u1, u2, k, tol);
  check(r, out.bound.holds, bound_violation(out.bound), "1/λ1 + 1/λ2 exceeds the measured bound");
}

void trial_l49(Rng& rng, const CampaignDims& d, const ToleranceConfig& tol, TrialResult& r) {
  const MembershipInstance inst = membership_instance(rng, d, tol, false);
  r.instance = spec_json(inst.sys, inst.k);
  audit_membership(r, inst, tol);
  const FrameOperatorCriterion c = k_g_frame_via_frame_operator(inst.sys, inst.k, tol);
  check(r, c.holds == inst.expected, 0.0, "operator inequality disagrees with construction");
  check(r, c.holds == classify(inst.sys, inst.k, tol).is_k_g_frame, 0.0,
        "operator inequality disagrees with classify");
}

void trial_t410(Rng& rng, const CampaignDims& d, const ToleranceConfig& tol, TrialResult& r) {
  const bool commuting = rng.coin(0.5);
  const int n_power = static_cast<int>(rng.index(1, 3));
  const Shape s = sample_shape(rng, d);
  const std::size_t n = s.n;
  GFrameSystem sys = GFrameSystem::zeros(n, s.dims);
  ComplexMatrix k;
  ComplexMatrix u;
  if (commuting) {
    const std::size_t r0 = rng.index(1, std::min(n, s.total()));
    std::vector<double> spec(n, 0.0);
    std::vector<double> kd(n, 0.0);
    std::vector<double> ud(n, 0.0);
    for (std::size_t j = 0; j < r0; ++j) {
      spec[j] = rng.uniform(0.2, 2.0);
      if (rng.coin(0.8)) kd[j] = rng.uniform(0.2, 1.5);
    }
    for (auto& x : ud) x = rng.coin(0.2) ? 0.0 : rng.uniform(0.0, 2.0);
    const ComplexMatrix w = random_unitary(rng, n);
    sys = diagonalized_system(rng, s, w, spec);
    k = w * real_diagonal(kd) * adjoint(random_unitary(rng, n));
    u = w * real_diagonal(ud) * adjoint(w);
    u = cplx(0.5) * (u + adjoint(u));
  } else {
    sys = random_system(rng, s);
    const ComplexMatrix t = synthesis(sys);
    k = gen_k_with_range_in(rng, t, rng.index(1, rank(t, tol)), tol);
    if (rng.coin(0.2)) {
      const ComplexMatrix g = random_matrix(rng, n, rng.index(1, n), 1.0 / std::sqrt(double(n)));
      u = g * adjoint(g);
      u = cplx(0.5) * (u + adjoint(u));
    } else {
      u = random_psd(rng, n, rng.uniform(0.1, 2.0));
    }
  }

  FrameSpecFile f{sys};
  f.k = k;
  f.u = u;
  f.n_power = n_power;
  r.instance = frame_spec_to_json(f);
  r.instance["commuting"] = commuting;
  audit(r, psd_min_shift(u, tol).is_psd, "U is not positive");
  audit(r, classify(sys, k, tol).is_k_g_frame, "system is not atomic for K");
  if (commuting) {
    const ComplexMatrix s_op = frame_operator(sys);
    const ComplexMatrix kk = k * adjoint(k);
    const double scale = std::max(1.0, frobenius_norm(u)) * std::max(1.0, frobenius_norm(s_op) + frobenius_norm(kk));
    audit(r, frobenius_norm(u * s_op - s_op * u) <= 1e-12 * scale, "U does not commute with S");
    audit(r, frobenius_norm(u * kk - kk * u) <= 1e-12 * scale, "U does not commute with K K*");
  }
  if (!r.pass) return;

  const PositivePerturbation out = positive_perturbation(sys, u, k, n_power, tol);
  check(r, out.frame_op_residual <= 1e-10, out.frame_op_residual, "frame-operator identity fails");

  const bool preserved = out.measured_lower >= out.base_lower - tol.psd_rel * std::max(1.0, out.base_lower);
  r.tallies.emplace_back("conclusion_all", out.combined_is_k_g_frame);
  r.tallies.emplace_back("bound_preserved_all", preserved);
  r.tallies.emplace_back(commuting ? "conclusion_commuting" : "conclusion_noncommuting", out.combined_is_k_g_frame);
  r.tallies.emplace_back(commuting ? "bound_preserved_commuting" : "bound_preserved_noncommuting", preserved);
  if (!out.combined_is_k_g_frame || !preserved) {
    r.conclusion_failed = true;
    r.instance["measured_lower"] = out.measured_lower;
    r.instance["base_lower"] = out.base_lower;
    r.instance["combined_is_k_g_frame"] = out.combined_is_k_g_frame;
  }
}

const std::vector<std::pair<std::string, TrialFn>>& registry() {
  static const std::vector<std::pair<std::string, TrialFn>> table = {
      {"L2.3", trial_l23}, {"L2.4", trial_l24}, {"L2.5", trial_l25}, {"L2.6", trial_l26},
      {"T3.2", trial_t32}, {"T3.3", trial_t33}, {"T4.3", trial_t43}, {"T4.4", trial_t44},
      {"T4.5", trial_t45}, {"C4.6", trial_c46}, {"C4.7", trial_c47}, {"T4.8", trial_t48},
      {"L4.9", trial_l49}, {"T4.10", trial_t410},
  };
  return table;
}

TrialResult run_trial(const TrialFn& fn, std::uint64_t seed, const CampaignDims& dims, const ToleranceConfig& tol) {
  Rng rng(seed);
  TrialResult r;
  try {
    fn(rng, dims, tol, r);
  } catch (const std::exception& e) {
    check(r, false, std::numeric_limits<double>::infinity(), std::string("exception: ") + e.what());
  }
  return r;
}

void validate_range(const DimRange& r, const char* name) {
  if (r.lo == 0 || r.lo > r.hi)
    throw Error(ErrorKind::InvalidArgument, std::string(name) + " range must satisfy 1 <= lo <= hi");
}

}  // namespace

void CampaignDims::validate() const {
  validate_range(n, "n");
  validate_range(blocks, "block count");
  validate_range(m, "block dimension");
  if (n.hi > max_dim) throw Error(ErrorKind::InvalidArgument, "n exceeds the dimension cap " + std::to_string(max_dim));
  if (m.hi > max_dim)
    throw Error(ErrorKind::InvalidArgument, "block dimension exceeds the dimension cap " + std::to_string(max_dim));
  if (blocks.hi > 4 * max_dim) throw Error(ErrorKind::InvalidArgument, "too many blocks");
}

const std::vector<std::string>& known_theorems() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out;
    for (const auto& [id, fn] : registry()) out.push_back(id);
    return out;
  }();
  return ids;
}

bool is_known_theorem(const std::string& id) {
  const auto& ids = known_theorems();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

VerificationReport run_campaign(const CampaignSpec& spec) {
  const auto& table = registry();
  const auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == spec.theorem_id; });
  if (it == table.end()) throw Error(ErrorKind::UnknownTheorem, "unknown theorem id \"" + spec.theorem_id + "\"");
  if (spec.trials < 1) throw Error(ErrorKind::InvalidArgument, "trials must be >= 1");
  if (spec.jobs < 1) throw Error(ErrorKind::InvalidArgument, "jobs must be >= 1");
  spec.dims.validate();
  spec.tol.validate();

  const TrialFn& fn = it->second;
  std::vector<TrialResult> results(spec.trials);
  const std::size_t jobs = std::min(spec.jobs, spec.trials);
  auto worker = [&](std::size_t tid) {
    for (std::size_t t = tid; t < spec.trials; t += jobs)
      results[t] = run_trial(fn, trial_seed(spec.seed, t), spec.dims, spec.tol);
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker, j);
  }

  VerificationReport rep;
  rep.theorem_id = spec.theorem_id;
  rep.trials_run = spec.trials;
  for (std::size_t t = 0; t < results.size(); ++t) {
    TrialResult& r = results[t];
    rep.worst_residual = std::max(rep.worst_residual, r.residual);
    for (const auto& [name, ok] : r.tallies) {
      Tally& tl = rep.tallies[name];
      ++tl.trials;
      if (ok) ++tl.passes;
    }
    auto record = [&](std::vector<json>& into) {
      if (into.size() >= spec.counterexample_cap) return;
      into.push_back(json{{"trial", t},
                          {"seed", trial_seed(spec.seed, t)},
                          {"residual", r.residual},
                          {"reason", r.reason},
                          {"instance", r.instance}});
    };
    if (r.pass) {
      ++rep.passes;
    } else {
      ++rep.failures;
      record(rep.counterexamples);
    }
    if (r.conclusion_failed) record(rep.conclusion_counterexamples);
  }
  return rep;
}

json to_json(const VerificationReport& report) {
  json j{{"theorem", report.theorem_id},
         {"trials", report.trials_run},
         {"passes", report.passes},
         {"failures", report.failures},
         {"worst_residual", report.worst_residual},
         {"counterexamples", report.counterexamples}};
  if (!report.tallies.empty()) {
    json t = json::object();
    for (const auto& [name, tally] : report.tallies) t[name] = json{{"trials", tally.trials}, {"passes", tally.passes}};
    j["tallies"] = std::move(t);
  }
  if (report.theorem_id == "T4.10") j["conclusion_counterexamples"] = report.conclusion_counterexamples;
  return j;
}

}  // namespace kgframe
