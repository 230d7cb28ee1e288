#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "kgframe/errors.hpp"
#include "kgframe/numerics.hpp"

namespace kgframe {

namespace {

using EMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EMap = Eigen::Map<const EMatrix>;

EMap as_eigen(const ComplexMatrix& m) {
  return EMap(m.data().data(), static_cast<Eigen::Index>(m.rows()),
              static_cast<Eigen::Index>(m.cols()));
}

template <typename Derived>
ComplexMatrix from_eigen(const Eigen::MatrixBase<Derived>& e) {
  ComplexMatrix out(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
  for (Eigen::Index r = 0; r < e.rows(); ++r)
    for (Eigen::Index c = 0; c < e.cols(); ++c)
      out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = e(r, c);
  return out;
}

void require_hermitian(const ComplexMatrix& m, const ToleranceConfig& tol, const char* op) {
  if (!m.is_square())
    throw Error(ErrorKind::NotHermitian, std::string(op) + ": matrix is not square");
  if (!is_hermitian(m, tol))
    throw Error(ErrorKind::NotHermitian, std::string(op) + ": ||M - M*||_F exceeds tolerance");
}

EMatrix hermitian_part(const ComplexMatrix& m) {
  EMatrix e = as_eigen(m);
  return (e + e.adjoint()) * 0.5;
}

}  // namespace

HermitianEig hermitian_eig(const ComplexMatrix& m, const ToleranceConfig& tol) {
  require_hermitian(m, tol, "hermitian_eig");
  if (m.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<EMatrix> es(hermitian_part(m), Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success)
    throw Error(ErrorKind::ConvergenceFailure, "hermitian_eig did not converge");
  HermitianEig out;
  out.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  out.eigenvectors = from_eigen(es.eigenvectors());
  return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m, const ToleranceConfig& tol) {
  require_hermitian(m, tol, "hermitian_eigenvalues");
  if (m.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<EMatrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw Error(ErrorKind::ConvergenceFailure, "hermitian_eigenvalues did not converge");
  return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

Svd svd(const ComplexMatrix& m) {
  const std::size_t k = std::min(m.rows(), m.cols());
  if (k == 0)
    return {ComplexMatrix::identity(m.rows()), {}, ComplexMatrix::identity(m.cols())};
  Eigen::JacobiSVD<EMatrix> js(as_eigen(m), Eigen::ComputeFullU | Eigen::ComputeFullV);
  Svd out;
  out.u = from_eigen(js.matrixU());
  out.v = from_eigen(js.matrixV());
  const auto& s = js.singularValues();
  out.singular_values.assign(s.data(), s.data() + s.size());
  for (double x : out.singular_values)
    if (!std::isfinite(x)) throw Error(ErrorKind::ConvergenceFailure, "svd produced non-finite values");
  return out;
}

std::vector<double> singular_values(const ComplexMatrix& m) {
  if (m.empty()) return {};
  Eigen::JacobiSVD<EMatrix> js(as_eigen(m));
  const auto& s = js.singularValues();
  return {s.data(), s.data() + s.size()};
}

std::size_t rank_from_singular_values(std::span<const double> s, const ToleranceConfig& tol) {
  if (s.empty() || s.front() <= 0.0) return 0;
  const double cutoff = tol.rank_rel * s.front();
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [cutoff](double x) { return x >= cutoff; }));
}

std::size_t rank(const ComplexMatrix& m, const ToleranceConfig& tol) {
  const auto s = singular_values(m);
  return rank_from_singular_values(s, tol);
}

ComplexMatrix pinv(const ComplexMatrix& m, const ToleranceConfig& tol) {
  ComplexMatrix out(m.cols(), m.rows());
  if (m.empty()) return out;
  const Svd d = svd(m);
  const std::size_t r = rank_from_singular_values(d.singular_values, tol);
  // M+ = sum_k v_k u_k* / s_k
  for (std::size_t k = 0; k < r; ++k) {
    const double inv = 1.0 / d.singular_values[k];
    for (std::size_t i = 0; i < m.cols(); ++i) {
      const cplx vik = d.v(i, k) * inv;
      for (std::size_t j = 0; j < m.rows(); ++j) out(i, j) += vik * std::conj(d.u(j, k));
    }
  }
  return out;
}

double operator_norm(const ComplexMatrix& m) {
  const auto s = singular_values(m);
  return s.empty() ? 0.0 : s.front();
}

double smallest_positive_singular_value(const ComplexMatrix& m, const ToleranceConfig& tol) {
  const auto s = singular_values(m);
  const std::size_t r = rank_from_singular_values(s, tol);
  return r == 0 ? 0.0 : s[r - 1];
}

PsdTest psd_min_shift(const ComplexMatrix& m, const ToleranceConfig& tol) {
  const auto ev = hermitian_eigenvalues(m, tol);
  if (ev.empty()) return {true, 0.0};
  const double lmin = ev.front();
  const double lmax = ev.back();
  return {lmin >= -tol.psd_rel * std::max(lmax, 1.0), lmin};
}

ComplexMatrix range_basis(const ComplexMatrix& m, const ToleranceConfig& tol) {
  if (m.empty()) return ComplexMatrix(m.rows(), 0);
  const Svd d = svd(m);
  const std::size_t r = rank_from_singular_values(d.singular_values, tol);
  return d.u.block(0, 0, m.rows(), r);
}

ComplexMatrix null_basis(const ComplexMatrix& m, const ToleranceConfig& tol) {
  if (m.empty()) return ComplexMatrix::identity(m.cols());
  const Svd d = svd(m);
  const std::size_t r = rank_from_singular_values(d.singular_values, tol);
  return d.v.block(0, r, m.cols(), m.cols() - r);
}

ComplexMatrix orth_projector(const ComplexMatrix& m, const ToleranceConfig& tol) {
  const ComplexMatrix b = range_basis(m, tol);
  return b * adjoint(b);
}

}  // namespace kgframe

namespace kgframe {

namespace {

// Entrywise (M + M*) / 2, so that every a - λ b formed from two such matrices is
// exactly Hermitian even when the difference nearly cancels.
ComplexMatrix exact_hermitian(const ComplexMatrix& m) { return from_eigen(hermitian_part(m)); }

}  // namespace

ToleranceConfig sharpened_for_bisection(const ToleranceConfig& tol) {
  ToleranceConfig out = tol;
  out.psd_rel = std::min(tol.psd_rel, kBisectionPsdFloor);
  return out;
}

double max_psd_multiplier(const ComplexMatrix& lhs, const ComplexMatrix& rhs, double hi,
                          const ToleranceConfig& tol, int iterations) {
  if (lhs.rows() != rhs.rows() || !lhs.is_square() || !rhs.is_square())
    throw Error(ErrorKind::DimensionMismatch, "max_psd_multiplier: pencil shapes differ");
  const auto ev = hermitian_eigenvalues(lhs, tol);
  const double scale = ev.empty() ? 0.0 : ev.back();
  if (scale <= 0.0 || hi <= 0.0) return 0.0;

  const ComplexMatrix a = exact_hermitian(cplx(1.0 / scale) * lhs);
  const ComplexMatrix b = exact_hermitian(cplx(1.0 / scale) * rhs);
  const ToleranceConfig sharp = sharpened_for_bisection(tol);
  auto feasible = [&](double lambda) { return psd_min_shift(a - cplx(lambda) * b, sharp).is_psd; };

  if (feasible(hi)) return hi;
  double lo = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

double min_psd_multiplier(const ComplexMatrix& lhs, const ComplexMatrix& rhs, double cap,
                          const ToleranceConfig& tol, int iterations) {
  if (lhs.rows() != rhs.rows() || !lhs.is_square() || !rhs.is_square())
    throw Error(ErrorKind::DimensionMismatch, "min_psd_multiplier: pencil shapes differ");
  const auto ev = hermitian_eigenvalues(lhs, tol);
  const double scale = ev.empty() ? 0.0 : ev.back();
  if (scale <= 0.0) return 0.0;

  const ComplexMatrix a = exact_hermitian(cplx(1.0 / scale) * lhs);
  const ComplexMatrix b = exact_hermitian(cplx(1.0 / scale) * rhs);
  const ToleranceConfig sharp = sharpened_for_bisection(tol);
  auto feasible = [&](double mu) { return psd_min_shift(cplx(mu) * b - a, sharp).is_psd; };

  if (!feasible(cap)) return std::numeric_limits<double>::infinity();
  double lo = 0.0;
  double hi = cap;
  for (int it = 0; it < iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace kgframe
