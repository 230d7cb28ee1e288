#include <algorithm>
#include <cmath>
#include <string>

#include "kgframe/douglas.hpp"
#include "kgframe/errors.hpp"

namespace kgframe {

namespace {

void require_same_rows(const ComplexMatrix& u, const ComplexMatrix& v, const char* op) {
  if (u.rows() != v.rows())
    throw Error(ErrorKind::DimensionMismatch, std::string(op) + ": U has " +
                                                  std::to_string(u.rows()) + " rows, V has " +
                                                  std::to_string(v.rows()));
}

}  // namespace

bool range_included(const ComplexMatrix& u, const ComplexMatrix& v, const ToleranceConfig& tol) {
  require_same_rows(u, v, "range_included");
  const double nu = operator_norm(u);
  if (nu == 0.0) return true;
  const double nv = operator_norm(v);
  if (nv == 0.0) return false;
  const ComplexMatrix scaled = cplx(nv / nu) * u;
  return rank(hstack(v, scaled), tol) == rank(v, tol);
}

DouglasFactor douglas_factor(const ComplexMatrix& u, const ComplexMatrix& v,
                             const ToleranceConfig& tol) {
  require_same_rows(u, v, "douglas_factor");
  if (!range_included(u, v, tol))
    throw Error(ErrorKind::RangeNotIncluded, "R(U) is not contained in R(V)");

  DouglasFactor out;
  out.q = pinv(v, tol) * u;
  const double nq = operator_norm(out.q);
  out.mu_star = nq * nq;
  out.residual = frobenius_norm(u - v * out.q) / std::max(frobenius_norm(u), 1.0);
  if (out.residual > tol.residual_rel)
    throw Error(ErrorKind::RangeNotIncluded,
                "factor residual " + std::to_string(out.residual) + " exceeds tolerance");
  return out;
}

double min_majorization_constant(const ComplexMatrix& u, const ComplexMatrix& v,
                                 const ToleranceConfig& tol) {
  require_same_rows(u, v, "min_majorization_constant");
  if (!range_included(u, v, tol))
    throw Error(ErrorKind::RangeNotIncluded, "R(U) is not contained in R(V)");
  const double nu = operator_norm(u);
  if (nu == 0.0) return 0.0;

  const double smin = smallest_positive_singular_value(v, tol);
  const double cap = (nu / smin) * (nu / smin) + 1.0;
  const double mu = min_psd_multiplier(u * adjoint(u), v * adjoint(v), cap, tol);
  if (!std::isfinite(mu))
    throw Error(ErrorKind::RangeNotIncluded, "majorization constant exceeds cap " + std::to_string(cap));
  return mu;
}

}  // namespace kgframe
