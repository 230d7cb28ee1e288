#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "kgframe/errors.hpp"
#include "kgframe/gframe.hpp"
#include "kgframe/numerics.hpp"

namespace kgtest {

using kgframe::ComplexMatrix;
using kgframe::cplx;
using kgframe::CVector;
using kgframe::GFrameSystem;

inline ComplexMatrix scalar(cplx z) { return ComplexMatrix{{z}}; }

inline GFrameSystem single(const ComplexMatrix& op) { return GFrameSystem(op.cols(), {op}); }

inline GFrameSystem blocks(std::vector<ComplexMatrix> ops) {
  const std::size_t n = ops.front().cols();
  return GFrameSystem(n, std::move(ops));
}

// Λ1 = [[1,0]], Λ2 = [[0,1]]
inline GFrameSystem standard_split() { return blocks({ComplexMatrix{{1.0, 0.0}}, ComplexMatrix{{0.0, 1.0}}}); }

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  EXPECT_EQ(a.rows(), b.rows());
  EXPECT_EQ(a.cols(), b.cols());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data().size() && i < b.data().size(); ++i)
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  return worst;
}

#define EXPECT_MAT_NEAR(a, b, eps) EXPECT_LE(::kgtest::max_abs_diff((a), (b)), (eps))

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

template <class F>
kgframe::ErrorKind error_kind_of(F&& f) {
  try {
    f();
  } catch (const kgframe::Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected a kgframe::Error";
  return kgframe::ErrorKind::InvalidArgument;
}

#define EXPECT_KG_ERROR(expr, kind) EXPECT_EQ(::kgtest::error_kind_of([&] { (void)(expr); }), (kind))

// Eigenvalues of a Hermitian matrix by cyclic Jacobi on the real 2n x 2n
// embedding [[Re, -Im], [Im, Re]]; every eigenvalue appears twice there.
inline std::vector<double> jacobi_eigenvalues(const ComplexMatrix& h) {
  const std::size_t n = h.rows();
  const std::size_t r = 2 * n;
  std::vector<double> a(r * r);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * r + j]; };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const cplx z = 0.5 * (h(i, j) + std::conj(h(j, i)));
      at(i, j) = z.real();
      at(i + n, j + n) = z.real();
      at(i, j + n) = -z.imag();
      at(i + n, j) = z.imag();
    }
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < r; ++p)
      for (std::size_t q = p + 1; q < r; ++q) off += at(p, q) * at(p, q);
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < r; ++p)
      for (std::size_t q = p + 1; q < r; ++q) {
        if (std::abs(at(p, q)) < 1e-300) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < r; ++k) {
          const double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < r; ++k) {
          const double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(r);
  for (std::size_t i = 0; i < r; ++i) ev[i] = at(i, i);
  std::sort(ev.begin(), ev.end());
  std::vector<double> out;
  for (std::size_t i = 0; i < r; i += 2) out.push_back(0.5 * (ev[i] + ev[i + 1]));
  return out;
}

inline bool oracle_psd(const ComplexMatrix& m, double floor) {
  const auto ev = jacobi_eigenvalues(m);
  return ev.empty() || ev.front() >= -floor * std::max(1.0, std::abs(ev.back()));
}

// max{λ in [0, hi] : lhs - λ rhs ⪰ 0} by plain bisection on the Jacobi oracle.
inline double oracle_max_lambda(const ComplexMatrix& lhs, const ComplexMatrix& rhs, double hi) {
  double lo = 0.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (oracle_psd(lhs - cplx(mid) * rhs, 1e-12))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

// inf{μ in [0, hi] : μ rhs - lhs ⪰ 0}
inline double oracle_min_mu(const ComplexMatrix& lhs, const ComplexMatrix& rhs, double hi) {
  double lo = 0.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (oracle_psd(cplx(mid) * rhs - lhs, 1e-12))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace kgtest
