#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "kgframe/random.hpp"
#include "kgframe/simd/kernels.hpp"

using namespace kgframe;

namespace {

bool avx2_available() { return simd::avx2::compiled() && simd::cpu_supports_avx2(); }

std::vector<cplx> random_entries(Rng& rng, std::size_t len) {
  std::vector<cplx> v(len);
  for (auto& z : v) z = rng.complex_normal();
  return v;
}

// Textbook triple loop, separate from the library's scalar kernel.
std::vector<cplx> naive_matmul(const std::vector<cplx>& a, const std::vector<cplx>& b, std::size_t m,
                               std::size_t k, std::size_t n) {
  std::vector<cplx> c(m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx s = 0.0;
      for (std::size_t l = 0; l < k; ++l) s += a[i * k + l] * b[l * n + j];
      c[i * n + j] = s;
    }
  return c;
}

double max_rel_gap(const std::vector<cplx>& x, const std::vector<cplx>& y) {
  double worst = 0.0, scale = 1.0;
  for (const auto& z : y) scale = std::max(scale, std::abs(z));
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
  return worst / scale;
}

}  // namespace

TEST(Simd, ScalarMatmulMatchesNaive) {
  Rng rng(1);
  for (std::size_t m : {1, 2, 5}) {
    for (std::size_t k : {1, 3, 8}) {
      for (std::size_t n : {1, 4, 7}) {
        const auto a = random_entries(rng, m * k), b = random_entries(rng, k * n);
        std::vector<cplx> c(m * n);
        simd::scalar::matmul(a.data(), b.data(), c.data(), m, k, n);
        EXPECT_LE(max_rel_gap(c, naive_matmul(a, b, m, k, n)), 1e-14);
      }
    }
  }
}

TEST(Simd, Avx2MatmulMatchesScalarIncludingTails) {
  if (!avx2_available()) GTEST_SKIP() << "AVX2 not available";
  Rng rng(2);
  for (std::size_t m = 1; m <= 9; ++m) {
    for (std::size_t k : {1, 2, 3, 5, 16, 17}) {
      for (std::size_t n = 1; n <= 9; ++n) {
        const auto a = random_entries(rng, m * k), b = random_entries(rng, k * n);
        std::vector<cplx> cs(m * n), cv(m * n);
        simd::scalar::matmul(a.data(), b.data(), cs.data(), m, k, n);
        simd::avx2::matmul(a.data(), b.data(), cv.data(), m, k, n);
        EXPECT_LE(max_rel_gap(cv, cs), 1e-13) << m << "x" << k << "x" << n;
      }
    }
  }
}

TEST(Simd, SumAbsSqAgrees) {
  Rng rng(3);
  for (std::size_t len = 0; len <= 37; ++len) {
    const auto x = random_entries(rng, len);
    double want = 0.0;
    for (const auto& z : x) want += std::norm(z);
    EXPECT_NEAR(simd::scalar::sum_abs_sq(x.data(), len), want, 1e-13 * std::max(1.0, want));
    if (avx2_available())
      EXPECT_NEAR(simd::avx2::sum_abs_sq(x.data(), len), want, 1e-13 * std::max(1.0, want));
  }
}

TEST(Simd, ZeroSizedProducts) {
  std::vector<cplx> c(6, cplx(9.0, 9.0));
  simd::active().matmul(nullptr, nullptr, c.data(), 2, 0, 3);
  for (const auto& z : c) EXPECT_EQ(z, cplx(0.0, 0.0));
}

TEST(Simd, DispatchTables) {
  EXPECT_EQ(simd::table_for(simd::Isa::Scalar).isa, simd::Isa::Scalar);
  const auto& active = simd::active();
  if (!avx2_available()) EXPECT_EQ(active.isa, simd::Isa::Scalar);
  EXPECT_EQ(simd::to_string(simd::Isa::Scalar), "scalar");
}
