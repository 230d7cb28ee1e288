#include <cmath>
#include <numbers>

#include "kgframe/random.hpp"

namespace kgframe {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::size_t Rng::index(std::size_t lo, std::size_t hi) {
  if (hi <= lo) return lo;
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::size_t>(engine_() % span);
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

cplx Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

ComplexMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double scale) {
  ComplexMatrix m(rows, cols);
  for (auto& z : m.data()) z = scale * rng.complex_normal();
  return m;
}

CVector random_vector(Rng& rng, std::size_t n, double scale) {
  CVector v(n);
  for (auto& z : v) z = scale * rng.complex_normal();
  return v;
}

ComplexMatrix random_unitary(Rng& rng, std::size_t n) {
  ComplexMatrix q = random_matrix(rng, n, n);
  // modified Gram-Schmidt over columns, two passes
  for (std::size_t j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t p = 0; p < j; ++p) {
        cplx dot = 0.0;
        for (std::size_t r = 0; r < n; ++r) dot += std::conj(q(r, p)) * q(r, j);
        for (std::size_t r = 0; r < n; ++r) q(r, j) -= dot * q(r, p);
      }
    }
    double norm = 0.0;
    for (std::size_t r = 0; r < n; ++r) norm += std::norm(q(r, j));
    norm = std::sqrt(norm);
    for (std::size_t r = 0; r < n; ++r) q(r, j) /= norm;
  }
  return q;
}

ComplexMatrix random_psd(Rng& rng, std::size_t n, double norm) {
  if (n == 0) return {};
  const ComplexMatrix g = random_matrix(rng, n, n, 1.0 / std::sqrt(static_cast<double>(n)));
  ComplexMatrix p = g * adjoint(g);
  const double top = operator_norm(p);
  if (top > 0.0) p *= cplx(norm / top);
  // exact Hermitian symmetry
  return cplx(0.5) * (p + adjoint(p));
}

}  // namespace kgframe
