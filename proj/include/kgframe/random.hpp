#pragma once

// Deterministic random source for generators and campaigns.
//
// Engine: std::mt19937_64 (its output sequence is fixed by the standard),
// seeded through splitmix64 so that nearby seeds give unrelated streams.
// Uniforms take the top 53 bits; normals use Box-Muller. Nothing here goes
// through std::*_distribution, whose outputs differ between standard
// libraries.

#include <cstdint>
#include <random>

#include "kgframe/numerics.hpp"

namespace kgframe {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Per-trial seed: seed XOR trial index.
constexpr std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) noexcept { return seed ^ trial; }

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next() { return engine_(); }
  double uniform();                                  // [0, 1)
  double uniform(double lo, double hi);              // [lo, hi)
  std::size_t index(std::size_t lo, std::size_t hi); // inclusive range
  bool coin(double p_true = 0.5) { return uniform() < p_true; }
  double normal();
  cplx complex_normal();  // E|z|^2 = 1

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Entries i.i.d. complex standard normal times `scale`.
ComplexMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double scale = 1.0);
CVector random_vector(Rng& rng, std::size_t n, double scale = 1.0);
// Haar-distributed unitary via Gram-Schmidt on a Gaussian matrix.
ComplexMatrix random_unitary(Rng& rng, std::size_t n);
// G G* / n with G n x n Gaussian, rescaled to spectral norm `norm`.
ComplexMatrix random_psd(Rng& rng, std::size_t n, double norm = 1.0);

}  // namespace kgframe
