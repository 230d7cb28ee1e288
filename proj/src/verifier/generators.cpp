#include <cmath>
#include <numeric>
#include <string>

#include "kgframe/errors.hpp"
#include "kgframe/verifier.hpp"

namespace kgframe {

namespace {

double entry_scale(std::size_t n) { return n == 0 ? 1.0 : 1.0 / std::sqrt(static_cast<double>(n)); }

std::size_t total_dim(std::span<const std::size_t> block_dims) {
  return std::accumulate(block_dims.begin(), block_dims.end(), std::size_t{0});
}

}  // namespace

GFrameSystem gen_system(Rng& rng, std::size_t n, std::span<const std::size_t> block_dims) {
  std::vector<ComplexMatrix> ops;
  ops.reserve(block_dims.size());
  for (std::size_t m : block_dims) ops.push_back(random_matrix(rng, m, n, entry_scale(n)));
  return {n, std::move(ops)};
}

GFrameSystem gen_system(std::uint64_t seed, std::size_t n, std::span<const std::size_t> block_dims) {
  Rng rng(seed);
  return gen_system(rng, n, block_dims);
}

GFrameSystem gen_low_rank_system(Rng& rng, std::size_t n, std::span<const std::size_t> block_dims,
                                 std::size_t r) {
  const std::size_t m = total_dim(block_dims);
  const ComplexMatrix left = random_matrix(rng, m, r, entry_scale(std::max<std::size_t>(r, 1)));
  const ComplexMatrix right = random_matrix(rng, r, n, entry_scale(n));
  return system_from_analysis(left * right, block_dims);
}

ComplexMatrix gen_k_with_range_in(Rng& rng, const ComplexMatrix& t, std::size_t r, const ToleranceConfig& tol) {
  const std::size_t n = t.rows();
  const ComplexMatrix range = range_basis(t, tol);
  if (r > range.cols())
    throw Error(ErrorKind::RankTooLarge,
                "requested rank " + std::to_string(r) + " exceeds rank(T) = " + std::to_string(range.cols()));
  if (r == 0) return ComplexMatrix(n, n);
  // random r-dimensional subspace of R(T), then a random r x n factor
  const ComplexMatrix mix = random_matrix(rng, range.cols(), r);
  const ComplexMatrix basis = range_basis(range * mix, tol);
  return basis * random_matrix(rng, r, n, entry_scale(n));
}

ComplexMatrix gen_k_with_range_in(std::uint64_t seed, const ComplexMatrix& t, std::size_t r,
                                  const ToleranceConfig& tol) {
  Rng rng(seed);
  return gen_k_with_range_in(rng, t, r, tol);
}

ComplexMatrix gen_k_outside_range(Rng& rng, const ComplexMatrix& t, const ToleranceConfig& tol) {
  const std::size_t n = t.rows();
  const ComplexMatrix complement = null_basis(adjoint(t), tol);
  if (complement.cols() == 0) throw Error(ErrorKind::RankTooLarge, "T has full row rank; nothing lies outside");
  const std::size_t r_in = rank(t, tol) == 0 ? 0 : rng.index(0, rank(t, tol));
  ComplexMatrix k = gen_k_with_range_in(rng, t, r_in, tol);
  // unit direction in R(T)^⊥ times a random row of norm ~1
  const CVector dir = complement * std::span<const cplx>(random_vector(rng, complement.cols()));
  const double dn = vector_norm(dir);
  const CVector w = random_vector(rng, n, entry_scale(n));
  const double wn = vector_norm(w);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) k(i, j) += dir[i] / dn * std::conj(w[j]) / wn;
  return k;
}

std::pair<GFrameSystem, GFrameSystem> gen_orthogonal_pair(Rng& rng, std::size_t n,
                                                          std::span<const std::size_t> block_dims,
                                                          std::size_t split) {
  if (split < 1 || split >= block_dims.size())
    throw Error(ErrorKind::InvalidArgument, "split must lie in [1, block count)");
  std::vector<ComplexMatrix> left;
  std::vector<ComplexMatrix> right;
  for (std::size_t i = 0; i < block_dims.size(); ++i) {
    ComplexMatrix block = random_matrix(rng, block_dims[i], n, entry_scale(n));
    ComplexMatrix zero(block_dims[i], n);
    if (i < split) {
      left.push_back(std::move(block));
      right.push_back(std::move(zero));
    } else {
      left.push_back(std::move(zero));
      right.push_back(std::move(block));
    }
  }
  return {GFrameSystem(n, std::move(left)), GFrameSystem(n, std::move(right))};
}

std::pair<GFrameSystem, GFrameSystem> gen_orthogonal_pair(std::uint64_t seed, std::size_t n,
                                                          std::span<const std::size_t> block_dims,
                                                          std::size_t split) {
  Rng rng(seed);
  return gen_orthogonal_pair(rng, n, block_dims, split);
}

GFrameSystem gen_parseval(Rng& rng, const ComplexMatrix& k, std::span<const std::size_t> block_dims) {
  const std::size_t n = k.rows();
  const std::size_t m = total_dim(block_dims);
  if (m < n)
    throw Error(ErrorKind::InsufficientCoefficientDim,
                "need Σm_i >= n, got " + std::to_string(m) + " < " + std::to_string(n));
  const ComplexMatrix w = random_unitary(rng, m).block(0, 0, n, m);  // W W* = I
  return system_from_analysis(adjoint(k * w), block_dims);
}

GFrameSystem gen_parseval(std::uint64_t seed, const ComplexMatrix& k, std::span<const std::size_t> block_dims) {
  Rng rng(seed);
  return gen_parseval(rng, k, block_dims);
}

std::pair<GFrameSystem, GFrameSystem> gen_parseval_pair(Rng& rng, const ComplexMatrix& k,
                                                        std::span<const std::size_t> block_dims) {
  const std::size_t n = k.rows();
  const std::size_t m = total_dim(block_dims);
  if (m < 2 * n)
    throw Error(ErrorKind::InsufficientCoefficientDim,
                "need Σm_i >= 2n, got " + std::to_string(m) + " < " + std::to_string(2 * n));
  const ComplexMatrix z = random_unitary(rng, m);
  const ComplexMatrix wl = z.block(0, 0, n, m);
  const ComplexMatrix wg = z.block(n, 0, n, m);
  return {system_from_analysis(adjoint(k * wl), block_dims), system_from_analysis(adjoint(k * wg), block_dims)};
}

ComplexMatrix gen_commuting_surjective(Rng& rng, const ComplexMatrix& k) {
  const std::size_t n = k.rows();
  const cplx beta = rng.complex_normal();
  const double alpha = std::abs(beta) * operator_norm(k) + 0.5;
  return cplx(alpha) * ComplexMatrix::identity(n) + beta * adjoint(k);
}

ComplexMatrix gen_commuting_surjective(std::uint64_t seed, const ComplexMatrix& k) {
  Rng rng(seed);
  return gen_commuting_surjective(rng, k);
}

GFrameSystem gen_alternate_dual(Rng& rng, const KDualPair& pair, const ToleranceConfig& tol) {
  const ComplexMatrix t = synthesis(pair.primal);
  const ComplexMatrix null_t = null_basis(t, tol);  // Σm x d
  const std::size_t n = pair.primal.ambient_dim();
  ComplexMatrix q = analysis(pair.dual);
  if (null_t.cols() > 0) q += null_t * random_matrix(rng, null_t.cols(), n, entry_scale(n));
  return system_from_analysis(q, pair.primal.block_dims());
}

}  // namespace kgframe
