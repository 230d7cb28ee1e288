#pragma once

// Seeded randomized campaigns. Each theorem id maps to a trial that builds an
// instance satisfying the hypotheses, audits those hypotheses, evaluates the
// conclusion with the owning module, and records a residual.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "kgframe/atomic.hpp"
#include "kgframe/gframe.hpp"
#include "kgframe/random.hpp"

namespace kgframe {

// ---- generators ------------------------------------------------------------

// Λ_i entries i.i.d. complex standard normal scaled by 1/sqrt(n).
GFrameSystem gen_system(std::uint64_t seed, std::size_t n, std::span<const std::size_t> block_dims);
GFrameSystem gen_system(Rng& rng, std::size_t n, std::span<const std::size_t> block_dims);

// System whose analysis operator has rank min(r, ...) exactly: product of two Gaussians.
GFrameSystem gen_low_rank_system(Rng& rng, std::size_t n, std::span<const std::size_t> block_dims,
                                 std::size_t r);

// K = B R with B an orthonormal basis of a random r-dimensional subspace of R(T).
// Throws RankTooLarge if r > rank(T).
ComplexMatrix gen_k_with_range_in(std::uint64_t seed, const ComplexMatrix& t, std::size_t r,
                                  const ToleranceConfig& tol = {});
ComplexMatrix gen_k_with_range_in(Rng& rng, const ComplexMatrix& t, std::size_t r,
                                  const ToleranceConfig& tol = {});

// K with a unit-scale component orthogonal to R(T). Throws RankTooLarge if T has full row rank.
ComplexMatrix gen_k_outside_range(Rng& rng, const ComplexMatrix& t, const ToleranceConfig& tol = {});

// Blocks [0, split) random in the first system and zero in the second; the
// remaining blocks the other way round, so T_Λ T_Γ* = 0 exactly.
std::pair<GFrameSystem, GFrameSystem> gen_orthogonal_pair(std::uint64_t seed, std::size_t n,
                                                          std::span<const std::size_t> block_dims,
                                                          std::size_t split);
std::pair<GFrameSystem, GFrameSystem> gen_orthogonal_pair(Rng& rng, std::size_t n,
                                                          std::span<const std::size_t> block_dims,
                                                          std::size_t split);

// T_Λ = K W with W W* = I (first n rows of a random unitary), so S_Λ = K K*.
// Throws InsufficientCoefficientDim if Σm_i < n.
GFrameSystem gen_parseval(std::uint64_t seed, const ComplexMatrix& k, std::span<const std::size_t> block_dims);
GFrameSystem gen_parseval(Rng& rng, const ComplexMatrix& k, std::span<const std::size_t> block_dims);

// Two Parseval K-g-frames with T_Λ T_Γ* = 0, from disjoint row blocks of one
// unitary. Throws InsufficientCoefficientDim if Σm_i < 2n.
std::pair<GFrameSystem, GFrameSystem> gen_parseval_pair(Rng& rng, const ComplexMatrix& k,
                                                        std::span<const std::size_t> block_dims);

// U = αI + βK* with β complex normal and α = |β| ||K|| + 1/2, so σ_min(U) >= 1/2
// and U K* = K* U.
ComplexMatrix gen_commuting_surjective(std::uint64_t seed, const ComplexMatrix& k);
ComplexMatrix gen_commuting_surjective(Rng& rng, const ComplexMatrix& k);

// Another K-dual of pair.primal: Γ with T_Γ* = T_Θ* + N, columns of N in null(T_Λ).
GFrameSystem gen_alternate_dual(Rng& rng, const KDualPair& pair, const ToleranceConfig& tol = {});

// ---- campaigns -------------------------------------------------------------

struct DimRange {
  std::size_t lo = 1;
  std::size_t hi = 1;
};

struct CampaignDims {
  DimRange n{1, 8};
  DimRange blocks{1, 6};
  DimRange m{1, 4};
  std::size_t max_dim = 16;

  // Throws InvalidArgument on empty ranges, zero lower bounds or n above max_dim.
  void validate() const;
};

struct CampaignSpec {
  std::string theorem_id;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  CampaignDims dims;
  std::size_t jobs = 1;
  std::size_t counterexample_cap = 10;
  ToleranceConfig tol;
};

struct Tally {
  std::size_t trials = 0;
  std::size_t passes = 0;
  friend bool operator==(const Tally&, const Tally&) = default;
};

struct VerificationReport {
  std::string theorem_id;
  std::size_t trials_run = 0;
  std::size_t passes = 0;
  std::size_t failures = 0;
  double worst_residual = 0.0;
  std::vector<nlohmann::json> counterexamples;
  // Secondary tallies keyed by name (T4.10 conclusion breakdown).
  std::map<std::string, Tally> tallies;
  // T4.10 only: instances where the K-g-frame conclusion failed. These are
  // not failures of the campaign, whose pass criterion is the frame-operator identity.
  std::vector<nlohmann::json> conclusion_counterexamples;
};

const std::vector<std::string>& known_theorems();
bool is_known_theorem(const std::string& id);

// Throws UnknownTheorem, InvalidArgument.
VerificationReport run_campaign(const CampaignSpec& spec);

nlohmann::json to_json(const VerificationReport& report);

}  // namespace kgframe
