#pragma once

// K-dual Bessel g-sequences: Γ is a K-dual of Λ when K = T_Λ T_Γ*, i.e.
// K f = Σ Λ_i* Γ_i f for every f.

#include <vector>

#include "kgframe/gframe.hpp"

namespace kgframe {

struct KDualPair {
  GFrameSystem primal;
  GFrameSystem dual;
  ComplexMatrix k;
  double reconstruction_residual = 0.0;  // ||T_Λ T_Γ* - K||_F / max(||K||_F, 1)
};

double dual_reconstruction_residual(const GFrameSystem& primal, const GFrameSystem& dual,
                                    const ComplexMatrix& k);

// Throws DimensionMismatch when the two systems differ in structure or K is not n x n.
bool is_k_dual(const GFrameSystem& primal, const GFrameSystem& dual, const ComplexMatrix& k,
               const ToleranceConfig& tol = {});

// The canonical K-dual Θ: T_Θ* = T_Λ^+ K, the minimal-norm Douglas factor of
// K through T_Λ. ||T_Θ||^2 = 1 / A_opt and ||T_Θ* f|| <= ||T_Γ* f|| for every
// K-dual Γ. Throws NotKGFrame if R(K) ⊄ R(T_Λ).
KDualPair canonical_k_dual(const GFrameSystem& sys, const ComplexMatrix& k,
                           const ToleranceConfig& tol = {});

// True iff for every alternate Γ and probe f:
//   ||T_Θ* f|| <= ||T_Γ* f|| + residual_rel ||f||   and   ||T_Θ|| <= ||T_Γ|| + residual_rel.
// Throws NotADual if an alternate is not a K-dual of pair.primal.
bool dual_minimality_check(const KDualPair& pair, const std::vector<GFrameSystem>& alternates,
                           const std::vector<CVector>& probes, const ToleranceConfig& tol = {});

// max over alternates and probes of (||T_Θ* f|| - ||T_Γ* f||) / ||f||; negative or zero when minimal.
double worst_minimality_excess(const KDualPair& pair, const std::vector<GFrameSystem>& alternates,
                               const std::vector<CVector>& probes);

struct SubspaceDualResult {
  bool holds = false;
  double predicted_lower = 0.0;  // 1 / (D ||K||^2), D = λ_max(S_Γ)
  double measured_lower = 0.0;   // optimal_k_lower_bound(sys, K)
};

// A Bessel family Γ is a dual of Λ on R(K) when <g, h> = Σ <Γ_i g, Λ_i h> for
// g, h in R(K); checked as P T_Γ T_Λ* g = g on an orthonormal basis of R(K),
// P the projector onto R(K). If that holds and S_Λ(R(K)) ⊆ R(K), Λ is a
// K-g-frame with lower bound at least 1 / (D ||K||^2).
// Throws HypothesisViolated naming the failed hypothesis.
SubspaceDualResult subspace_dual_implies_k_g_frame(const GFrameSystem& sys,
                                                   const GFrameSystem& dual_on_range,
                                                   const ComplexMatrix& k,
                                                   const ToleranceConfig& tol = {});

}  // namespace kgframe
