#pragma once

// Douglas factorization: for U, V with equal row counts the following agree
//   R(U) ⊆ R(V)   <=>   U U* ⪯ μ V V* for some μ >= 0   <=>   U = V Q for some Q,
// and the minimal-norm factor Q = V^+ U is the unique one with R(Q) ⊆ R(V*),
// N(Q) = N(U), and ||Q||^2 = inf{μ : U U* ⪯ μ V V*}.

#include "kgframe/numerics.hpp"

namespace kgframe {

struct DouglasFactor {
  ComplexMatrix q;
  double mu_star = 0.0;   // ||Q||^2
  double residual = 0.0;  // ||U - V Q||_F / max(||U||_F, 1)
};

// rank([V | U]) == rank(V) under the shared cutoff. U is rescaled to ||V||
// first so the relative cutoff means the same thing on both sides.
// Throws DimensionMismatch.
bool range_included(const ComplexMatrix& u, const ComplexMatrix& v, const ToleranceConfig& tol = {});

// Throws RangeNotIncluded when R(U) ⊄ R(V) or the factor does not reproduce U.
DouglasFactor douglas_factor(const ComplexMatrix& u, const ComplexMatrix& v,
                             const ToleranceConfig& tol = {});

// inf{μ >= 0 : U U* ⪯ μ V V*} by bisection up to the cap (||U|| / σ⁺_min(V))^2 + 1.
// Throws RangeNotIncluded if the range test fails or the cap is exceeded.
double min_majorization_constant(const ComplexMatrix& u, const ComplexMatrix& v,
                                 const ToleranceConfig& tol = {});

}  // namespace kgframe
