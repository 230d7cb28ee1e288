#include "kgframe/atomic.hpp"
#include "kgframe/random.hpp"
#include "kgframe/verifier.hpp"
#include "test_util.hpp"

using namespace kgframe;
using kgtest::blocks;
using kgtest::scalar;
using kgtest::single;
using kgtest::standard_split;

namespace {

const ComplexMatrix I2 = ComplexMatrix::identity(2);
const ComplexMatrix Z2 = ComplexMatrix::zeros(2, 2);

// {I, 0} and {0, I}: Parseval for K = I with disjoint supports
std::pair<GFrameSystem, GFrameSystem> orthonormal_split_pair() {
  return {blocks({I2, Z2}), blocks({Z2, I2})};
}

}  // namespace

TEST(AtomicCoefficients, Examples) {
  const CVector e1{1.0, 0.0};
  auto r = atomic_coefficients(single(I2), I2, e1);
  EXPECT_EQ(r.a.flat(), e1);
  EXPECT_NEAR(r.c, 1.0, 1e-15);

  r = atomic_coefficients(single(scalar(2.0)), scalar(1.0), CVector{1.0});
  EXPECT_NEAR(std::abs(r.a.flat()[0] - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(r.c, 0.5, 1e-15);

  r = atomic_coefficients(standard_split(), I2, CVector{0.0, 0.0});
  EXPECT_EQ(r.a.norm(), 0.0);
}

TEST(AtomicCoefficients, Errors) {
  EXPECT_KG_ERROR(atomic_coefficients(single(ComplexMatrix{{1.0, 0.0}}), I2, CVector{1.0, 0.0}),
                  ErrorKind::NotKGFrame);
  EXPECT_KG_ERROR(atomic_coefficients(standard_split(), I2, CVector{1.0}), ErrorKind::DimensionMismatch);
}

TEST(AtomicCoefficients, MinimalAmongRepresentations) {
  Rng rng(30);
  const std::vector<std::size_t> dims{2, 2, 1};
  const auto sys = gen_system(rng, 3, dims);
  const ComplexMatrix k = random_matrix(rng, 3, 3);
  const ComplexMatrix t = synthesis(sys);
  const ComplexMatrix nb = null_basis(t);
  ASSERT_EQ(nb.cols(), 2u);
  for (int trial = 0; trial < 20; ++trial) {
    const CVector f = random_vector(rng, 3);
    const auto r = atomic_coefficients(sys, k, f);
    const CVector kf = k * f;
    const CVector tk = t * std::span<const cplx>(r.a.flat());
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(std::abs(tk[i] - kf[i]), 0.0, 1e-10);
    EXPECT_LE(r.a.norm(), r.c * vector_norm(f) * (1 + 1e-12));
    CVector other = r.a.flat();
    const CVector z = nb * random_vector(rng, 2);
    for (std::size_t i = 0; i < other.size(); ++i) other[i] += z[i];
    EXPECT_GE(vector_norm(other), r.a.norm());
  }
}

TEST(IsAtomicSystem, Examples) {
  auto c = is_atomic_system(single(scalar(2.0)), scalar(1.0));
  EXPECT_TRUE(c.is_atomic);
  EXPECT_NEAR(c.coefficient_bound, 0.5, 1e-15);
  ASSERT_TRUE(c.witness_dual.has_value());
  EXPECT_MAT_NEAR(c.witness_dual->op(0), scalar(0.5), 1e-15);

  c = is_atomic_system(single(ComplexMatrix{{1.0, 0.0}}), I2);
  EXPECT_FALSE(c.is_atomic);
  EXPECT_FALSE(c.witness_dual.has_value());

  c = is_atomic_system(standard_split(), Z2);
  EXPECT_TRUE(c.is_atomic);
  EXPECT_EQ(c.coefficient_bound, 0.0);
  ASSERT_TRUE(c.witness_dual.has_value());
  EXPECT_EQ(frobenius_norm(analysis(*c.witness_dual)), 0.0);
}

TEST(CombineLinear, ScalarEquality) {
  // A1 = A2 = 4, so 16 / (2 * (4 + 4)) = 1, and K = 2 gives A_opt = 4 / 4 = 1
  const auto b = combine_linear(single(scalar(2.0)), scalar(1.0), scalar(1.0), 1.0, 1.0);
  EXPECT_NEAR(b.predicted_lower, 16.0 / (2.0 * 8.0), 1e-9);
  EXPECT_NEAR(b.measured_lower, kgtest::oracle_max_lambda(scalar(4.0), scalar(4.0), 10.0), 1e-9);
  EXPECT_NEAR(b.measured_lower, 1.0, 1e-8);
  EXPECT_TRUE(b.holds);
  ASSERT_TRUE(b.unfactored_lower.has_value());
  EXPECT_NEAR(*b.unfactored_lower, 2.0, 1e-9);
  EXPECT_GT(*b.unfactored_lower, b.measured_lower);
}

TEST(CombineLinear, ReducesToK1) {
  Rng rng(31);
  const std::vector<std::size_t> dims{3, 2};
  const auto sys = gen_system(rng, 3, dims);
  const ComplexMatrix k1 = random_matrix(rng, 3, 3);
  const ComplexMatrix k2 = random_matrix(rng, 3, 3);
  const double a1 = optimal_k_lower_bound(sys, k1);
  auto b = combine_linear(sys, k1, k2, 1.0, 0.0);
  EXPECT_NEAR(b.predicted_lower, a1 / 2.0, 1e-9 * a1);
  EXPECT_NEAR(b.measured_lower, a1, 1e-9 * a1);
  EXPECT_TRUE(b.holds);

  b = combine_linear(sys, k1, ComplexMatrix::zeros(3, 3), 1.0, 1.0);
  EXPECT_NEAR(b.measured_lower, a1, 1e-9 * a1);
  EXPECT_TRUE(b.holds);
}

TEST(CombineLinear, DegenerateAndErrors) {
  const auto b = combine_linear(single(scalar(2.0)), scalar(1.0), scalar(1.0), 1.0, -1.0);
  EXPECT_TRUE(b.degenerate);
  EXPECT_TRUE(b.holds);
  EXPECT_KG_ERROR(combine_linear(single(ComplexMatrix{{1.0, 0.0}}), I2, I2, 1.0, 1.0),
                  ErrorKind::NotAtomicForInputs);
}

TEST(CombineProduct, Examples) {
  auto b = combine_product(single(scalar(2.0)), scalar(1.0), scalar(1.0));
  EXPECT_NEAR(b.predicted_lower, 4.0, 1e-9);
  EXPECT_NEAR(b.measured_lower, 4.0, 1e-9);
  EXPECT_TRUE(b.holds);

  Rng rng(32);
  const std::vector<std::size_t> dims{2, 2};
  const auto sys = gen_system(rng, 2, dims);
  const ComplexMatrix k1 = random_matrix(rng, 2, 2);
  const double a1 = optimal_k_lower_bound(sys, k1);
  b = combine_product(sys, k1, I2);
  EXPECT_NEAR(b.predicted_lower, a1, 1e-9 * a1);
  EXPECT_NEAR(b.measured_lower, a1, 1e-9 * a1);
  EXPECT_TRUE(b.holds);

  b = combine_product(sys, k1, Z2);
  EXPECT_TRUE(b.degenerate);
  EXPECT_TRUE(b.holds);
  EXPECT_TRUE(is_atomic_system(sys, k1 * Z2).is_atomic);
}

TEST(PerturbSum, IdentityCase) {
  const auto sys_l = single(ComplexMatrix{{2.0, 0.0}, {0.0, 1.0}});
  const auto sys_g = GFrameSystem::zeros(2, std::vector<std::size_t>{2});
  const auto r = perturb_sum(sys_l, sys_g, I2, Z2, I2);
  EXPECT_EQ(r.combined, sys_l);
  EXPECT_NEAR(r.bound.predicted_lower, optimal_k_lower_bound(sys_l, I2), 1e-12);
  EXPECT_TRUE(r.bound.holds);
}

TEST(PerturbSum, OrthogonalSupports) {
  const auto sys_l = blocks({ComplexMatrix{{1.0, 0.0}}, ComplexMatrix{{0.0, 0.0}}});
  const auto sys_g = blocks({ComplexMatrix{{0.0, 0.0}}, ComplexMatrix{{0.0, 1.0}}});
  const auto r = perturb_sum(sys_l, sys_g, I2, I2, I2);
  EXPECT_EQ(r.combined, standard_split());
  EXPECT_NEAR(r.bound.measured_lower, 1.0, 1e-9);
  EXPECT_NEAR(r.bound.measured_upper, 1.0, 1e-12);
  EXPECT_NEAR(r.bound.predicted_lower, optimal_k_lower_bound(sys_l, I2) * 1.0, 1e-12);
  EXPECT_TRUE(r.bound.holds);
}

TEST(PerturbSum, ScalingByTwo) {
  const auto sys_l = single(ComplexMatrix{{2.0, 0.0}, {0.0, 1.0}});
  const auto sys_g = GFrameSystem::zeros(2, std::vector<std::size_t>{2});
  const double a1 = optimal_k_lower_bound(sys_l, I2);
  const auto r = perturb_sum(sys_l, sys_g, cplx(2.0) * I2, Z2, I2);
  EXPECT_NEAR(r.bound.predicted_lower, 4.0 * a1, 1e-9);
  EXPECT_NEAR(r.bound.measured_lower, 4.0 * a1, 1e-8);
  EXPECT_TRUE(r.bound.holds);
}

TEST(PerturbSum, Errors) {
  EXPECT_KG_ERROR(perturb_sum(standard_split(), standard_split(), I2, I2, I2), ErrorKind::OrthogonalityViolated);
  const auto sys_g = GFrameSystem::zeros(2, std::vector<std::size_t>{1, 1});
  EXPECT_KG_ERROR(perturb_sum(standard_split(), sys_g, ComplexMatrix::diagonal({1.0, 0.0}), Z2, I2),
                  ErrorKind::NotSurjective);
  const ComplexMatrix u{{1.0, 1.0}, {0.0, 1.0}};
  EXPECT_KG_ERROR(perturb_sum(standard_split(), sys_g, u, Z2, ComplexMatrix::diagonal({1.0, 2.0})),
                  ErrorKind::CommutationViolated);
}

TEST(PerturbSum, CrossTermVanishes) {
  Rng rng(33);
  const std::vector<std::size_t> dims{2, 1, 2, 2};
  for (int t = 0; t < 10; ++t) {
    auto [sys_l, sys_g] = gen_orthogonal_pair(rng, 3, dims, 2);
    const ComplexMatrix u = random_matrix(rng, 3, 3), v = random_matrix(rng, 3, 3);
    for (int p = 0; p < 10; ++p) {
      const CVector f = random_vector(rng, 3);
      const CVector uf = u * f, vf = v * f;
      cplx cross = 0.0;
      for (std::size_t i = 0; i < dims.size(); ++i) {
        const CVector a = sys_l.op(i) * uf, b = sys_g.op(i) * vf;
        for (std::size_t j = 0; j < a.size(); ++j) cross += std::conj(b[j]) * a[j];
      }
      EXPECT_LE(std::abs(cross), 1e-10);
    }
  }
}

TEST(ParsevalSum, BlockPadding) {
  Rng rng(34);
  const ComplexMatrix k = random_matrix(rng, 3, 3);
  const ComplexMatrix z = ComplexMatrix::zeros(3, 3);
  const ComplexMatrix ks = adjoint(k);
  // block 1 = K*, block 2 = 0, so S = K K*
  const auto r = parseval_sum(blocks({ks, z}), blocks({z, ks}), k);
  EXPECT_LE(frobenius_norm(frame_operator(r.combined) - cplx(2.0) * k * adjoint(k)),
            1e-12 * frobenius_norm(k * adjoint(k)));
  EXPECT_NEAR(r.tightness, 2.0, 1e-12);
  EXPECT_LE(r.residual, 1e-12);
}

TEST(ParsevalSum, OrthonormalSplit) {
  auto [l, g] = orthonormal_split_pair();
  const auto r = parseval_sum(l, g, I2);
  EXPECT_MAT_NEAR(frame_operator(r.combined), cplx(2.0) * I2, 1e-15);
  EXPECT_NEAR(r.tightness, 2.0, 1e-15);
}

TEST(ParsevalSum, Errors) {
  auto [l, g] = orthonormal_split_pair();
  EXPECT_KG_ERROR(parseval_sum(l, blocks({Z2, cplx(2.0) * I2}), I2), ErrorKind::NotParseval);
  EXPECT_KG_ERROR(parseval_sum(l, l, I2), ErrorKind::OrthogonalityViolated);
}

TEST(OperatorWeightedSum, OrthonormalSplit) {
  auto [l, g] = orthonormal_split_pair();
  const auto r = operator_weighted_sum(l, g, I2, I2, I2);
  EXPECT_NEAR(r.bound.predicted_lower, 2.0, 1e-8);
  EXPECT_NEAR(r.bound.measured_lower, 2.0, 1e-8);
  EXPECT_TRUE(r.bound.holds);
}

TEST(OperatorWeightedSum, OneTermDegenerate) {
  const auto l = single(scalar(2.0));
  const auto g = GFrameSystem::zeros(1, std::vector<std::size_t>{1});
  // λ1 = inf{μ : 1 <= μ 4} = 1/4
  const double lambda1 = kgtest::oracle_min_mu(scalar(1.0), scalar(4.0), 10.0);
  auto r = operator_weighted_sum(l, g, scalar(1.0), scalar(0.0), scalar(1.0));
  EXPECT_NEAR(r.bound.predicted_lower, 1.0 / lambda1, 1e-6);
  EXPECT_TRUE(r.bound.holds);

  const auto r2 = operator_weighted_sum(l, g, scalar(2.0), scalar(0.0), scalar(1.0));
  EXPECT_NEAR(r2.bound.predicted_lower, 4.0 * r.bound.predicted_lower, 1e-6);
  EXPECT_NEAR(r2.bound.measured_lower, 16.0, 1e-8);
  EXPECT_TRUE(r2.bound.holds);
}

TEST(OperatorWeightedSum, Errors) {
  auto [l, g] = orthonormal_split_pair();
  EXPECT_KG_ERROR(operator_weighted_sum(l, l, I2, I2, I2), ErrorKind::OrthogonalityViolated);
  EXPECT_KG_ERROR(operator_weighted_sum(l, g, ComplexMatrix::diagonal({1.0, 0.0}), I2, I2),
                  ErrorKind::RangeHypothesisViolated);
}

TEST(PositivePerturbation, Examples) {
  const auto sys = single(ComplexMatrix{{2.0, 0.0}, {0.0, 1.0}});
  auto r = positive_perturbation(sys, Z2, I2, 1);
  EXPECT_EQ(r.combined, sys);
  EXPECT_NEAR(r.measured_lower, optimal_k_lower_bound(sys, I2), 1e-12);

  r = positive_perturbation(single(scalar(2.0)), scalar(1.0), scalar(1.0), 1);
  EXPECT_MAT_NEAR(r.combined.op(0), scalar(4.0), 1e-15);
  EXPECT_NEAR(r.measured_lower, (1.0 + 1.0) * (1.0 + 1.0) * 4.0, 1e-8);
  EXPECT_LE(r.frame_op_residual, 1e-15);
  EXPECT_TRUE(r.combined_is_k_g_frame);
}

TEST(PositivePerturbation, CommutingNeverDecreases) {
  Rng rng(35);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = rng.index(1, 5);
    const ComplexMatrix w = random_unitary(rng, n);
    std::vector<double> s(n), kd(n), ud(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = rng.uniform(0.1, 3.0);
      kd[i] = rng.uniform(0.0, 2.0);
      ud[i] = rng.uniform(0.0, 2.0);
    }
    const ComplexMatrix root = w * ComplexMatrix::diagonal(s) * adjoint(w);
    const ComplexMatrix k = w * ComplexMatrix::diagonal(kd) * adjoint(w);
    const ComplexMatrix u = w * ComplexMatrix::diagonal(ud) * adjoint(w);
    const auto sys = single(root);
    const int power = static_cast<int>(rng.index(1, 3));
    const auto r = positive_perturbation(sys, u, k, power);
    EXPECT_GE(r.measured_lower, r.base_lower * (1.0 - 1e-8));
    EXPECT_LE(r.frame_op_residual, 1e-10);
  }
}

TEST(PositivePerturbation, Errors) {
  EXPECT_KG_ERROR(positive_perturbation(standard_split(), ComplexMatrix::diagonal({1.0, -1.0}), I2, 1),
                  ErrorKind::NotPositive);
  EXPECT_KG_ERROR(positive_perturbation(single(ComplexMatrix{{1.0, 0.0}}), I2, I2, 1),
                  ErrorKind::NotAtomicForInputs);
}

TEST(FrameOperatorCriterion, Examples) {
  auto r = k_g_frame_via_frame_operator(single(scalar(2.0)), scalar(1.0));
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.lambda_star, 4.0, 1e-9);

  r = k_g_frame_via_frame_operator(single(ComplexMatrix{{1.0, 0.0}}), I2);
  EXPECT_FALSE(r.holds);
  EXPECT_EQ(r.lambda_star, 0.0);

  const auto sys = single(ComplexMatrix{{2.0, 0.0}, {0.0, 1.0}});
  r = k_g_frame_via_frame_operator(sys, Z2);
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.lambda_star, 4.0, 1e-12);
}

TEST(MixSystems, ShapeErrors) {
  EXPECT_KG_ERROR(mix_systems(standard_split(), I2, single(I2), I2), ErrorKind::DimensionMismatch);
  EXPECT_KG_ERROR(mix_systems(standard_split(), ComplexMatrix::identity(3), standard_split(), I2),
                  ErrorKind::DimensionMismatch);
}
