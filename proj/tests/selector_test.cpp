#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hsic_lab/random_instances.hpp"
#include "hsic_lab/selector.hpp"

using namespace hsic_lab;

namespace {

const auto kGauss = RadialXKernel::gaussian();
const auto kLap = RadialXKernel::laplace();
const ResponseKernel kIdentity(ResponseKernel::Profile::identity);
const ResponseKernel kDistGauss(ResponseKernel::Profile::gaussian_distance);

std::vector<double> quarter_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 8; ++i) g.push_back(0.25 * i);
  return g;
}

ContinuousSearchConfig cont(double q, double r, int grid = 129) {
  ContinuousSearchConfig c;
  c.q = q;
  c.r = r;
  c.grid_points_per_axis = grid;
  return c;
}

}  // namespace

TEST(LqNorm, Values) {
  const std::vector<double> v{3, -4};
  EXPECT_DOUBLE_EQ(lq_norm(v, 1), 7);
  EXPECT_DOUBLE_EQ(lq_norm(v, 2), 5);
  EXPECT_EQ(lq_norm(v, kInfinity), 4);
  EXPECT_THROW(lq_norm(v, 0.5), domain_error);
}

TEST(SelectSubset, CounterexampleKeepsOnlyDominantFeature) {
  const auto d = build_counterexample(DeltaParams(0.9, 0.1));
  const auto r = select_subset(d, kGauss, kIdentity);
  EXPECT_EQ(r.subset, FeatureSubset({1}, 2));
  EXPECT_NEAR(r.attained.value, 0.3975822, 1e-7);
  ASSERT_EQ(r.audit.size(), 4u);
  // audit is in candidate order: {}, {1}, {2}, {1,2}
  EXPECT_TRUE(r.audit[0].subset.empty());
  EXPECT_EQ(r.audit[0].value, 0.0);
  EXPECT_EQ(r.audit[1].subset, FeatureSubset({1}, 2));
  EXPECT_EQ(r.audit[2].subset, FeatureSubset({2}, 2));
  EXPECT_EQ(r.audit[3].subset, FeatureSubset({1, 2}, 2));
  EXPECT_GT(r.audit[1].value, r.audit[3].value);
  EXPECT_GT(r.audit[3].value, r.audit[2].value);
  EXPECT_GT(r.audit[2].value, r.audit[0].value);
  const DeltaParams p(0.9, 0.1);
  EXPECT_NEAR(r.audit[1].value, 0.25 * closed_form_L(p, {1, 0}, kGauss), 1e-15);
  EXPECT_NEAR(r.audit[2].value, 0.25 * closed_form_L(p, {0, 1}, kGauss), 1e-15);
  EXPECT_NEAR(r.audit[3].value, 0.25 * closed_form_L(p, {1, 1}, kGauss), 1e-15);
  EXPECT_EQ(r.attained.kernel_x, "gaussian");
  EXPECT_EQ(r.attained.kernel_y, "product-identity");
}

TEST(SelectSubset, EqualDeltasKeepBoth) {
  const auto r = select_subset(build_counterexample(DeltaParams(0.5, 0.5)), kGauss, kIdentity);
  EXPECT_EQ(r.subset, FeatureSubset({1, 2}, 2));
  EXPECT_NEAR(r.attained.value, 0.5 * (1 - std::exp(-8.0)) / 4, 1e-15);
  EXPECT_NEAR(r.audit[1].value, 0.5 * (1 - std::exp(-4.0)) / 4, 1e-15);
}

TEST(SelectSubset, IndependenceGivesEmptySet) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 20; ++i) {
    const auto d = random_instances::product(rng);
    const auto r = select_subset(d, kLap, kDistGauss);
    EXPECT_TRUE(r.subset.empty());
    EXPECT_EQ(r.audit.size(), std::size_t{1} << d.p());
  }
}

TEST(SelectSubset, TieGoesToSmallerThenLexicographic) {
  // Y depends on X1 only and X2 is a copy of X1: {1} and {2} tie exactly, {1,2}
  // is a different value; the lexicographically first singleton must win
  // whenever singletons tie for the maximum.
  const FiniteJointDistribution d(2, {{{1, 1}, 1, 0.5}, {{-1, -1}, -1, 0.5}});
  const auto r = select_subset(d, kGauss, kIdentity);
  EXPECT_EQ(r.audit[1].value, r.audit[2].value);
  if (r.audit[1].value >= r.audit[3].value - kTieTolerance) {
    EXPECT_EQ(r.subset, FeatureSubset({1}, 2));
  }
  // Three saturated copies: exp(-36) is below the tie tolerance, so every
  // nonempty subset ties and {1} must win.
  const FiniteJointDistribution d3(3, {{{3, 3, 3}, 1, 0.5}, {{-3, -3, -3}, -1, 0.5}});
  const auto r3 = select_subset(d3, kGauss, kIdentity);
  EXPECT_EQ(r3.subset.size(), 1u);
  EXPECT_EQ(r3.subset, FeatureSubset({1}, 3));
}

TEST(SelectSubset, AttainedIsAuditMaximum) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 30; ++i) {
    const auto d = random_instances::joint(rng, 32);
    const auto r = select_subset(d, kGauss, kDistGauss);
    double best = -1;
    for (const auto& e : r.audit) best = std::max(best, e.value);
    EXPECT_NEAR(r.attained.value, best, 1e-12);
    EXPECT_GE(r.attained.value,
              exact_hsic_subset(d, kGauss, kDistGauss, FeatureSubset::all(d.p())).value - 1e-12);
  }
}

TEST(SelectSubset, RejectsLargeDimension) {
  const FiniteJointDistribution d(21, {{std::vector<double>(21, 0.0), 1, 1.0}});
  EXPECT_THROW(select_subset(d, kGauss, kIdentity), enumeration_error);
}

TEST(SelectContinuous, MaxNormUnitBall) {
  const auto d = build_counterexample(DeltaParams(0.9, 0.1));
  const auto r = select_continuous(d, kGauss, kIdentity, cont(kInfinity, 1.0, 513));
  ASSERT_TRUE(r.weights);
  EXPECT_EQ(r.subset, FeatureSubset({1}, 2));
  EXPECT_NEAR(r.weights->beta[0], 1.0, 1.0 / 512);
  EXPECT_LT(std::abs(r.weights->beta[1]), 1e-9);
  EXPECT_NEAR(r.attained.value, 0.3975822, 1e-7);
}

TEST(SelectContinuous, ZeroRadius) {
  const auto d = build_counterexample(DeltaParams(0.9, 0.1));
  const auto r = select_continuous(d, kGauss, kIdentity, cont(kInfinity, 0.0));
  EXPECT_TRUE(r.subset.empty());
  EXPECT_EQ(r.attained.value, 0.0);
  EXPECT_EQ(r.weights->beta, (std::vector<double>{0, 0}));
  EXPECT_THROW(select_continuous(d, kGauss, kIdentity, cont(kInfinity, -1.0)), domain_error);
}

TEST(SelectContinuous, SmallRadius) {
  const auto d = build_counterexample(DeltaParams(0.9, 0.1));
  const auto r = select_continuous(d, kGauss, kIdentity, cont(kInfinity, 0.1));
  EXPECT_EQ(r.subset, FeatureSubset({1}, 2));
  EXPECT_NEAR(r.weights->beta[0], 0.1, 0.1 / 128);
  EXPECT_LT(std::abs(r.weights->beta[1]), 1e-9);
}

TEST(SelectContinuous, OneNormAndTwoNorm) {
  const auto d = build_counterexample(DeltaParams(0.9, 0.1));
  const auto r1 = select_continuous(d, kGauss, kIdentity, cont(1.0, 2.0));
  EXPECT_EQ(r1.subset, FeatureSubset({1}, 2));
  EXPECT_NEAR(r1.weights->beta[0], 2.0, 2.0 / 128);
  const auto r2 = select_continuous(d, kLap, kDistGauss, cont(2.0, 1.0));
  EXPECT_EQ(r2.subset, FeatureSubset({1}, 2));
  EXPECT_NEAR(lq_norm(r2.weights->beta, 2.0), 1.0, 1.0 / 128);
}

TEST(SelectContinuous, WeightsInsideBallAndSupportConsistent) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 6; ++i) {
    auto d = random_instances::joint(rng, 16);
    if (d.p() > 3) continue;
    for (double q : {1.0, 2.0, kInfinity}) {
      const auto r = select_continuous(d, kLap, kIdentity, cont(q, 1.0, 33));
      EXPECT_LE(lq_norm(r.weights->beta, q), 1.0 + 1e-9);
      for (int j = 1; j <= d.p(); ++j) {
        EXPECT_EQ(r.subset.contains(j), std::abs(r.weights->beta[j - 1]) > 1e-9);
      }
      double best = -1;
      for (const auto& e : r.audit) best = std::max(best, e.value);
      EXPECT_NEAR(r.attained.value, best, 1e-12);
    }
  }
}

TEST(SelectContinuous, Deterministic) {
  const auto d = build_counterexample(DeltaParams(0.7, 0.2));
  const auto a = select_continuous(d, kLap, kIdentity, cont(2.0, 1.5, 65));
  const auto b = select_continuous(d, kLap, kIdentity, cont(2.0, 1.5, 65));
  EXPECT_EQ(a.weights->beta, b.weights->beta);
  EXPECT_EQ(a.attained.value, b.attained.value);
  EXPECT_EQ(a.audit.size(), b.audit.size());
}

TEST(SelectContinuous, ConfigValidation) {
  const auto d = build_counterexample(DeltaParams(0.9, 0.1));
  EXPECT_THROW(select_continuous(d, kGauss, kIdentity, cont(0.5, 1.0)), domain_error);
  EXPECT_THROW(select_continuous(d, kGauss, kIdentity, cont(2.0, 1.0, 10)), domain_error);
  const FiniteJointDistribution big(6, {{std::vector<double>(6, 0.0), 1, 1.0}});
  EXPECT_THROW(select_continuous(big, kGauss, kIdentity, cont(2.0, 1.0, 513)), enumeration_error);
}

TEST(EliminationCondition, Examples) {
  const auto c = check_elimination_condition(kGauss, 1.0, DeltaParams(0.9, 0.1));
  EXPECT_TRUE(c.holds);
  EXPECT_NEAR(c.lhs, 0.0183156, 1e-7);
  EXPECT_NEAR(c.rhs, 0.9756098, 1e-7);
  const auto e = check_elimination_condition(kGauss, 1.0, DeltaParams(0.505, 0.5));
  EXPECT_FALSE(e.holds);
  EXPECT_NEAR(e.rhs, 0.0099500, 1e-7);
  for (const auto& kx : {kGauss, kLap}) {
    const auto eq = check_elimination_condition(kx, 0.75, DeltaParams(0.4, 0.4));
    EXPECT_FALSE(eq.holds);
    EXPECT_EQ(eq.rhs, 0.0);
  }
  EXPECT_THROW(check_elimination_condition(kGauss, 1.0, DeltaParams(0.0, 0.0)), domain_error);
  EXPECT_THROW(check_elimination_condition(kGauss, 0.0, DeltaParams(0.9, 0.1)), domain_error);
}

TEST(PickDelta, Examples) {
  const auto d = pick_delta(kGauss, 1.0);
  EXPECT_EQ(d.delta1, 0.9);
  EXPECT_EQ(d.delta2, 0.1);
  const auto small = pick_delta(kGauss, 0.05);
  EXPECT_EQ(small.delta1, 0.9);
  EXPECT_LE(small.delta2, 0.1);
  EXPECT_GT(small.delta2, 0.0);
  const auto c = check_elimination_condition(kGauss, 0.05, small);
  EXPECT_TRUE(c.holds);
  EXPECT_GT(c.rhs, std::exp(-0.01));
  EXPECT_THROW(pick_delta(kGauss, 0.0), domain_error);
  EXPECT_THROW(pick_delta(kGauss, -1.0), domain_error);
}

TEST(PickDelta, AlwaysSatisfiesCondition) {
  for (const auto& kx : {kGauss, kLap, RadialXKernel::mixture({{0.2, 1}, {5, 0.5}})}) {
    for (double b0 : {0.01, 0.1, 0.5, 1.0, 3.0}) {
      const auto d = pick_delta(kx, b0);
      EXPECT_TRUE(check_elimination_condition(kx, b0, d).holds);
      EXPECT_GT(d.delta1, d.delta2);
    }
  }
}

TEST(RadiusToB0, Values) {
  EXPECT_EQ(radius_to_b0(kInfinity, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(radius_to_b0(1.0, 2.0), 1.0);
  EXPECT_DOUBLE_EQ(radius_to_b0(2.0, 1.0), 1.0 / std::sqrt(2.0));
  EXPECT_THROW(radius_to_b0(2.0, 0.0), domain_error);
}

TEST(Landscape, MonotoneInDominantWeightAtStrongSignal) {
  const DeltaParams d(0.9, 0.1);
  const auto g = quarter_grid();
  for (const auto& kx : {kGauss, kLap}) {
    for (double b2 : g)
      for (std::size_t i = 0; i + 1 < g.size(); ++i)
        EXPECT_GT(closed_form_L(d, {g[i + 1], b2}, kx), closed_form_L(d, {g[i], b2}, kx) + 1e-6)
            << kx.describe() << " b1=" << g[i] << " b2=" << b2;
  }
}

TEST(Landscape, PermutationPrefersDominant) {
  const auto g = quarter_grid();
  for (auto [d1, d2] : {std::pair{0.9, 0.1}, std::pair{0.6, 0.3}, std::pair{0.3, 0.2}})
    for (double b1 : g)
      for (double b2 : g) {
        if (!(b1 > b2)) continue;
        const DeltaParams d(d1, d2);
        EXPECT_GT(closed_form_L(d, {b1, b2}, kLap), closed_form_L(d, {b2, b1}, kLap));
        EXPECT_GT(closed_form_L(d, {b1, b2}, kGauss), closed_form_L(d, {b2, b1}, kGauss));
      }
}

TEST(Landscape, RemovalRaisesLWhenConditionHolds) {
  const auto g = quarter_grid();
  int fired = 0;
  for (int i = 1; i <= 9; ++i)
    for (int j = 1; j < i; ++j) {
      const DeltaParams d(i / 10.0, j / 10.0);
      for (const auto& kx : {kGauss, kLap})
        for (double b1 : g) {
          if (b1 == 0 || !check_elimination_condition(kx, b1, d).holds) continue;
          ++fired;
          for (double b2 : g) {
            if (b2 > 0) {
              EXPECT_LT(closed_form_L(d, {b1, b2}, kx), closed_form_L(d, {b1, 0}, kx));
            }
          }
        }
    }
  EXPECT_GT(fired, 0);
}

TEST(Landscape, RemovalFailsAtEqualDeltas) {
  const DeltaParams d(0.5, 0.5);
  EXPECT_GT(closed_form_L(d, {1, 1}, kGauss), closed_form_L(d, {1, 0}, kGauss));
}
