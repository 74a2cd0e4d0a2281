#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hsic_lab/kernel.hpp"

using namespace hsic_lab;

TEST(EvalXKernel, ZeroDistanceGivesPhiZero) {
  const std::vector<double> x{1, 1};
  EXPECT_DOUBLE_EQ(eval_x_kernel(RadialXKernel::gaussian(), x, x), 1.0);
}

TEST(EvalXKernel, HandValues) {
  const std::vector<double> a{1, 1}, b{-1, 1}, c{-1, -1};
  EXPECT_NEAR(eval_x_kernel(RadialXKernel::gaussian(), a, b), std::exp(-4.0), 1e-15);
  EXPECT_NEAR(eval_x_kernel(RadialXKernel::gaussian(), a, b), 0.0183156, 1e-7);
  // exp(-sqrt(8)) = 0.0591057...
  EXPECT_NEAR(eval_x_kernel(RadialXKernel::laplace(), a, c), 0.059105746561956238, 1e-15);
}

TEST(EvalXKernel, EmptyVectorsGivePhiZero) {
  const std::vector<double> e;
  const auto mix = RadialXKernel::mixture({{1.0, 2.0}, {3.0, 0.5}});
  EXPECT_DOUBLE_EQ(eval_x_kernel(mix, e, e), 2.5);
}

TEST(EvalXKernel, LengthMismatchThrows) {
  const std::vector<double> a{1, 2}, b{1};
  EXPECT_THROW(eval_x_kernel(RadialXKernel::gaussian(), a, b), dimension_error);
}

TEST(EvalXKernel, AppendingEqualCoordinatesLeavesValueUnchanged) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a{n(rng), n(rng)}, b{n(rng), n(rng)};
    const double before = eval_x_kernel(RadialXKernel::laplace(), a, b);
    for (int k = 0; k < 3; ++k) {
      const double c = n(rng);
      a.push_back(c);
      b.push_back(c);
    }
    EXPECT_EQ(eval_x_kernel(RadialXKernel::laplace(), a, b), before);
  }
}

TEST(EvalYKernel, Forms) {
  EXPECT_EQ(eval_y_kernel(ResponseKernel::parse("product-identity"), 1, -1), -1.0);
  EXPECT_DOUBLE_EQ(eval_y_kernel(ResponseKernel::parse("dist-gaussian"), 1, 1), 1.0);
  EXPECT_NEAR(eval_y_kernel(ResponseKernel::parse("dist-gaussian"), 1, -1), std::exp(-4.0), 1e-15);
  EXPECT_NEAR(eval_y_kernel(ResponseKernel::parse("dist-laplace"), 1, -1), std::exp(-2.0), 1e-15);
  EXPECT_NEAR(eval_y_kernel(ResponseKernel::parse("product-exp"), 1, -1), std::exp(-1.0), 1e-15);
}

TEST(ResponseKernel, AdmissibilityInequalities) {
  for (auto p : {ResponseKernel::Profile::identity, ResponseKernel::Profile::exp_product}) {
    const ResponseKernel k(p);
    EXPECT_GT(k.phi(1), k.phi(-1));
  }
  for (auto p : {ResponseKernel::Profile::gaussian_distance, ResponseKernel::Profile::laplace_distance}) {
    const ResponseKernel k(p);
    EXPECT_GT(k.phi(0), k.phi(1));
    EXPECT_GT(k.phi(0), k.phi(2));
  }
}

TEST(SchoenbergRatio, Values) {
  EXPECT_EQ(schoenberg_ratio(RadialXKernel::gaussian(), 0), 1.0);
  EXPECT_NEAR(schoenberg_ratio(RadialXKernel::gaussian(), 4), 0.018315638888734179, 1e-15);
  EXPECT_NEAR(schoenberg_ratio(RadialXKernel::laplace(), 4), 0.1353352832366127, 1e-15);
  // mixture: (2 e^{-z} + e^{-3z}) / 3
  const auto mix = RadialXKernel::mixture({{1.0, 2.0}, {3.0, 1.0}});
  EXPECT_NEAR(schoenberg_ratio(mix, 0.5), (2 * std::exp(-0.5) + std::exp(-1.5)) / 3, 1e-15);
}

TEST(SchoenbergRatio, NegativeArgumentThrows) {
  EXPECT_THROW(schoenberg_ratio(RadialXKernel::gaussian(), -1e-3), domain_error);
}

TEST(SchoenbergRatio, StrictlyDecreasingForAllProfiles) {
  const std::vector<RadialXKernel> kernels{
      RadialXKernel::gaussian(), RadialXKernel::laplace(),
      RadialXKernel::mixture({{0.1, 1.0}, {2.0, 0.5}, {7.0, 3.0}})};
  for (const auto& k : kernels) {
    double prev = schoenberg_ratio(k, 0.0);
    EXPECT_EQ(prev, 1.0);
    for (double z = 0.05; z <= 10.0; z += 0.05) {
      const double cur = schoenberg_ratio(k, z);
      EXPECT_LT(cur, prev) << k.describe() << " z=" << z;
      EXPECT_GT(cur, 0.0);
      prev = cur;
    }
  }
}

TEST(RadialXKernel, MixtureIsPositiveSemidefinite) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2, 2), rate(0.05, 5), weight(0.1, 2);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<MixtureAtom> atoms(1 + trial % 4);
    for (auto& a : atoms) a = {rate(rng), weight(rng)};
    const auto k = RadialXKernel::mixture(atoms);
    const int n = 2 + trial % 9, dim = 1 + trial % 3;
    std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
    std::vector<double> c(n);
    double l1 = 0;
    for (int i = 0; i < n; ++i) {
      for (auto& v : pts[i]) v = u(rng);
      c[i] = u(rng);
      l1 += std::abs(c[i]);
    }
    double q = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) q += c[i] * c[j] * eval_x_kernel(k, pts[i], pts[j]);
    EXPECT_GE(q, -1e-10 * l1 * l1 * k.phi(0));
  }
}

TEST(RadialXKernel, ParseAndDescribeRoundTrip) {
  for (const char* text : {"gaussian", "laplace", "mix:1:2,0.5:0.25"}) {
    const auto k = RadialXKernel::parse(text);
    EXPECT_EQ(RadialXKernel::parse(k.describe()).describe(), k.describe());
    for (double z : {0.0, 0.3, 2.0}) EXPECT_EQ(RadialXKernel::parse(k.describe()).phi(z), k.phi(z));
  }
  EXPECT_EQ(ResponseKernel::parse("dist-laplace").describe(), "dist-laplace");
}

TEST(RadialXKernel, RejectsInadmissibleMixtures) {
  EXPECT_THROW(RadialXKernel::parse("mix:0:1"), admissibility_error);
  EXPECT_THROW(RadialXKernel::parse("mix:1:-1"), admissibility_error);
  EXPECT_THROW(RadialXKernel::parse("mix:1"), format_error);
  EXPECT_THROW(RadialXKernel::parse("cauchy"), format_error);
  EXPECT_THROW(ResponseKernel::parse("product-gaussian"), format_error);
}
