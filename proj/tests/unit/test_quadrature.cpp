#include <gtest/gtest.h>

#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <numbers>
#include <numeric>

#include "grushin/error.hpp"
#include "grushin/quadrature.hpp"

using namespace grushin;

TEST(Quadrature, GaussLegendreIntegratesPolynomials) {
  for (int n : {1, 2, 5, 16, 48}) {
    const QuadratureRule q = gauss_legendre(n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double sum = 0.0;
      for (int a = 0; a < n; ++a) sum += q.weights[a] * std::pow(q.nodes[a], k);
      const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
      EXPECT_NEAR(sum, exact, 1e-13) << "n=" << n << " k=" << k;
    }
  }
  EXPECT_THROW(gauss_legendre(0), InvalidArgument);
}

TEST(Quadrature, MappedRule) {
  const QuadratureRule q = gauss_legendre(8, 1.0, 3.0);
  double sum = 0.0;
  for (std::size_t a = 0; a < q.nodes.size(); ++a) sum += q.weights[a] * std::exp(q.nodes[a]);
  EXPECT_NEAR(sum, std::exp(3.0) - std::exp(1.0), 1e-12);
}

// E[cos^k] under the law of the cosine between a fixed and a uniform
// direction in R^d: zero for odd k, Beta-function ratio for even k.
double cosine_moment(int d, int k) {
  if (k % 2) return 0.0;
  if (d == 1) return 1.0;
  using boost::math::beta;
  return beta(0.5 * (k + 1), 0.5 * (d - 1)) / beta(0.5, 0.5 * (d - 1));
}

TEST(Quadrature, AngularRuleMoments) {
  for (int d : {1, 2, 3, 4, 5, 6}) {
    const AngularRule rule = AngularRule::uniform(d, 32);
    const double total = std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0);
    EXPECT_NEAR(total, 1.0, 1e-14) << d;
    for (int k = 0; k <= 12; ++k) {
      double sum = 0.0;
      for (std::size_t a = 0; a < rule.weights.size(); ++a)
        sum += rule.weights[a] * std::pow(rule.cosines[a], k);
      EXPECT_NEAR(sum, cosine_moment(d, k), 1e-12) << "d=" << d << " k=" << k;
    }
    for (std::size_t a = 0; a < rule.weights.size(); ++a)
      EXPECT_NEAR(rule.one_minus_cos[a], 1.0 - rule.cosines[a], 1e-15);
  }
}

TEST(Quadrature, GradedRuleIsAProbabilityMeasure) {
  for (int d : {2, 3, 4}) {
    const AngularRule rule = AngularRule::graded(d, 8, 10);
    const double total = std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0);
    EXPECT_NEAR(total, 1.0, 1e-13);
    double m2 = 0.0;
    for (std::size_t a = 0; a < rule.weights.size(); ++a)
      m2 += rule.weights[a] * rule.cosines[a] * rule.cosines[a];
    EXPECT_NEAR(m2, cosine_moment(d, 2), 1e-12);
  }
}

TEST(Quadrature, GradedRuleResolvesAlignedPeak) {
  // In R^3 the mean of |e - e'|^{-1} is exact: E[(2 - 2c)^{-1/2}] = 1, and
  // for |e - (1+eps) e'| it is 1 / (1 + eps).
  const double eps = 1e-3;
  auto mean = [&](const AngularRule& rule) {
    double sum = 0.0;
    for (std::size_t a = 0; a < rule.weights.size(); ++a) {
      const double d2 = eps * eps + 2.0 * (1.0 + eps) * rule.one_minus_cos[a];
      sum += rule.weights[a] / std::sqrt(d2);
    }
    return sum;
  };
  const double exact = 1.0 / (1.0 + eps);
  EXPECT_NEAR(mean(AngularRule::graded(3, 8, 8)), exact, 5e-5);
  EXPECT_NEAR(mean(AngularRule::graded(3, 16, 8)), exact, 1e-8);
  EXPECT_GT(std::abs(mean(AngularRule::uniform(3, 8)) - exact), 1e-3);
}
