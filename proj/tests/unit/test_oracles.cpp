#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"

using namespace grushin::testing;
using std::numbers::pi;

TEST(RadialOracle, ConvergesAndSatisfiesIdentities) {
  const RadialChoquard a = solve_radial_choquard(200, 30.0);
  const RadialChoquard b = solve_radial_choquard(400, 30.0);
  const RadialChoquard c = solve_radial_choquard(800, 30.0);
  for (const auto* o : {&a, &b, &c}) {
    EXPECT_LT(o->residual, 1e-9);
    EXPECT_LT(o->newton_iters, 30);
    // Testing the discrete equation with w is exact summation by parts.
    EXPECT_NEAR(o->A + o->B, o->D, 1e-9 * o->D);
  }
  // Pohozaev in R^3 with mu = 1, p = 2 forces A/D = 1/4; the finite
  // difference defect falls at second order.
  const double ea = std::abs(a.A / a.D - 0.25), eb = std::abs(b.A / b.D - 0.25),
               ec = std::abs(c.A / c.D - 0.25);
  EXPECT_LT(ec, 1e-4);
  EXPECT_NEAR(ea / eb, 4.0, 0.5);
  EXPECT_NEAR(eb / ec, 4.0, 0.5);
  const double de1 = b.E - a.E, de2 = c.E - b.E;
  EXPECT_NEAR(de1 / de2, 4.0, 0.5);
  EXPECT_GT(c.u0, 0.0);
  EXPECT_LT(c.u.back(), 1e-8 * c.u0);
}

TEST(RadialOracle, DomainLengthIsConverged) {
  const RadialChoquard a = solve_radial_choquard(399, 30.0);
  const RadialChoquard b = solve_radial_choquard(519, 39.0);  // same spacing
  EXPECT_NEAR(a.E, b.E, 1e-9);
}

TEST(MonteCarloOracle, NewtonAverage) {
  // R^3 x R with s = s' = 0: mean |x - x'|^{-1} over S^2 is 1 / max.
  const double v = monte_carlo_kernel(3, 1, 0.0, 1.0, 0.7, 0.0, 1.3, 0.0, 1'000'000, 1);
  EXPECT_NEAR(v, 1.0 / 1.3, 2e-3);
  // One argument at the origin: no angular spread at all.
  const double far = monte_carlo_kernel(1, 1, 1.0, 1.0, 0.0, 0.0, 10.0, 0.0, 1000, 2);
  EXPECT_NEAR(far, 0.1, 1e-12);
}

TEST(FineOracle, GaussianPotentialInR3) {
  // f = e^{-2 rho^2}: K = (pi/2)^{3/2} erf(sqrt(2) rho) / rho.
  auto f = [](double r, double s) { return std::exp(-2.0 * (r * r + s * s)); };
  for (auto [r, s] : {std::pair{0.3, 0.7}, {1.2, 0.1}, {0.05, 2.0}}) {
    const double rho = std::hypot(r, s);
    const double exact = std::pow(pi / 2.0, 1.5) * std::erf(std::sqrt(2.0) * rho) / rho;
    EXPECT_NEAR(fine_potential(1, 2, 0.0, 1.0, r, s, f, 6.0, 6.0), exact, 1e-9 * exact);
  }
}

TEST(FineOracle, GrushinHomogeneity) {
  // K_t(z) for f o delta_{1/t} equals t^{N - mu} K(delta_{1/t} z); f
  // vanishes far before the cut-off, so the boxes may be scaled too.
  const double gamma = 1.0, mu = 1.0, n = 1.0 + (1.0 + gamma);
  auto f = [](double r, double s) { return std::exp(-r * r - 0.25 * s * s); };
  const double t = 1.5, ts = t * t;
  auto ft = [&](double r, double s) { return f(r / t, s / ts); };
  const double base = fine_potential(1, 1, gamma, mu, 0.4, 0.9, f, 8.0, 16.0);
  const double dil = fine_potential(1, 1, gamma, mu, 0.4 * t, 0.9 * ts, ft, 8.0 * t, 16.0 * ts);
  EXPECT_NEAR(dil / (std::pow(t, n - mu) * base), 1.0, 1e-7);
}
