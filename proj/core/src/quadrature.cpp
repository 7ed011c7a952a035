#include "grushin/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "grushin/error.hpp"

namespace grushin {

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw InvalidArgument("quadrature order must be >= 1");
  QuadratureRule rule;
  if (n == 1) {
    rule.nodes = {0.0};
    rule.weights = {2.0};
    return rule;
  }
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadratureRule gauss_legendre(int n, double a, double b) {
  QuadratureRule rule = gauss_legendre(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

namespace {

void normalize(AngularRule& rule) {
  double total = 0.0;
  for (double w : rule.weights) total += w;
  for (double& w : rule.weights) w /= total;
}

void append_theta_panel(AngularRule& rule, int dim, int order, double a,
                        double b) {
  const QuadratureRule q = gauss_legendre(order, a, b);
  for (int k = 0; k < order; ++k) {
    const double th = q.nodes[k];
    rule.cosines.push_back(std::cos(th));
    const double half_sin = std::sin(0.5 * th);
    rule.one_minus_cos.push_back(2.0 * half_sin * half_sin);
    rule.weights.push_back(q.weights[k] * std::pow(std::sin(th), dim - 2));
  }
}

void append_cosine_panel(AngularRule& rule, int order, double a, double b) {
  const QuadratureRule q = gauss_legendre(order, a, b);
  rule.cosines.insert(rule.cosines.end(), q.nodes.begin(), q.nodes.end());
  for (double t : q.nodes) rule.one_minus_cos.push_back(1.0 - t);
  rule.weights.insert(rule.weights.end(), q.weights.begin(), q.weights.end());
}

}  // namespace

AngularRule AngularRule::uniform(int dim, int order) {
  if (dim < 1) throw InvalidArgument("sphere dimension must be >= 1");
  if (order < 1) throw InvalidArgument("angular order must be >= 1");
  AngularRule rule;
  if (dim == 1) {
    rule.cosines = {1.0, -1.0};
    rule.one_minus_cos = {0.0, 2.0};
    rule.weights = {0.5, 0.5};
    return rule;
  }
  if (dim == 3) {
    append_cosine_panel(rule, order, -1.0, 1.0);
  } else {
    append_theta_panel(rule, dim, order, 0.0, std::numbers::pi);
  }
  normalize(rule);
  return rule;
}

AngularRule AngularRule::graded(int dim, int order, int levels) {
  if (dim == 1) return uniform(1, order);
  if (levels < 1) return uniform(dim, order);
  AngularRule rule;
  // Panel edges in theta: 0, pi 4^{-levels}, ..., pi/4, pi.
  std::vector<double> edges{0.0};
  for (int k = levels; k >= 1; --k)
    edges.push_back(std::numbers::pi * std::pow(0.25, k));
  edges.push_back(std::numbers::pi);
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    if (dim == 3) {
      // Panels in the cosine variable, mapped from the theta edges.
      append_cosine_panel(rule, order, std::cos(edges[k + 1]),
                          std::cos(edges[k]));
    } else {
      append_theta_panel(rule, dim, order, edges[k], edges[k + 1]);
    }
  }
  normalize(rule);
  return rule;
}

}  // namespace grushin
