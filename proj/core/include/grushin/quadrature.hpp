#pragma once

#include <vector>

namespace grushin {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(int n);

/// n-point Gauss-Legendre rule mapped to [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

/// Distribution of the cosine of the angle between a fixed unit vector and a
/// uniformly random direction on S^{d-1}. `cosines` and `weights` form a
/// discrete probability measure (weights sum to 1).
///
/// d = 1: exact two-point law on {+1, -1}.
/// d = 3: density 1/2 on cos(theta) in [-1, 1]; Gauss-Legendre in the cosine.
/// other d: density proportional to sin^{d-2}(theta) on [0, pi];
///          Gauss-Legendre in theta with the density folded into the weights,
///          since in the cosine variable the density has endpoint
///          singularities for even d.
struct AngularRule {
  std::vector<double> cosines;
  std::vector<double> one_minus_cos;  // 1 - cos(theta) without cancellation
  std::vector<double> weights;

  static AngularRule uniform(int dim, int order);

  /// Composite rule with panels shrinking geometrically (ratio 1/4) toward
  /// theta = 0, for integrands that peak sharply when the two directions
  /// align. `order` points per panel.
  static AngularRule graded(int dim, int order, int levels);
};

}  // namespace grushin
