#pragma once

#include <utility>
#include <vector>

#include "grushin/grid.hpp"
#include "grushin/nonlocal.hpp"
#include "grushin/params.hpp"

namespace grushin {

/// Energy split E = (A + B)/2 - D/(2p).
struct EnergyBreakdown {
  double A = 0.0;  // int |grad_gamma u|^2
  double B = 0.0;  // int u^2
  double D = 0.0;  // int (d^{-mu} * |u|^p) |u|^p
  double E = 0.0;

  double norm_sq() const noexcept { return A + B; }
};

EnergyBreakdown energy(const RadialField& u, const KernelMatrix& kernel,
                       const ProblemParams& params);

/// (N-2)/2 A + N/2 B - (2N-mu)/(2p) D; zero on smooth solutions.
double pohozaev_defect(const EnergyBreakdown& e, const ProblemParams& params);

/// Strong-form residual g = -Delta_gamma u + u - K |u|^{p-2} u with
/// K = convolve(kernel, |u|^p), so that <g, v>_w is the derivative of the
/// discrete energy at u in direction v.
RadialField energy_gradient(const RadialField& u, const KernelMatrix& kernel,
                            const ProblemParams& params);

/// Gradient together with the energy at the same point, sharing one
/// convolution.
struct GradientEval {
  EnergyBreakdown breakdown;
  RadialField gradient;
};
GradientEval energy_and_gradient(const RadialField& u, const KernelMatrix& kernel,
                                 const ProblemParams& params);

/// t* = (||u||_gamma^2 / D(u))^{1/(2p-2)}: t* u lies on the Nehari set
/// ||v||_gamma^2 = D(v). Throws DegenerateField if u = 0 or D(u) = 0.
double nehari_scaling(const RadialField& u, const KernelMatrix& kernel,
                      const ProblemParams& params);

/// Same scale from cached scalars.
double nehari_scaling(double norm_sq, double D, double p);

/// E(t u) = t^2/2 ||u||^2 - t^{2p}/(2p) D(u).
double ray_energy(double t, double norm_sq, double D, double p);

/// Zero of the ray energy beyond the origin: t_1 = (p ||u||^2 / D)^{1/(2p-2)};
/// E(t u) < 0 for every t > t_1.
double ray_zero(double norm_sq, double D, double p);

/// (t, E(t u)) for each t from the closed ray formula; the norm and D are
/// computed once.
std::vector<std::pair<double, double>> ray_profile(
    const RadialField& u, const KernelMatrix& kernel,
    const ProblemParams& params, const std::vector<double>& t_values);

}  // namespace grushin
