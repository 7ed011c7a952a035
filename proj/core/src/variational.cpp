#include "grushin/variational.hpp"

#include <cmath>

#include "grushin/error.hpp"

namespace grushin {

namespace {

// |u|^{p-2} u, with the removable singularity at u = 0 set to 0.
double signed_power(double v, double p) {
  if (v == 0.0) return 0.0;
  if (p == 2.0) return v;
  return std::copysign(std::pow(std::abs(v), p - 1.0), v);
}

}  // namespace

GradientEval energy_and_gradient(const RadialField& u, const KernelMatrix& kernel,
                                 const ProblemParams& params) {
  kernel.require_compatible(u.grid(), params);
  const double p = params.p();
  const GrushinForm form(u.grid_ptr(), params.gamma());
  const auto w = u.grid().weights();

  RadialField lu(u.grid_ptr());
  form.apply_stiffness(u.values(), lu.values());
  const RadialField f = abs_pow(u, p);
  const RadialField k = convolve(kernel, f);

  GradientEval out{{}, RadialField(u.grid_ptr())};
  EnergyBreakdown& e = out.breakdown;
  for (std::size_t a = 0; a < u.size(); ++a) {
    e.A += u[a] * lu[a];
    e.B += w[a] * u[a] * u[a];
    e.D += w[a] * k[a] * f[a];
    out.gradient[a] = lu[a] / w[a] + u[a] - k[a] * signed_power(u[a], p);
  }
  e.E = 0.5 * (e.A + e.B) - e.D / (2.0 * p);
  return out;
}

EnergyBreakdown energy(const RadialField& u, const KernelMatrix& kernel,
                       const ProblemParams& params) {
  kernel.require_compatible(u.grid(), params);
  EnergyBreakdown e;
  e.A = dirichlet_energy(u, params);
  e.B = weighted_dot(u, u);
  e.D = choquard_term(kernel, u, params);
  e.E = 0.5 * (e.A + e.B) - e.D / (2.0 * params.p());
  return e;
}

double pohozaev_defect(const EnergyBreakdown& e, const ProblemParams& params) {
  const double n = homogeneous_dimension(params);
  return 0.5 * (n - 2.0) * e.A + 0.5 * n * e.B -
         (2.0 * n - params.mu()) / (2.0 * params.p()) * e.D;
}

RadialField energy_gradient(const RadialField& u, const KernelMatrix& kernel,
                            const ProblemParams& params) {
  return energy_and_gradient(u, kernel, params).gradient;
}

double nehari_scaling(double norm_sq, double D, double p) {
  if (!(norm_sq > 0.0) || !(D > 0.0)) throw DegenerateField();
  return std::pow(norm_sq / D, 1.0 / (2.0 * p - 2.0));
}

double nehari_scaling(const RadialField& u, const KernelMatrix& kernel,
                      const ProblemParams& params) {
  const EnergyBreakdown e = energy(u, kernel, params);
  return nehari_scaling(e.norm_sq(), e.D, params.p());
}

double ray_energy(double t, double norm_sq, double D, double p) {
  if (t == 0.0) return 0.0;
  return 0.5 * t * t * norm_sq - std::pow(t, 2.0 * p) * D / (2.0 * p);
}

double ray_zero(double norm_sq, double D, double p) {
  if (!(D > 0.0)) throw DegenerateField();
  return std::pow(p * norm_sq / D, 1.0 / (2.0 * p - 2.0));
}

std::vector<std::pair<double, double>> ray_profile(
    const RadialField& u, const KernelMatrix& kernel,
    const ProblemParams& params, const std::vector<double>& t_values) {
  std::vector<std::pair<double, double>> out;
  if (t_values.empty()) return out;
  const EnergyBreakdown e = energy(u, kernel, params);
  if (!(e.norm_sq() > 0.0)) throw DegenerateField();
  out.reserve(t_values.size());
  for (double t : t_values)
    out.emplace_back(t, ray_energy(t, e.norm_sq(), e.D, params.p()));
  return out;
}

}  // namespace grushin
