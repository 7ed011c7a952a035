#include "grushin/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "grushin/error.hpp"
#include "grushin/field_io.hpp"

namespace grushin {

void SolverConfig::validate() const {
  if (!(tol > 0.0)) throw InvalidArgument("solver tol must be positive");
  if (max_iters < 1) throw InvalidArgument("solver max_iters must be >= 1");
  if (!(step0 > 0.0)) throw InvalidArgument("solver step0 must be positive");
  if (!(backtrack > 0.0 && backtrack < 1.0))
    throw InvalidArgument("solver backtrack must lie in (0, 1)");
}

const char* to_string(ProbeOutcome outcome) {
  switch (outcome) {
    case ProbeOutcome::collapse: return "collapse";
    case ProbeOutcome::escape: return "escape";
    case ProbeOutcome::stagnate: return "stagnate";
    case ProbeOutcome::converged: return "converged";
  }
  return "unknown";
}

RadialField standard_bump(const GridPtr& grid, const ProblemParams& params) {
  const double g1 = 1.0 + params.gamma();
  return sample(grid, [g1](double r, double s) {
    return std::exp(-(r * r + s * s / (g1 * g1)));
  });
}

namespace {

/// Factorized -Delta_gamma + I in weighted form, M = L + W.
class SobolevMetric {
 public:
  SobolevMetric(const GridPtr& grid, double gamma) : form_(grid, gamma) {
    const auto trips = form_.triplets(1.0);
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(trips.size());
    for (const auto& e : trips) t.emplace_back(e.row, e.col, e.value);
    const int n = static_cast<int>(grid->size());
    Eigen::SparseMatrix<double> m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    llt_.compute(m);
    if (llt_.info() != Eigen::Success)
      throw Error("factorization of -Delta_gamma + I failed");
  }

  /// h with M h = W g, the H^1 representative of the residual g.
  RadialField riesz(const RadialField& g) const {
    const auto w = g.grid().weights();
    Eigen::VectorXd rhs(g.size());
    for (std::size_t a = 0; a < g.size(); ++a) rhs[a] = w[a] * g[a];
    const Eigen::VectorXd h = llt_.solve(rhs);
    return RadialField(g.grid_ptr(), std::vector<double>(h.data(), h.data() + h.size()));
  }

  /// v^T M v
  double norm_sq(const RadialField& v) const {
    return form_.energy(v.values()) + weighted_dot(v, v);
  }

  /// a^T M b
  double inner(const RadialField& a, const RadialField& b) const {
    std::vector<double> mb(b.size());
    form_.apply_stiffness(b.values(), mb);
    double acc = 0.0;
    const auto w = a.grid().weights();
    for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * (mb[k] + w[k] * b[k]);
    return acc;
  }

  double distance(const RadialField& a, const RadialField& b) const {
    return std::sqrt(std::max(0.0, norm_sq(a - b)));
  }

 private:
  GrushinForm form_;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt_;
};

// Energy of the Nehari projection of v: with N = ||v||^2, t*^2 = (N/D)^{1/(p-1)}
// and E(t* v) = (1/2 - 1/(2p)) t*^2 N.
double projected_energy(double norm_sq, double D, double p) {
  if (!(norm_sq > 0.0) || !(D > 0.0)) return std::numeric_limits<double>::infinity();
  return (0.5 - 0.5 / p) * norm_sq * std::pow(norm_sq / D, 1.0 / (p - 1.0));
}

double negative_fraction(const RadialField& u) {
  const auto w = u.grid().weights();
  double neg = 0.0, all = 0.0;
  for (std::size_t a = 0; a < u.size(); ++a) {
    all += w[a] * u[a] * u[a];
    if (u[a] < 0.0) neg += w[a] * u[a] * u[a];
  }
  return all > 0.0 ? std::sqrt(neg / all) : 0.0;
}

enum class DescentStatus { converged, max_iters, diverged_low, diverged_high, stalled };

struct DescentResult {
  SolveReport report;
  DescentStatus status = DescentStatus::max_iters;
  double norm_ratio = 1.0;
};

void finish_report(SolveReport& rep, const GradientEval& ge,
                   const SobolevMetric& metric, const ProblemParams& params) {
  rep.breakdown = ge.breakdown;
  rep.residual = weighted_norm(ge.gradient);
  const RadialField h = metric.riesz(ge.gradient);
  rep.dual_residual = std::sqrt(std::max(0.0, metric.norm_sq(h)));
  rep.nehari_residual = ge.breakdown.norm_sq() - ge.breakdown.D;
  rep.pohozaev_residual = pohozaev_defect(ge.breakdown, params);
  rep.mp_level = ge.breakdown.E;
  rep.negative_part = negative_fraction(rep.field);
}

DescentResult projected_descent(const ProblemParams& params,
                                const KernelMatrix& kernel,
                                const SolverConfig& config,
                                const SobolevMetric& metric, RadialField u) {
  const double p = params.p();
  {
    const EnergyBreakdown e = energy(u, kernel, params);
    u *= nehari_scaling(e.norm_sq(), e.D, p);
  }
  const GrushinForm form(u.grid_ptr(), params.gamma());
  auto norm_and_d = [&](const RadialField& v) {
    const double nsq = form.energy(v.values()) + weighted_dot(v, v);
    return std::pair{nsq, choquard_term(kernel, v, params)};
  };

  DescentResult out{SolveReport{u, {}, 0, 0, 0, 0, 0, false, 0, 0, {}}};
  const double scale0 = std::sqrt(metric.norm_sq(u));
  for (int it = 0;; ++it) {
    const GradientEval ge = energy_and_gradient(u, kernel, params);
    const double res = weighted_norm(ge.gradient);
    out.report.iters = it;
    if (res <= config.tol) {
      out.status = DescentStatus::converged;
      break;
    }
    if (it >= config.max_iters) {
      out.status = DescentStatus::max_iters;
      break;
    }
    const RadialField h = metric.riesz(ge.gradient);
    double slope = 0.0;
    {
      const auto w = u.grid().weights();
      for (std::size_t a = 0; a < u.size(); ++a) slope += w[a] * ge.gradient[a] * h[a];
    }
    const double j0 = projected_energy(ge.breakdown.norm_sq(), ge.breakdown.D, p);
    out.report.energy_history.push_back(j0);
    double eta = config.step0;
    bool accepted = false;
    RadialField trial(u.grid_ptr());
    double trial_nsq = 0.0, trial_d = 0.0;
    for (int k = 0; k < 60; ++k) {
      trial = u;
      trial.axpy(-eta, h);
      std::tie(trial_nsq, trial_d) = norm_and_d(trial);
      const double j = projected_energy(trial_nsq, trial_d, p);
      if (j <= j0 - config.armijo * eta * slope) {
        accepted = true;
        break;
      }
      eta *= config.backtrack;
    }
    if (!accepted) {
      out.status = DescentStatus::stalled;
      break;
    }
    trial *= nehari_scaling(trial_nsq, trial_d, p);
    u = std::move(trial);
    const double ratio = std::sqrt(metric.norm_sq(u)) / scale0;
    out.norm_ratio = ratio;
    if (ratio < 1e-8 || ratio > 1e8) {
      out.status = ratio < 1e-8 ? DescentStatus::diverged_low
                                : DescentStatus::diverged_high;
      out.report.iters = it + 1;
      break;
    }
  }
  out.report.field = u;
  const GradientEval ge = energy_and_gradient(u, kernel, params);
  finish_report(out.report, ge, metric, params);
  out.report.converged =
      out.status == DescentStatus::converged && out.report.residual <= config.tol;
  out.norm_ratio = std::sqrt(metric.norm_sq(u)) / scale0;
  return out;
}

RadialField initial_field(const ProblemParams& params, const GridPtr& grid,
                          const SolverConfig& config,
                          const std::optional<RadialField>& initial) {
  if (initial) {
    if (!initial->grid().same_layout(*grid)) throw InvalidArgument("grid mismatch");
    return *initial;
  }
  if (config.init_kind == InitKind::custom_file) {
    return read_field_csv(config.init_file, std::nullopt, grid).field;
  }
  return standard_bump(grid, params);
}

void check_inputs(const ProblemParams& params, const GridPtr& grid,
                  const KernelMatrix& kernel, const SolverConfig& config) {
  config.validate();
  require_compatible(*grid, params);
  kernel.require_compatible(*grid, params);
}

}  // namespace

SolveReport solve_ground_state(const ProblemParams& params, const GridPtr& grid,
                               const KernelMatrix& kernel,
                               const SolverConfig& config,
                               const std::optional<RadialField>& initial) {
  check_inputs(params, grid, kernel, config);
  if (!config.allow_nonadmissible &&
      classify_exponent(params) != Regime::admissible) {
    const auto [lo, hi] = admissible_p_interval(params);
    throw NonadmissibleExponent(params.p(), lo, hi);
  }
  const SobolevMetric metric(grid, params.gamma());
  DescentResult res = projected_descent(params, kernel, config, metric,
                                        initial_field(params, grid, config, initial));
  switch (res.status) {
    case DescentStatus::converged:
      return std::move(res.report);
    case DescentStatus::diverged_low:
    case DescentStatus::diverged_high:
      throw SolverDiverged("diverged: ||u|| left [1e-8, 1e8] x initial scale");
    case DescentStatus::stalled:
      throw MaxIterations("max iterations: line search stalled at residual " +
                          std::to_string(res.report.residual));
    case DescentStatus::max_iters:
      break;
  }
  throw MaxIterations("max iterations reached with residual " +
                      std::to_string(res.report.residual));
}

namespace {

// Re-places nodes first+1 .. last-1 at equal H^1_gamma arclength along the
// polyline through nodes[first .. last]; the two ends stay put.
void equidistribute(std::vector<RadialField>& nodes, std::size_t first,
                    std::size_t last, const SobolevMetric& metric) {
  if (last <= first + 1) return;
  const std::size_t n = last - first + 1;
  std::vector<double> arc(n, 0.0);
  for (std::size_t k = 1; k < n; ++k)
    arc[k] = arc[k - 1] + metric.distance(nodes[first + k], nodes[first + k - 1]);
  const double total = arc.back();
  if (!(total > 0.0)) return;
  std::vector<RadialField> inner;
  inner.reserve(n - 2);
  std::size_t seg = 0;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double target = total * static_cast<double>(k) / static_cast<double>(n - 1);
    while (seg + 2 < n && arc[seg + 1] < target) ++seg;
    const double len = arc[seg + 1] - arc[seg];
    const double lam = len > 0.0 ? std::clamp((target - arc[seg]) / len, 0.0, 1.0) : 0.0;
    RadialField v = nodes[first + seg];
    v *= (1.0 - lam);
    v.axpy(lam, nodes[first + seg + 1]);
    inner.push_back(std::move(v));
  }
  for (std::size_t k = 1; k + 1 < n; ++k) nodes[first + k] = std::move(inner[k - 1]);
}

}  // namespace

MountainPassResult mountain_pass_solve(const ProblemParams& params,
                                       const GridPtr& grid,
                                       const KernelMatrix& kernel,
                                       const SolverConfig& config, int n_path) {
  if (n_path < 8) throw InvalidArgument("mountain pass needs n_path >= 8");
  check_inputs(params, grid, kernel, config);
  if (!config.allow_nonadmissible &&
      classify_exponent(params) != Regime::admissible) {
    const auto [lo, hi] = admissible_p_interval(params);
    throw NonadmissibleExponent(params.p(), lo, hi);
  }
  const double p = params.p();
  const SobolevMetric metric(grid, params.gamma());

  const RadialField phi = standard_bump(grid, params);
  const EnergyBreakdown ephi = energy(phi, kernel, params);
  const double t_end = 1.5 * ray_zero(ephi.norm_sq(), ephi.D, p);
  if (!(ray_energy(t_end, ephi.norm_sq(), ephi.D, p) < 0.0))
    throw Error("path endpoint not negative");

  MountainPassResult out{SolveReport{phi, {}, 0, 0, 0, 0, 0, false, 0, 0, {}}, {}};
  auto& nodes = out.path.nodes;
  auto& energies = out.path.energies;
  nodes.reserve(n_path);
  for (int k = 0; k < n_path; ++k)
    nodes.push_back((t_end * k / (n_path - 1)) * phi);
  auto refresh = [&] {
    energies.assign(nodes.size(), 0.0);
    for (std::size_t k = 1; k < nodes.size(); ++k)
      energies[k] = energy(nodes[k], kernel, params).E;
  };
  refresh();
  if (!(energies.back() < 0.0)) throw Error("path endpoint not negative");

  constexpr int kRespaceEvery = 10;
  auto highest = [&] {
    std::size_t k = 1;
    for (std::size_t c = 2; c + 1 < nodes.size(); ++c)
      if (energies[c] > energies[k]) k = c;
    return k;
  };
  std::size_t top = highest();
  for (int it = 0;; ++it) {
    const GradientEval ge = energy_and_gradient(nodes[top], kernel, params);
    const double res = weighted_norm(ge.gradient);
    out.report.iters = it;
    if (res <= config.tol || it >= config.max_iters) {
      out.report.converged = res <= config.tol;
      break;
    }
    // Climbing update: descend across the path, ascend along its tangent.
    RadialField tau = nodes[top + 1] - nodes[top - 1];
    const double tn = std::sqrt(metric.norm_sq(tau));
    if (!(tn > 0.0)) break;
    tau *= 1.0 / tn;
    RadialField h = metric.riesz(ge.gradient);
    h.axpy(-2.0 * metric.inner(h, tau), tau);
    const double hn = std::sqrt(metric.norm_sq(h));
    const double spacing = std::min(metric.distance(nodes[top], nodes[top - 1]),
                                    metric.distance(nodes[top], nodes[top + 1]));
    const double eta = std::min(0.5 * config.step0, 0.5 * spacing / hn);
    nodes[top].axpy(-eta, h);
    energies[top] = energy(nodes[top], kernel, params).E;
    if (!std::isfinite(energies[top])) throw SolverDiverged("mountain-pass node left the finite range");

    if ((it + 1) % kRespaceEvery == 0) {
      equidistribute(nodes, 0, top, metric);
      equidistribute(nodes, top, nodes.size() - 1, metric);
      refresh();
      top = highest();
    } else if (energies[top - 1] > energies[top] || energies[top + 1] > energies[top]) {
      top = highest();
    }
  }
  out.report.field = nodes[top];
  const GradientEval ge = energy_and_gradient(nodes[top], kernel, params);
  finish_report(out.report, ge, metric, params);
  out.report.mp_level = *std::max_element(energies.begin() + 1, energies.end() - 1);
  return out;
}

NonexistenceDiagnostic nonexistence_probe(const ProblemParams& params,
                                          const GridPtr& grid,
                                          const KernelMatrix& kernel,
                                          const SolverConfig& config) {
  if (classify_exponent(params) == Regime::admissible)
    throw InvalidArgument("nonexistence probe needs p outside the open window");
  check_inputs(params, grid, kernel, config);
  NonexistenceDiagnostic diag;
  std::tie(diag.c_A, diag.c_B) = pohozaev_coefficients(params);
  const SobolevMetric metric(grid, params.gamma());
  SolverConfig cfg = config;
  cfg.allow_nonadmissible = true;
  const DescentResult res = projected_descent(
      params, kernel, cfg, metric, initial_field(params, grid, cfg, std::nullopt));
  diag.iters = res.report.iters;
  diag.norm_ratio = res.norm_ratio;
  diag.energy = res.report.breakdown.E;
  diag.residual = res.report.residual;
  switch (res.status) {
    case DescentStatus::converged: diag.outcome = ProbeOutcome::converged; break;
    case DescentStatus::diverged_low: diag.outcome = ProbeOutcome::collapse; break;
    case DescentStatus::diverged_high: diag.outcome = ProbeOutcome::escape; break;
    default:
      diag.outcome = res.norm_ratio < 1e-3   ? ProbeOutcome::collapse
                     : res.norm_ratio > 1e3 ? ProbeOutcome::escape
                                            : ProbeOutcome::stagnate;
  }
  return diag;
}

}  // namespace grushin
