#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "grushin/grid.hpp"
#include "grushin/nonlocal.hpp"
#include "grushin/params.hpp"
#include "grushin/variational.hpp"

namespace grushin {

enum class InitKind { gaussian_bump, custom_file };

struct SolverConfig {
  double tol = 1e-6;
  int max_iters = 20000;
  double step0 = 1.0;
  double backtrack = 0.5;
  InitKind init_kind = InitKind::gaussian_bump;
  std::string init_file;  // used with InitKind::custom_file
  std::uint64_t seed = 0;
  /// Permits p outside the open existence window.
  bool allow_nonadmissible = false;
  /// Sufficient-decrease constant of the Armijo test.
  double armijo = 1e-4;

  /// Throws InvalidArgument on tol <= 0, max_iters < 1 or backtrack outside (0, 1).
  void validate() const;
};

struct SolveReport {
  RadialField field;
  EnergyBreakdown breakdown;
  double residual = 0.0;           // weighted-L2 norm of the strong residual
  double dual_residual = 0.0;      // H^1_gamma-dual norm of the same residual
  double nehari_residual = 0.0;    // ||u||^2 - D
  double pohozaev_residual = 0.0;  // (N-2)/2 A + N/2 B - (2N-mu)/(2p) D
  int iters = 0;
  bool converged = false;
  double mp_level = 0.0;           // energy of the returned critical point
  double negative_part = 0.0;      // ||min(u, 0)||_w / ||u||_w
  /// Nehari-restricted energy E(P u) at the start of each iteration; the
  /// Armijo test makes it non-increasing.
  std::vector<double> energy_history;
};

/// exp(-(r^2 + s^2 / (1 + gamma)^2)): positive bump with the anisotropy of
/// the dilations.
RadialField standard_bump(const GridPtr& grid, const ProblemParams& params);

/// Ground state by Nehari-projected descent: u <- P(u - eta h), where h is
/// the H^1_gamma Riesz representative of the residual, i.e.
/// (-Delta_gamma + I) h = g, P rescales onto the Nehari set and eta is found
/// by Armijo backtracking on E o P. `initial` overrides the standard bump.
///
/// Throws NonadmissibleExponent (unless config.allow_nonadmissible),
/// SolverDiverged when ||u||_gamma leaves [1e-8, 1e8] times its initial
/// value, and MaxIterations when the budget runs out.
SolveReport solve_ground_state(const ProblemParams& params, const GridPtr& grid,
                               const KernelMatrix& kernel,
                               const SolverConfig& config,
                               const std::optional<RadialField>& initial = {});

struct MountainPassPath {
  std::vector<RadialField> nodes;  // nodes.front() == 0, E(nodes.back()) < 0
  std::vector<double> energies;
};

struct MountainPassResult {
  SolveReport report;
  MountainPassPath path;
};

/// Discrete min-max over paths from 0 to t_e phi, phi the standard bump and
/// t_e = 1.5 times its ray zero. The highest interior node takes climbing
/// steps (the H^1_gamma gradient with its component along the path tangent
/// reversed), capped at half the distance to its neighbours; every tenth
/// step the two halves of the polyline on either side of it are re-spaced
/// to equal H^1_gamma arclength. report.mp_level is the path max. Needs
/// n_path >= 8. Does not throw on an exhausted budget: the report carries
/// converged = false.
MountainPassResult mountain_pass_solve(const ProblemParams& params,
                                       const GridPtr& grid,
                                       const KernelMatrix& kernel,
                                       const SolverConfig& config, int n_path);

enum class ProbeOutcome { collapse, escape, stagnate, converged };

const char* to_string(ProbeOutcome outcome);

struct NonexistenceDiagnostic {
  double c_A = 0.0;
  double c_B = 0.0;
  ProbeOutcome outcome = ProbeOutcome::stagnate;
  int iters = 0;
  double norm_ratio = 0.0;  // final ||u||_gamma / initial ||u||_gamma
  double energy = 0.0;
  double residual = 0.0;
};

/// Runs the projected descent outside the existence window and records what
/// the iterates do. Requires p outside the open window (endpoints included).
NonexistenceDiagnostic nonexistence_probe(const ProblemParams& params,
                                          const GridPtr& grid,
                                          const KernelMatrix& kernel,
                                          const SolverConfig& config);

}  // namespace grushin
