#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <vector>

#include "config.hpp"
#include "grushin/audit.hpp"
#include "grushin/error.hpp"
#include "grushin/field_io.hpp"
#include "grushin/parallel.hpp"
#include "grushin/solver.hpp"
#include "grushin/variational.hpp"
#include "report.hpp"
#include "svg.hpp"

namespace grushin::cli {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// Maps library and config failures onto exit codes with one diagnostic line.
template <class F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what();
    if (!e.key().empty()) std::cerr << " [key: " << e.key() << "]";
    std::cerr << '\n';
    return kConfigError;
  } catch (const NonadmissibleExponent& e) {
    std::cerr << "error: " << e.what()
              << "; pass --allow-nonadmissible to run the descent anyway\n";
    return kSolverError;
  } catch (const KernelMemoryError& e) {
    std::cerr << "error: " << e.what() << " (set [kernel] matrix_free = true)\n";
    return kSolverError;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSolverError;
  }
}

GridPtr grid_for(const RunConfig& cfg, const ProblemParams& params) {
  return build_grid(cfg.grid.nr, cfg.grid.ns, cfg.grid.R, cfg.grid.S, params);
}

// Loads the cache when it exists, otherwise builds and, if a cache path is
// configured, saves.
KernelMatrix acquire_kernel(const RunConfig& cfg, const GridPtr& grid,
                            const ProblemParams& params, bool use_cache,
                            std::ostream& log) {
  if (use_cache && cfg.kernel_cache && fs::exists(*cfg.kernel_cache)) {
    log << "kernel: loading " << cfg.kernel_cache->string() << '\n';
    return load_kernel(*cfg.kernel_cache, grid, params, cfg.kernel.n_theta);
  }
  const auto t0 = Clock::now();
  KernelMatrix k = KernelMatrix::build(grid, params, cfg.kernel);
  log << "kernel: built " << grid->nr() << "x" << grid->ns() << " in "
      << fmt(seconds_since(t0), "%.2f") << " s\n";
  if (use_cache && cfg.kernel_cache && k.dense()) {
    if (cfg.kernel_cache->has_parent_path()) fs::create_directories(cfg.kernel_cache->parent_path());
    save_kernel(*cfg.kernel_cache, k);
    log << "kernel: cached to " << cfg.kernel_cache->string() << '\n';
  }
  return k;
}

std::optional<RadialField> initial_guess(const RunConfig& cfg, const GridPtr& grid) {
  if (cfg.solver.init_kind != InitKind::custom_file) return std::nullopt;
  return read_field_csv(cfg.solver.init_file, std::nullopt, grid).field;
}

// Radial slices of u and K along both axes, each scaled by its maximum.
void write_profile_svg(const fs::path& path, const RadialField& u,
                       const KernelMatrix& kernel, const ProblemParams& params) {
  const RadialGrid& g = u.grid();
  const RadialField k = convolve(kernel, abs_pow(u, params.p()));
  double umax = 0.0, kmax = 0.0;
  for (std::size_t a = 0; a < u.size(); ++a) {
    umax = std::max(umax, std::abs(u[a]));
    kmax = std::max(kmax, std::abs(k[a]));
  }
  if (umax == 0.0) umax = 1.0;
  if (kmax == 0.0) kmax = 1.0;
  Series ur{"u(r, s0) / max u", {}, {}}, us{"u(r0, s) / max u", {}, {}};
  Series kr{"K(r, s0) / max K", {}, {}}, ks{"K(r0, s) / max K", {}, {}};
  for (int i = 0; i < g.nr(); ++i) {
    ur.x.push_back(g.r(i));
    ur.y.push_back(u.at(i, 0) / umax);
    kr.x.push_back(g.r(i));
    kr.y.push_back(k.at(i, 0) / kmax);
  }
  for (int j = 0; j < g.ns(); ++j) {
    us.x.push_back(g.s(j));
    us.y.push_back(u.at(0, j) / umax);
    ks.x.push_back(g.s(j));
    ks.y.push_back(k.at(0, j) / kmax);
  }
  write_line_plot(path, "radial slices", "r or s", "scaled value", {ur, us, kr, ks});
}

struct RunOutputs {
  SolveReport solve;
  Json report;
  Json audit;
};

// Solve, optional mountain-pass cross-check, audit. No files written.
RunOutputs solve_and_audit(const RunConfig& cfg, const ProblemParams& params,
                           const GridPtr& grid, const KernelMatrix& kernel,
                           const std::optional<RadialField>& initial,
                           bool mountain_pass) {
  RunConfig local = cfg;
  local.problem = params;
  const auto t0 = Clock::now();
  SolveReport report = solve_ground_state(params, grid, kernel, local.solver, initial);
  const double wall = seconds_since(t0);
  std::optional<MountainPassSummary> mp;
  if (mountain_pass && classify_exponent(params) == Regime::admissible) {
    const MountainPassResult m =
        mountain_pass_solve(params, grid, kernel, local.solver, local.n_path);
    const double e = report.breakdown.E;
    mp = MountainPassSummary{m.report.mp_level, m.report.converged, m.report.iters,
                             std::abs(m.report.mp_level - e) / std::abs(e)};
  }
  const AuditReport audit = run_audit(report.field, kernel, params, local.audit);
  Json rj = solve_report_json(local, report, mp, wall);
  return RunOutputs{std::move(report), std::move(rj), audit_json(audit)};
}

void write_run_files(const fs::path& dir, const RunConfig& cfg, const RunOutputs& out,
                     const KernelMatrix& kernel, const ProblemParams& params) {
  const SolveReport& report = out.solve;
  fs::create_directories(dir);
  write_json(dir / "report.json", out.report);
  write_json(dir / "audit.json", out.audit);
  if (cfg.outputs.emit_field) write_field_csv(dir / "field.csv", report.field, params);
  if (cfg.outputs.emit_svg) write_profile_svg(dir / "profile.svg", report.field, kernel, params);
}

struct RayCheck {
  double t_star = 0.0, e_star = 0.0, t1 = 0.0;
  bool ok = false;
};

// Ray geometry of the standard bump: E > 0 at the ray maximum and E < 0
// at sampled t beyond the zero t1.
RayCheck ray_check(const ProblemParams& params, const GridPtr& grid, const KernelMatrix& kernel) {
  const RadialField phi = standard_bump(grid, params);
  const EnergyBreakdown e = energy(phi, kernel, params);
  RayCheck rc;
  rc.t_star = nehari_scaling(e.norm_sq(), e.D, params.p());
  rc.t1 = ray_zero(e.norm_sq(), e.D, params.p());
  rc.e_star = ray_energy(rc.t_star, e.norm_sq(), e.D, params.p());
  std::vector<double> ts;
  for (double f : {1.001, 1.1, 1.5, 2.0, 4.0, 10.0}) ts.push_back(f * rc.t1);
  rc.ok = rc.e_star > 0.0;
  for (const auto& [t, et] : ray_profile(phi, kernel, params, ts)) rc.ok = rc.ok && et < 0.0;
  return rc;
}

}  // namespace

int cmd_solve(const SolveArgs& args) {
  return guarded([&] {
    RunConfig cfg = load_run_config(args.config);
    if (args.out) cfg.outputs.directory = *args.out;
    if (args.allow_nonadmissible) cfg.solver.allow_nonadmissible = true;
    const ProblemParams& params = cfg.problem;
    const auto [lo, hi] = admissible_p_interval(params);
    std::cout << "admissible interval for p: " << format_interval(lo, hi) << '\n';
    if (!cfg.solver.allow_nonadmissible && classify_exponent(params) != Regime::admissible)
      throw NonadmissibleExponent(params.p(), lo, hi);
    const GridPtr grid = grid_for(cfg, params);
    const std::optional<RadialField> initial = initial_guess(cfg, grid);

    const KernelMatrix kernel = acquire_kernel(cfg, grid, params, true, std::cout);
    const RunOutputs out =
        solve_and_audit(cfg, params, grid, kernel, initial, cfg.mountain_pass);
    write_run_files(cfg.outputs.directory, cfg, out, kernel, params);
    const SolveReport& report = out.solve;

    const EnergyBreakdown& e = report.breakdown;
    std::cout << "converged in " << report.iters << " iterations, residual "
              << fmt(report.residual, "%.3e") << '\n'
              << "E = " << fmt(e.E, "%.10g") << "  A = " << fmt(e.A, "%.10g")
              << "  B = " << fmt(e.B, "%.10g") << "  D = " << fmt(e.D, "%.10g") << '\n'
              << "A/D = " << fmt(e.A / e.D) << "  B/D = " << fmt(e.B / e.D)
              << "  pohozaev_rel = " << fmt(out.audit["pohozaev_rel"].get<double>(), "%.3e")
              << '\n';
    if (out.report.contains("mountain_pass"))
      std::cout << "mountain pass level " << fmt(out.report["mountain_pass"]["level"].get<double>(), "%.10g")
                << " (rel. diff " << fmt(out.report["mountain_pass"]["rel_diff"].get<double>(), "%.3e")
                << ")\n";
    std::cout << "wrote " << cfg.outputs.directory.string() << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_sweep(const SweepArgs& args) {
  return guarded([&] {
    if (args.param != "p" && args.param != "mu" && args.param != "gamma") {
      std::cerr << "error: --param must be p, mu or gamma (got '" << args.param << "')\n";
      return static_cast<int>(kConfigError);
    }
    if (args.steps < 2) {
      std::cerr << "error: --steps must be >= 2\n";
      return static_cast<int>(kConfigError);
    }
    const RunConfig cfg = load_run_config(args.config);

    struct Point {
      double value = 0.0;
      std::optional<ProblemParams> params;
      bool admissible = false;
      std::string dir;
      std::optional<EnergyBreakdown> breakdown;
      double pohozaev_rel = NAN;
      bool converged = false;
      std::optional<RayCheck> ray;
      std::optional<NonexistenceDiagnostic> probe;
      double e_alt = NAN;
      bool init_dependent = false;
      std::string error;
    };
    std::vector<Point> points(static_cast<std::size_t>(args.steps));
    for (int k = 0; k < args.steps; ++k) {
      Point& pt = points[static_cast<std::size_t>(k)];
      const double t = static_cast<double>(k) / (args.steps - 1);
      pt.value = k + 1 == args.steps ? args.to : args.from + t * (args.to - args.from);
      try {
        pt.params = args.param == "p"    ? cfg.problem.with_p(pt.value)
                    : args.param == "mu" ? cfg.problem.with_mu(pt.value)
                                         : cfg.problem.with_gamma(pt.value);
      } catch (const InvalidArgument& e) {
        std::cerr << "error: " << args.param << " = " << pt.value << ": " << e.what() << '\n';
        return static_cast<int>(kConfigError);
      }
      pt.admissible = classify_exponent(*pt.params) == Regime::admissible;
      char name[96];
      std::snprintf(name, sizeof name, "%03d_%s_%.6g", k, args.param.c_str(), pt.value);
      pt.dir = name;
    }

    const fs::path root = cfg.outputs.directory;
    fs::create_directories(root);
    // The kernel ignores p, so a p-sweep shares one grid and kernel.
    std::optional<KernelMatrix> shared;
    GridPtr shared_grid;
    if (args.param == "p") {
      shared_grid = grid_for(cfg, cfg.problem);
      shared.emplace(acquire_kernel(cfg, shared_grid, cfg.problem, true, std::cout));
    }
    std::mutex log_mutex;

    auto run_point = [&](std::size_t idx) {
      Point& pt = points[idx];
      const ProblemParams& params = *pt.params;
      try {
        std::optional<KernelMatrix> own;
        GridPtr grid = shared_grid;
        if (!shared) {
          grid = grid_for(cfg, params);
          std::ostringstream log;
          own.emplace(acquire_kernel(cfg, grid, params, false, log));
        }
        const KernelMatrix& kernel = shared ? *shared : *own;
        const fs::path dir = root / pt.dir;
        fs::create_directories(dir);
        if (!pt.admissible) {
          pt.probe = nonexistence_probe(params, grid, kernel, cfg.solver);
          Json doc{{"params", params_json(params)}, {"grid", grid_json(cfg.grid)},
                   {"probe", probe_json(*pt.probe)}};
          write_json(dir / "probe.json", doc);
          std::lock_guard lock(log_mutex);
          std::cout << args.param << " = " << fmt(pt.value) << ": nonexistent regime, probe "
                    << to_string(pt.probe->outcome) << '\n';
          return;
        }
        pt.ray = ray_check(params, grid, kernel);
        RunOutputs out = solve_and_audit(cfg, params, grid, kernel, std::nullopt, false);
        // Second start from a wider bump; the lower level is reported.
        try {
          const RadialField wide = dilate_field(standard_bump(grid, params), 1.5, params);
          RunOutputs alt = solve_and_audit(cfg, params, grid, kernel, wide, false);
          pt.e_alt = alt.solve.breakdown.E;
          const double e0 = out.solve.breakdown.E;
          pt.init_dependent = std::abs(pt.e_alt - e0) > 1e-4 * std::abs(e0);
          if (pt.e_alt < e0 && pt.init_dependent) std::swap(out, alt);
        } catch (const Error&) {
          pt.init_dependent = true;
        }
        out.report["initialization_dependent"] = pt.init_dependent;
        write_run_files(dir, cfg, out, kernel, params);
        pt.breakdown = out.solve.breakdown;
        pt.pohozaev_rel = out.audit["pohozaev_rel"].get<double>();
        pt.converged = out.solve.converged;
      } catch (const std::exception& e) {
        pt.error = e.what();
      }
      std::lock_guard lock(log_mutex);
      std::cout << args.param << " = " << fmt(pt.value) << ": "
                << (pt.error.empty() ? (pt.converged ? "converged" : "not converged") : pt.error)
                << '\n';
    };
    if (points.size() >= worker_count()) {
      parallel_for(0, points.size(), run_point);
    } else {
      for (std::size_t k = 0; k < points.size(); ++k) run_point(k);
    }

    std::ofstream csv(root / "summary.csv");
    csv << "value,E,A,B,D,pohozaev_rel,converged,regime,ray_max_E,ray_t1,ray_ok,"
           "init_dependent,probe_outcome,dir\n";
    csv.precision(17);
    bool all_ok = true;
    for (const Point& pt : points) {
      csv << fmt(pt.value, "%.12g") << ',';
      if (pt.breakdown) {
        csv << pt.breakdown->E << ',' << pt.breakdown->A << ',' << pt.breakdown->B << ','
            << pt.breakdown->D << ',' << pt.pohozaev_rel << ',';
      } else if (pt.probe) {
        csv << pt.probe->energy << ",,,,,";
      } else {
        csv << ",,,,,";
      }
      csv << (pt.converged ? "true" : "false") << ','
          << (pt.admissible ? "admissible" : "nonexistent regime") << ',';
      if (pt.ray) {
        csv << pt.ray->e_star << ',' << pt.ray->t1 << ',' << (pt.ray->ok ? "true" : "false");
      } else {
        csv << ",,";
      }
      csv << ',' << (pt.admissible ? (pt.init_dependent ? "true" : "false") : "") << ','
          << (pt.probe ? to_string(pt.probe->outcome) : "") << ',' << pt.dir << '\n';
      if (pt.admissible && !pt.converged) all_ok = false;
      if (!pt.error.empty()) all_ok = false;
    }
    std::cout << "wrote " << (root / "summary.csv").string() << '\n';
    return static_cast<int>(all_ok ? kOk : kSolverError);
  });
}

int cmd_verify(const VerifyArgs& args) {
  return guarded([&] {
    const RunConfig cfg = load_run_config(args.config);
    const ProblemParams& params = cfg.problem;
    const GridPtr grid = grid_for(cfg, params);
    const LoadedField loaded = read_field_csv(args.field, params, grid);
    const KernelMatrix kernel = acquire_kernel(cfg, grid, params, true, std::cerr);
    const AuditReport audit = run_audit(loaded.field, kernel, params, cfg.audit);
    const EnergyBreakdown e = energy(loaded.field, kernel, params);
    Json doc{{"params", params_json(params)},
             {"grid", grid_json(cfg.grid)},
             {"A", e.A},
             {"B", e.B},
             {"D", e.D},
             {"E", e.E},
             {"audit", audit_json(audit)}};
    fs::create_directories(cfg.outputs.directory);
    write_json(cfg.outputs.directory / "verify.json", doc);
    std::cout << doc.dump(2) << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_kernel(const KernelArgs& args) {
  return guarded([&] {
    const RunConfig cfg = load_run_config(args.config);
    if (cfg.kernel.matrix_free) {
      std::cerr << "error: matrix-free kernels keep no entries to cache; set [kernel] "
                   "matrix_free = false\n";
      return static_cast<int>(kConfigError);
    }
    const GridPtr grid = grid_for(cfg, cfg.problem);
    const auto t0 = Clock::now();
    const KernelMatrix kernel = KernelMatrix::build(grid, cfg.problem, cfg.kernel);
    const double build = seconds_since(t0);
    if (args.out.has_parent_path()) fs::create_directories(args.out.parent_path());
    save_kernel(args.out, kernel);
    std::cout << "kernel " << grid->nr() << "x" << grid->ns() << ", n_theta "
              << cfg.kernel.n_theta << ", built in " << fmt(build, "%.2f") << " s, wrote "
              << args.out.string() << " (" << fs::file_size(args.out) << " bytes)\n";
    return static_cast<int>(kOk);
  });
}

int cmd_profile(const ProfileArgs& args) {
  return guarded([&] {
    if (!(args.tmax > 0.0) || !std::isfinite(args.tmax)) {
      std::cerr << "error: --tmax must be positive\n";
      return static_cast<int>(kConfigError);
    }
    if (args.steps < 2) {
      std::cerr << "error: --steps must be >= 2\n";
      return static_cast<int>(kConfigError);
    }
    const RunConfig cfg = load_run_config(args.config);
    const ProblemParams& params = cfg.problem;
    const GridPtr grid = grid_for(cfg, params);
    const KernelMatrix kernel = acquire_kernel(cfg, grid, params, true, std::cerr);
    std::vector<double> ts;
    for (int k = 0; k < args.steps; ++k)
      ts.push_back(args.tmax * static_cast<double>(k) / (args.steps - 1));
    const RadialField phi = standard_bump(grid, params);
    const auto prof = ray_profile(phi, kernel, params, ts);
    const RayCheck rc = ray_check(params, grid, kernel);

    fs::create_directories(cfg.outputs.directory);
    std::ofstream csv(cfg.outputs.directory / "ray_profile.csv");
    csv << "t,E\n";
    csv.precision(17);
    Series s{"E(t phi)", {}, {}};
    for (const auto& [t, e] : prof) {
      csv << t << ',' << e << '\n';
      s.x.push_back(t);
      s.y.push_back(e);
    }
    if (cfg.outputs.emit_svg)
      write_line_plot(cfg.outputs.directory / "ray_profile.svg", "ray profile of the standard bump",
                      "t", "E(t phi)", {s});
    std::cout << "t* = " << fmt(rc.t_star) << "  E(t* phi) = " << fmt(rc.e_star, "%.8g")
              << "  t1 = " << fmt(rc.t1) << "  negative beyond t1: " << (rc.ok ? "yes" : "no")
              << '\n'
              << "wrote " << (cfg.outputs.directory / "ray_profile.csv").string() << '\n';
    return static_cast<int>(kOk);
  });
}

}  // namespace grushin::cli
