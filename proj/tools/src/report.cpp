#include "report.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "grushin/params.hpp"

namespace grushin::cli {

namespace {

// JSON has no inf/nan; undefined entries become null.
Json real(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

const char* init_name(InitKind k) {
  return k == InitKind::gaussian_bump ? "gaussian_bump" : "custom_file";
}

const char* diagonal_name(DiagonalRule d) {
  return d == DiagonalRule::corrected ? "corrected" : "cell_average";
}

}  // namespace

Json params_json(const ProblemParams& params) {
  const ExponentData e = exponent_data(params);
  Json j;
  j["m"] = params.m();
  j["ell"] = params.ell();
  j["gamma"] = params.gamma();
  j["mu"] = params.mu();
  j["p"] = params.p();
  j["N_gamma"] = e.n_gamma;
  j["p_lo"] = e.p_lo;
  j["p_hi"] = e.p_hi;
  j["admissible"] = classify_exponent(params) == Regime::admissible;
  j["c_A"] = e.c_A;
  j["c_B"] = e.c_B;
  return j;
}

Json grid_json(const GridSpec& grid) {
  return Json{{"nr", grid.nr}, {"ns", grid.ns}, {"R", grid.R}, {"S", grid.S}};
}

Json config_json(const RunConfig& cfg) {
  const SolverConfig& s = cfg.solver;
  Json solver{{"tol", s.tol},
              {"max_iters", s.max_iters},
              {"step0", s.step0},
              {"backtrack", s.backtrack},
              {"init", init_name(s.init_kind)},
              {"seed", s.seed},
              {"allow_nonadmissible", s.allow_nonadmissible},
              {"mountain_pass", cfg.mountain_pass},
              {"n_path", cfg.n_path}};
  Json kernel{{"n_theta", cfg.kernel.n_theta},
              {"diagonal", diagonal_name(cfg.kernel.diagonal)},
              {"matrix_free", cfg.kernel.matrix_free}};
  Json audit{{"hls_t", cfg.audit.hls_t_values}, {"k_samples", cfg.audit.k_samples}};
  return Json{{"solver", solver}, {"kernel", kernel}, {"audit", audit}};
}

Json audit_json(const AuditReport& a) {
  Json j;
  j["pohozaev_abs"] = real(a.pohozaev_abs);
  j["pohozaev_rel"] = real(a.pohozaev_rel);
  j["nehari_abs"] = real(a.nehari_abs);
  j["nehari_rel"] = real(a.nehari_rel);
  j["ratio_A_err"] = real(a.ratio_A_err);
  j["ratio_B_err"] = real(a.ratio_B_err);
  j["hls_ratio_spread"] = real(a.hls_ratio_spread);
  j["hls_support_violation"] = a.hls_support_violation;
  j["k_sup"] = real(a.k_sup);
  j["k_oracle_err"] = real(a.k_oracle_err);
  j["sup_norm"] = real(a.sup_norm);
  j["tail_mass_fraction"] = real(a.tail_mass_fraction);
  j["monotone_tail"] = a.monotone_tail;
  j["holder_modulus"] = real(a.holder_modulus);
  j["regularity_theorem_applies"] = a.regularity_theorem_applies;
  return j;
}

Json probe_json(const NonexistenceDiagnostic& d) {
  return Json{{"regime", "nonexistent"},
              {"c_A", real(d.c_A)},
              {"c_B", real(d.c_B)},
              {"outcome", to_string(d.outcome)},
              {"iters", d.iters},
              {"norm_ratio", real(d.norm_ratio)},
              {"energy", real(d.energy)},
              {"residual", real(d.residual)}};
}

Json solve_report_json(const RunConfig& cfg, const SolveReport& r,
                       const std::optional<MountainPassSummary>& mp,
                       double wall_time_seconds) {
  const EnergyBreakdown& e = r.breakdown;
  Json j;
  j["params"] = params_json(cfg.problem);
  j["grid"] = grid_json(cfg.grid);
  j["config"] = config_json(cfg);
  j["A"] = real(e.A);
  j["B"] = real(e.B);
  j["D"] = real(e.D);
  j["E"] = real(e.E);
  j["residual"] = real(r.residual);
  j["dual_residual"] = real(r.dual_residual);
  j["nehari_residual"] = real(r.nehari_residual);
  j["pohozaev_residual"] = real(r.pohozaev_residual);
  j["pohozaev_rel"] = e.D > 0.0 ? real(std::abs(r.pohozaev_residual) / e.D) : Json(nullptr);
  j["a_over_d"] = e.D > 0.0 ? real(e.A / e.D) : Json(nullptr);
  j["b_over_d"] = e.D > 0.0 ? real(e.B / e.D) : Json(nullptr);
  j["negative_part"] = real(r.negative_part);
  j["iters"] = r.iters;
  j["converged"] = r.converged;
  if (mp) {
    j["mountain_pass"] = Json{{"level", real(mp->level)},
                              {"converged", mp->converged},
                              {"iters", mp->iters},
                              {"rel_diff", real(mp->rel_diff)}};
  }
  j["wall_time_seconds"] = wall_time_seconds;
  return j;
}

void write_json(const std::filesystem::path& path, const Json& doc) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << doc.dump(2) << '\n';
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace grushin::cli
