#include <CLI11.hpp>

#include "commands.hpp"

using namespace grushin::cli;

int main(int argc, char** argv) {
  CLI::App app{"Grushin-Choquard ground states: solve, sweep, verify"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Compute a ground state and audit it");
  s->add_option("--config", solve.config, "Run configuration")->required();
  s->add_option("--out", solve.out, "Output directory (overrides [outputs] directory)");
  s->add_flag("--allow-nonadmissible", solve.allow_nonadmissible,
              "Run even when p lies outside the existence window");

  SweepArgs sweep;
  auto* w = app.add_subcommand("sweep", "Solve over a range of one parameter");
  w->add_option("--config", sweep.config, "Run configuration")->required();
  w->add_option("--param", sweep.param, "p, mu or gamma")->required();
  w->add_option("--from", sweep.from, "First value")->required();
  w->add_option("--to", sweep.to, "Last value")->required();
  w->add_option("--steps", sweep.steps, "Number of values, >= 2")->required();

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Audit a stored field");
  v->add_option("--field", verify.field, "Field CSV")->required();
  v->add_option("--config", verify.config, "Run configuration")->required();

  KernelArgs kernel;
  auto* k = app.add_subcommand("kernel", "Build and cache the kernel matrix");
  k->add_option("--config", kernel.config, "Run configuration")->required();
  k->add_option("--out", kernel.out, "Cache file to write")->required();

  ProfileArgs profile;
  auto* p = app.add_subcommand("profile", "Ray energy E(t phi) of the standard bump");
  p->add_option("--config", profile.config, "Run configuration")->required();
  p->add_option("--tmax", profile.tmax, "Largest t")->required();
  p->add_option("--steps", profile.steps, "Number of t values, >= 2")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  if (s->parsed()) return cmd_solve(solve);
  if (w->parsed()) return cmd_sweep(sweep);
  if (v->parsed()) return cmd_verify(verify);
  if (k->parsed()) return cmd_kernel(kernel);
  return cmd_profile(profile);
}
