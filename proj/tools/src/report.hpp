#pragma once

#include <filesystem>
#include <json.hpp>
#include <optional>

#include "config.hpp"
#include "grushin/audit.hpp"
#include "grushin/solver.hpp"

namespace grushin::cli {

using Json = nlohmann::ordered_json;

Json params_json(const ProblemParams& params);
Json grid_json(const GridSpec& grid);
/// Numerical settings only; paths are left out so that reports do not depend
/// on where inputs live.
Json config_json(const RunConfig& cfg);
Json audit_json(const AuditReport& audit);
Json probe_json(const NonexistenceDiagnostic& probe);

struct MountainPassSummary {
  double level = 0.0;
  bool converged = false;
  int iters = 0;
  double rel_diff = 0.0;  // |level - E| / |E|
};

Json solve_report_json(const RunConfig& cfg, const SolveReport& report,
                       const std::optional<MountainPassSummary>& mp,
                       double wall_time_seconds);

/// Two-space indented, trailing newline.
void write_json(const std::filesystem::path& path, const Json& doc);

}  // namespace grushin::cli
