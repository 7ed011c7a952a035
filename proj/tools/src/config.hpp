#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "grushin/audit.hpp"
#include "grushin/nonlocal.hpp"
#include "grushin/params.hpp"
#include "grushin/solver.hpp"

namespace grushin::cli {

/// Parse or validation failure at a position in the config text. Line and
/// column are 1-based; 0 means the whole file.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string file, int line, int column, const std::string& msg);
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_, column_;
};

/// Bare TOML subset: [section] headers, key = value lines, '#' comments.
/// Values are numbers, true/false, "strings" or [number, ...] arrays.
struct ConfigValue {
  std::variant<double, bool, std::string, std::vector<double>> data;
  std::string text;  // source spelling
  int line = 0, column = 0;
};

class ConfigDocument {
 public:
  static ConfigDocument parse(const std::string& text, const std::string& file);
  static ConfigDocument load(const std::filesystem::path& path);

  const std::string& file() const noexcept { return file_; }
  /// "section.key" -> value.
  const std::map<std::string, ConfigValue>& values() const noexcept { return values_; }
  /// Line of a section header, 0 if absent.
  int section_line(const std::string& section) const;

 private:
  std::string file_;
  std::map<std::string, ConfigValue> values_;
  std::map<std::string, int> sections_;
};

struct GridSpec {
  int nr = 48, ns = 48;
  double R = 12.0, S = 12.0;
};

struct OutputSpec {
  std::filesystem::path directory = "out";
  bool emit_field = true;
  bool emit_svg = true;
};

struct RunConfig {
  ProblemParams problem{1, 2, 1.0, 1.0, 2.0};
  GridSpec grid;
  SolverConfig solver;
  bool mountain_pass = true;
  int n_path = 12;
  KernelOptions kernel;
  std::optional<std::filesystem::path> kernel_cache;
  AuditOptions audit;
  OutputSpec outputs;
  std::string source_file;
};

/// Reads and validates a run configuration. Every parameter check that does
/// not need a kernel happens here; problems raise ConfigError.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig run_config_from(const ConfigDocument& doc);

}  // namespace grushin::cli
