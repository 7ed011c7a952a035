#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace grushin::cli {

struct Series {
  std::string name;
  std::vector<double> x, y;
};

/// Minimal line plot: axes with min/max tick labels, one polyline per
/// series, legend in the upper right. Non-finite points are skipped.
void write_line_plot(const std::filesystem::path& path, const std::string& title,
                     const std::string& xlabel, const std::string& ylabel,
                     const std::vector<Series>& series);

}  // namespace grushin::cli
