#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "grushin/grid.hpp"
#include "grushin/params.hpp"

namespace grushin {

/// Field CSV, version 1:
///
///   # grushin-field v1
///   # m=1,ell=2,gamma=1,mu=1,p=2,nr=48,ns=48,R=12,S=12
///   r,s,value            (nr * ns rows, r outer, 17 significant digits)
///
/// Reals are printed with %.17g so that reading reproduces every double
/// bit-exactly.
struct FieldHeader {
  int m = 0;
  int ell = 0;
  double gamma = 0.0;
  double mu = 0.0;
  double p = 0.0;
  int nr = 0;
  int ns = 0;
  double R = 0.0;
  double S = 0.0;
};

void write_field_csv(std::ostream& os, const RadialField& u,
                     const ProblemParams& params);
void write_field_csv(const std::filesystem::path& path, const RadialField& u,
                     const ProblemParams& params);

struct LoadedField {
  FieldHeader header;
  RadialField field;
};

/// Parses a field file. If `expected_params` / `expected_grid` are present,
/// the header is compared key by key in header order and the first
/// disagreement is raised as FormatError naming that key. When no grid is
/// given a fresh one is built from the header.
LoadedField read_field_csv(std::istream& is,
                           const std::optional<ProblemParams>& expected_params,
                           const GridPtr& expected_grid);
LoadedField read_field_csv(const std::filesystem::path& path,
                           const std::optional<ProblemParams>& expected_params,
                           const GridPtr& expected_grid);

}  // namespace grushin
