#include "grushin/field_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "grushin/error.hpp"

namespace grushin {

namespace {

constexpr const char* kMagic = "# grushin-field v1";

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& text, const std::string& key) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw FormatError(key, "unparsable value for '" + key + "': " + text);
  if (!std::isfinite(v))
    throw FormatError(key, "non-finite value for '" + key + "': " + text);
  return v;
}

int parse_int(const std::string& text, const std::string& key) {
  int v = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw FormatError(key, "unparsable integer for '" + key + "': " + text);
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

const char* const kKeys[] = {"m", "ell", "gamma", "mu", "p",
                             "nr", "ns", "R", "S"};

FieldHeader parse_header(const std::string& line) {
  if (line.rfind("# ", 0) != 0)
    throw FormatError("", "second header line must start with '# '");
  const auto parts = split(line.substr(2), ',');
  if (parts.size() != 9)
    throw FormatError("", "parameter header must hold 9 key=value pairs");
  std::string values[9];
  for (int k = 0; k < 9; ++k) {
    const auto eq = parts[k].find('=');
    const std::string key = parts[k].substr(0, eq);
    if (eq == std::string::npos || key != kKeys[k])
      throw FormatError(kKeys[k], std::string("expected header key '") +
                                      kKeys[k] + "'");
    values[k] = parts[k].substr(eq + 1);
  }
  FieldHeader h;
  h.m = parse_int(values[0], "m");
  h.ell = parse_int(values[1], "ell");
  h.gamma = parse_double(values[2], "gamma");
  h.mu = parse_double(values[3], "mu");
  h.p = parse_double(values[4], "p");
  h.nr = parse_int(values[5], "nr");
  h.ns = parse_int(values[6], "ns");
  h.R = parse_double(values[7], "R");
  h.S = parse_double(values[8], "S");
  return h;
}

void check_header(const FieldHeader& h,
                  const std::optional<ProblemParams>& params,
                  const GridPtr& grid) {
  auto fail = [](const char* key, const std::string& got,
                 const std::string& want) {
    throw FormatError(key, std::string("header mismatch on '") + key +
                               "': file has " + got + ", expected " + want);
  };
  if (params) {
    if (h.m != params->m())
      fail("m", std::to_string(h.m), std::to_string(params->m()));
    if (h.ell != params->ell())
      fail("ell", std::to_string(h.ell), std::to_string(params->ell()));
    if (h.gamma != params->gamma())
      fail("gamma", fmt17(h.gamma), fmt17(params->gamma()));
    if (h.mu != params->mu()) fail("mu", fmt17(h.mu), fmt17(params->mu()));
    if (h.p != params->p()) fail("p", fmt17(h.p), fmt17(params->p()));
  }
  if (grid) {
    if (h.nr != grid->nr())
      fail("nr", std::to_string(h.nr), std::to_string(grid->nr()));
    if (h.ns != grid->ns())
      fail("ns", std::to_string(h.ns), std::to_string(grid->ns()));
    if (h.R != grid->R()) fail("R", fmt17(h.R), fmt17(grid->R()));
    if (h.S != grid->S()) fail("S", fmt17(h.S), fmt17(grid->S()));
  }
}

}  // namespace

void write_field_csv(std::ostream& os, const RadialField& u,
                     const ProblemParams& params) {
  const RadialGrid& g = u.grid();
  os << kMagic << '\n';
  os << "# m=" << params.m() << ",ell=" << params.ell()
     << ",gamma=" << fmt17(params.gamma()) << ",mu=" << fmt17(params.mu())
     << ",p=" << fmt17(params.p()) << ",nr=" << g.nr() << ",ns=" << g.ns()
     << ",R=" << fmt17(g.R()) << ",S=" << fmt17(g.S()) << '\n';
  for (int i = 0; i < g.nr(); ++i)
    for (int j = 0; j < g.ns(); ++j)
      os << fmt17(g.r(i)) << ',' << fmt17(g.s(j)) << ',' << fmt17(u.at(i, j))
         << '\n';
}

void write_field_csv(const std::filesystem::path& path, const RadialField& u,
                     const ProblemParams& params) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open field file for writing: " + path.string());
  write_field_csv(os, u, params);
  if (!os) throw Error("failed writing field file: " + path.string());
}

LoadedField read_field_csv(std::istream& is,
                           const std::optional<ProblemParams>& expected_params,
                           const GridPtr& expected_grid) {
  std::string line;
  if (!std::getline(is, line) || split(line, '\n')[0] != kMagic)
    throw FormatError("", "missing '# grushin-field v1' header");
  if (!std::getline(is, line)) throw FormatError("", "missing parameter header");
  const FieldHeader h = parse_header(line);
  check_header(h, expected_params, expected_grid);

  GridPtr grid = expected_grid;
  if (!grid) {
    try {
      grid = std::make_shared<const RadialGrid>(h.nr, h.ns, h.R, h.S, h.m,
                                                h.ell);
    } catch (const InvalidArgument& e) {
      throw FormatError("", std::string("invalid grid in header: ") + e.what());
    }
  }
  std::vector<double> values(grid->size());
  for (int i = 0; i < grid->nr(); ++i) {
    for (int j = 0; j < grid->ns(); ++j) {
      if (!std::getline(is, line))
        throw FormatError("", "truncated field file");
      const auto cols = split(line, ',');
      if (cols.size() != 3) throw FormatError("", "row must hold r,s,value");
      const double r = parse_double(cols[0], "r");
      const double s = parse_double(cols[1], "s");
      if (r != grid->r(i) || s != grid->s(j))
        throw FormatError("", "row coordinates do not match grid nodes");
      values[grid->index(i, j)] = parse_double(cols[2], "value");
    }
  }
  try {
    return {h, RadialField(grid, std::move(values))};
  } catch (const InvalidArgument& e) {
    throw FormatError("", e.what());
  }
}

LoadedField read_field_csv(const std::filesystem::path& path,
                           const std::optional<ProblemParams>& expected_params,
                           const GridPtr& expected_grid) {
  std::ifstream is(path);
  if (!is) throw FormatError("", "cannot open field file: " + path.string());
  return read_field_csv(is, expected_params, expected_grid);
}

}  // namespace grushin
