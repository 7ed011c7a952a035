#include "config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "grushin/error.hpp"

namespace grushin::cli {

ConfigError::ConfigError(std::string file, int line, int column, const std::string& msg)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << file;
        if (line > 0) os << ':' << line << ':' << column;
        os << ": " << msg;
        return os.str();
      }()),
      line_(line),
      column_(column) {}

namespace {

struct Cursor {
  const std::string& file;
  const std::string& line;
  int lineno;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
    throw ConfigError(file, lineno, static_cast<int>(at) + 1, msg);
  }
  void skip_ws() {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
  }
  bool at_end_or_comment() {
    skip_ws();
    return pos >= line.size() || line[pos] == '#';
  }
};

bool is_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

double parse_number(Cursor& c) {
  const std::size_t start = c.pos;
  while (c.pos < c.line.size() &&
         (std::isalnum(static_cast<unsigned char>(c.line[c.pos])) || c.line[c.pos] == '.' ||
          c.line[c.pos] == '+' || c.line[c.pos] == '-' || c.line[c.pos] == '_'))
    ++c.pos;
  std::string tok = c.line.substr(start, c.pos - start);
  std::erase(tok, '_');
  if (tok.empty()) c.fail("expected a value", start);
  const char* first = tok.data();
  if (*first == '+') ++first;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v))
    c.fail("invalid number '" + c.line.substr(start, c.pos - start) + "'", start);
  return v;
}

ConfigValue parse_value(Cursor& c) {
  c.skip_ws();
  ConfigValue out;
  out.line = c.lineno;
  out.column = static_cast<int>(c.pos) + 1;
  const std::size_t start = c.pos;
  if (c.pos >= c.line.size() || c.line[c.pos] == '#') c.fail("missing value", c.pos);
  const char ch = c.line[c.pos];
  if (ch == '"') {
    std::string s;
    ++c.pos;
    while (true) {
      if (c.pos >= c.line.size()) c.fail("unterminated string", start);
      const char k = c.line[c.pos++];
      if (k == '"') break;
      if (k == '\\') {
        if (c.pos >= c.line.size()) c.fail("unterminated string", start);
        const char e = c.line[c.pos++];
        switch (e) {
          case '"': s.push_back('"'); break;
          case '\\': s.push_back('\\'); break;
          case 'n': s.push_back('\n'); break;
          case 't': s.push_back('\t'); break;
          default: c.fail(std::string("unknown escape '\\") + e + "'", c.pos - 2);
        }
      } else {
        s.push_back(k);
      }
    }
    out.data = std::move(s);
  } else if (ch == '[') {
    ++c.pos;
    std::vector<double> xs;
    c.skip_ws();
    if (c.pos < c.line.size() && c.line[c.pos] == ']') {
      ++c.pos;
    } else {
      while (true) {
        c.skip_ws();
        xs.push_back(parse_number(c));
        c.skip_ws();
        if (c.pos >= c.line.size()) c.fail("unterminated array", start);
        if (c.line[c.pos] == ',') {
          ++c.pos;
          continue;
        }
        if (c.line[c.pos] == ']') {
          ++c.pos;
          break;
        }
        c.fail("expected ',' or ']' in array", c.pos);
      }
    }
    out.data = std::move(xs);
  } else if (c.line.compare(c.pos, 4, "true") == 0 &&
             (c.pos + 4 == c.line.size() || !is_key_char(c.line[c.pos + 4]))) {
    c.pos += 4;
    out.data = true;
  } else if (c.line.compare(c.pos, 5, "false") == 0 &&
             (c.pos + 5 == c.line.size() || !is_key_char(c.line[c.pos + 5]))) {
    c.pos += 5;
    out.data = false;
  } else {
    out.data = parse_number(c);
  }
  out.text = c.line.substr(start, c.pos - start);
  if (!c.at_end_or_comment()) c.fail("unexpected text after value", c.pos);
  return out;
}

}  // namespace

ConfigDocument ConfigDocument::parse(const std::string& text, const std::string& file) {
  ConfigDocument doc;
  doc.file_ = file;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    Cursor c{file, line, lineno};
    if (c.at_end_or_comment()) continue;
    if (line[c.pos] == '[') {
      const std::size_t open = c.pos++;
      c.skip_ws();
      const std::size_t name_start = c.pos;
      while (c.pos < line.size() && is_key_char(line[c.pos])) ++c.pos;
      if (c.pos == name_start) c.fail("expected a section name", name_start);
      section = line.substr(name_start, c.pos - name_start);
      c.skip_ws();
      if (c.pos >= line.size() || line[c.pos] != ']') c.fail("expected ']'", c.pos);
      ++c.pos;
      if (!c.at_end_or_comment()) c.fail("unexpected text after section header", c.pos);
      if (!doc.sections_.emplace(section, lineno).second)
        c.fail("duplicate section [" + section + "]", open);
      continue;
    }
    const std::size_t key_start = c.pos;
    while (c.pos < line.size() && is_key_char(line[c.pos])) ++c.pos;
    if (c.pos == key_start) c.fail("expected a key or [section]", key_start);
    const std::string key = line.substr(key_start, c.pos - key_start);
    c.skip_ws();
    if (c.pos >= line.size() || line[c.pos] != '=') c.fail("expected '=' after key", c.pos);
    ++c.pos;
    if (section.empty()) c.fail("key '" + key + "' outside any [section]", key_start);
    ConfigValue v = parse_value(c);
    const std::string full = section + "." + key;
    if (doc.values_.count(full)) c.fail("duplicate key '" + key + "'", key_start);
    doc.values_.emplace(full, std::move(v));
  }
  return doc;
}

ConfigDocument ConfigDocument::load(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError(path.string(), 0, 0, "cannot open config file");
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse(ss.str(), path.string());
}

int ConfigDocument::section_line(const std::string& section) const {
  const auto it = sections_.find(section);
  return it == sections_.end() ? 0 : it->second;
}

namespace {

class Reader {
 public:
  explicit Reader(const ConfigDocument& doc) : doc_(doc) {}

  [[noreturn]] void fail(const ConfigValue& v, const std::string& msg) const {
    throw ConfigError(doc_.file(), v.line, v.column, msg);
  }
  [[noreturn]] void fail_section(const std::string& section, const std::string& msg) const {
    throw ConfigError(doc_.file(), doc_.section_line(section), 1, msg);
  }

  const ConfigValue* find(const std::string& key) {
    used_.insert(key);
    const auto it = doc_.values().find(key);
    return it == doc_.values().end() ? nullptr : &it->second;
  }

  double number(const std::string& key, double fallback) {
    const ConfigValue* v = find(key);
    if (!v) return fallback;
    if (const double* d = std::get_if<double>(&v->data)) return *d;
    fail(*v, "'" + key + "' must be a number");
  }

  int integer(const std::string& key, int fallback) {
    const ConfigValue* v = find(key);
    if (!v) return fallback;
    const double* d = std::get_if<double>(&v->data);
    if (!d || *d != std::floor(*d) || std::abs(*d) > 2e9)
      fail(*v, "'" + key + "' must be an integer");
    return static_cast<int>(*d);
  }

  bool boolean(const std::string& key, bool fallback) {
    const ConfigValue* v = find(key);
    if (!v) return fallback;
    if (const bool* b = std::get_if<bool>(&v->data)) return *b;
    fail(*v, "'" + key + "' must be true or false");
  }

  std::optional<std::string> string(const std::string& key) {
    const ConfigValue* v = find(key);
    if (!v) return std::nullopt;
    if (const std::string* s = std::get_if<std::string>(&v->data)) return *s;
    fail(*v, "'" + key + "' must be a quoted string");
  }

  std::optional<std::vector<double>> array(const std::string& key) {
    const ConfigValue* v = find(key);
    if (!v) return std::nullopt;
    if (const auto* a = std::get_if<std::vector<double>>(&v->data)) return *a;
    fail(*v, "'" + key + "' must be an array of numbers");
  }

  /// Position of a key if present, else of its section.
  [[noreturn]] void fail_at(const std::string& key, const std::string& msg) const {
    const auto it = doc_.values().find(key);
    if (it != doc_.values().end()) fail(it->second, msg);
    fail_section(key.substr(0, key.find('.')), msg);
  }

  void reject_unknown() const {
    for (const auto& [key, v] : doc_.values())
      if (!used_.count(key)) fail(v, "unknown key '" + key + "'");
  }

 private:
  const ConfigDocument& doc_;
  std::set<std::string> used_;
};

// Input paths in a config file are read relative to the file itself.
std::filesystem::path relative_to(const ConfigDocument& doc, const std::string& p) {
  const std::filesystem::path path(p);
  if (path.is_absolute() || doc.file().empty()) return path;
  return std::filesystem::path(doc.file()).parent_path() / path;
}

}  // namespace

RunConfig run_config_from(const ConfigDocument& doc) {
  Reader rd(doc);
  RunConfig cfg;
  cfg.source_file = doc.file();

  for (const char* required : {"problem.m", "problem.ell", "problem.gamma", "problem.mu", "problem.p"})
    if (!doc.values().count(required))
      throw ConfigError(doc.file(), doc.section_line("problem"), 1,
                        std::string("missing required key '") + required + "'");
  const int m = rd.integer("problem.m", 1);
  const int ell = rd.integer("problem.ell", 2);
  const double gamma = rd.number("problem.gamma", 1.0);
  const double mu = rd.number("problem.mu", 1.0);
  const double p = rd.number("problem.p", 2.0);
  try {
    cfg.problem = ProblemParams(m, ell, gamma, mu, p);
  } catch (const InvalidArgument& e) {
    const std::string what = e.what();
    std::string key = "problem.mu";
    for (const char* k : {"m", "ell", "gamma", "p"})
      if (what.rfind(std::string(k) + " ", 0) == 0) key = std::string("problem.") + k;
    if (what.find("N_gamma > 2") != std::string::npos) key = "problem.gamma";
    rd.fail_at(key, what);
  }

  cfg.grid.nr = rd.integer("grid.nr", cfg.grid.nr);
  cfg.grid.ns = rd.integer("grid.ns", cfg.grid.ns);
  cfg.grid.R = rd.number("grid.R", cfg.grid.R);
  cfg.grid.S = rd.number("grid.S", cfg.grid.S);
  if (cfg.grid.nr < 4) rd.fail_at("grid.nr", "grid.nr must be >= 4");
  if (cfg.grid.ns < 4) rd.fail_at("grid.ns", "grid.ns must be >= 4");
  if (!(cfg.grid.R > 0.0)) rd.fail_at("grid.R", "grid.R must be positive");
  if (!(cfg.grid.S > 0.0)) rd.fail_at("grid.S", "grid.S must be positive");

  SolverConfig& s = cfg.solver;
  s.tol = rd.number("solver.tol", s.tol);
  s.max_iters = rd.integer("solver.max_iters", s.max_iters);
  s.step0 = rd.number("solver.step0", s.step0);
  s.backtrack = rd.number("solver.backtrack", s.backtrack);
  s.seed = static_cast<std::uint64_t>(rd.integer("solver.seed", 0));
  s.allow_nonadmissible = rd.boolean("solver.allow_nonadmissible", false);
  if (const auto init = rd.string("solver.init")) {
    if (*init == "gaussian_bump") {
      s.init_kind = InitKind::gaussian_bump;
    } else if (*init == "custom_file") {
      s.init_kind = InitKind::custom_file;
    } else {
      rd.fail_at("solver.init", "solver.init must be \"gaussian_bump\" or \"custom_file\"");
    }
  }
  if (const auto file = rd.string("solver.init_file")) s.init_file = relative_to(doc, *file).string();
  if (s.init_kind == InitKind::custom_file && s.init_file.empty())
    rd.fail_at("solver.init", "solver.init = \"custom_file\" needs solver.init_file");
  if (!(s.tol > 0.0)) rd.fail_at("solver.tol", "solver.tol must be positive");
  if (s.max_iters < 1) rd.fail_at("solver.max_iters", "solver.max_iters must be >= 1");
  if (!(s.step0 > 0.0)) rd.fail_at("solver.step0", "solver.step0 must be positive");
  if (!(s.backtrack > 0.0 && s.backtrack < 1.0))
    rd.fail_at("solver.backtrack", "solver.backtrack must lie in (0, 1)");
  cfg.mountain_pass = rd.boolean("solver.mountain_pass", cfg.mountain_pass);
  cfg.n_path = rd.integer("solver.n_path", cfg.n_path);
  if (cfg.n_path < 8) rd.fail_at("solver.n_path", "solver.n_path must be >= 8");

  KernelOptions& k = cfg.kernel;
  k.n_theta = rd.integer("kernel.n_theta", k.n_theta);
  if (k.n_theta < 4) rd.fail_at("kernel.n_theta", "kernel.n_theta must be >= 4");
  k.matrix_free = rd.boolean("kernel.matrix_free", false);
  const double cap_mb = rd.number("kernel.memory_cap_mb", 2048.0);
  if (!(cap_mb > 0.0)) rd.fail_at("kernel.memory_cap_mb", "kernel.memory_cap_mb must be positive");
  k.memory_cap_bytes = static_cast<std::size_t>(cap_mb * 1024.0 * 1024.0);
  if (const auto diag = rd.string("kernel.diagonal")) {
    if (*diag == "corrected") {
      k.diagonal = DiagonalRule::corrected;
    } else if (*diag == "cell_average") {
      k.diagonal = DiagonalRule::cell_average;
    } else {
      rd.fail_at("kernel.diagonal", "kernel.diagonal must be \"corrected\" or \"cell_average\"");
    }
  }
  if (const auto cache = rd.string("kernel.cache")) cfg.kernel_cache = relative_to(doc, *cache);

  if (const auto ts = rd.array("audit.hls_t")) {
    if (ts->empty()) rd.fail_at("audit.hls_t", "audit.hls_t must not be empty");
    for (double t : *ts)
      if (!(t > 0.0)) rd.fail_at("audit.hls_t", "audit.hls_t entries must be positive");
    cfg.audit.hls_t_values = *ts;
  }
  cfg.audit.k_samples = rd.integer("audit.k_samples", cfg.audit.k_samples);
  if (cfg.audit.k_samples < 0) rd.fail_at("audit.k_samples", "audit.k_samples must be >= 0");
  cfg.audit.seed = s.seed;

  if (const auto dir = rd.string("outputs.directory")) cfg.outputs.directory = *dir;
  cfg.outputs.emit_field = rd.boolean("outputs.emit_field", true);
  cfg.outputs.emit_svg = rd.boolean("outputs.emit_svg", true);

  rd.reject_unknown();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return run_config_from(ConfigDocument::load(path));
}

}  // namespace grushin::cli
