#include "grushin/grid.hpp"

#include <cmath>
#include <numbers>

#include "grushin/error.hpp"

namespace grushin {

double sphere_area(int dim) {
  if (dim < 1) throw InvalidArgument("sphere dimension must be >= 1");
  if (dim == 1) return 2.0;
  return 2.0 * std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim);
}

double axis_weight(int k, double h, int dim) {
  double w = std::pow((k + 0.5) * h, dim - 1) * h;
  if (dim == 2 && k == 0) w -= h * h * 9.0 / 192.0;
  if (dim == 2 && k == 1) w += h * h / 192.0;
  return w;
}

RadialGrid::RadialGrid(int nr, int ns, double R, double S, int m, int ell,
                       WeightRule rule)
    : nr_(nr), ns_(ns), R_(R), S_(S), m_(m), ell_(ell), rule_(rule) {
  if (nr < 4 || ns < 4) throw InvalidArgument("grid needs nr, ns >= 4");
  if (!(R > 0.0) || !(S > 0.0) || !std::isfinite(R) || !std::isfinite(S))
    throw InvalidArgument("truncation radii must be positive");
  if (m < 1 || ell < 1) throw InvalidArgument("block dimensions must be >= 1");
  const double hr = R / nr, hs = S / ns;
  r_.resize(nr);
  s_.resize(ns);
  for (int i = 0; i < nr; ++i) r_[i] = (i + 0.5) * hr;
  for (int j = 0; j < ns; ++j) s_[j] = (j + 0.5) * hs;
  const double sigma = sphere_area(m) * sphere_area(ell);
  w_.resize(size());
  auto axis = [rule](int k, double h, int dim) {
    return rule == WeightRule::midpoint ? std::pow((k + 0.5) * h, dim - 1) * h
                                        : axis_weight(k, h, dim);
  };
  for (int i = 0; i < nr; ++i) {
    const double wr = axis(i, hr, m);
    for (int j = 0; j < ns; ++j) w_[index(i, j)] = sigma * wr * axis(j, hs, ell);
  }
}

bool RadialGrid::same_layout(const RadialGrid& other) const noexcept {
  return nr_ == other.nr_ && ns_ == other.ns_ && R_ == other.R_ &&
         S_ == other.S_ && m_ == other.m_ && ell_ == other.ell_ &&
         rule_ == other.rule_;
}

GridPtr build_grid(int nr, int ns, double R, double S,
                   const ProblemParams& params, WeightRule rule) {
  return std::make_shared<const RadialGrid>(nr, ns, R, S, params.m(),
                                            params.ell(), rule);
}

RadialField::RadialField(GridPtr grid)
    : grid_(std::move(grid)), values_(grid_->size(), 0.0) {}

RadialField::RadialField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_->size())
    throw InvalidArgument("field size does not match grid");
  for (double v : values_)
    if (!std::isfinite(v)) throw InvalidArgument("field values must be finite");
}

RadialField& RadialField::operator*=(double c) {
  for (double& v : values_) v *= c;
  return *this;
}

RadialField& RadialField::operator+=(const RadialField& other) {
  require_same_grid(*this, other);
  for (std::size_t a = 0; a < values_.size(); ++a) values_[a] += other[a];
  return *this;
}

RadialField& RadialField::operator-=(const RadialField& other) {
  require_same_grid(*this, other);
  for (std::size_t a = 0; a < values_.size(); ++a) values_[a] -= other[a];
  return *this;
}

void RadialField::axpy(double c, const RadialField& other) {
  require_same_grid(*this, other);
  for (std::size_t a = 0; a < values_.size(); ++a) values_[a] += c * other[a];
}

void require_same_grid(const RadialField& a, const RadialField& b) {
  if (a.grid_ptr() != b.grid_ptr() && !a.grid().same_layout(b.grid()))
    throw InvalidArgument("grid mismatch");
}

void require_compatible(const RadialGrid& grid, const ProblemParams& params) {
  if (grid.m() != params.m() || grid.ell() != params.ell())
    throw InvalidArgument("grid mismatch: block dimensions differ from params");
}

double integrate(const RadialField& f) {
  const auto w = f.grid().weights();
  double acc = 0.0;
  for (std::size_t a = 0; a < f.size(); ++a) acc += w[a] * f[a];
  return acc;
}

double weighted_dot(const RadialField& f, const RadialField& g) {
  require_same_grid(f, g);
  const auto w = f.grid().weights();
  double acc = 0.0;
  for (std::size_t a = 0; a < f.size(); ++a) acc += w[a] * f[a] * g[a];
  return acc;
}

double weighted_norm(const RadialField& f) {
  return std::sqrt(weighted_dot(f, f));
}

double lq_norm(const RadialField& f, double q) {
  const auto w = f.grid().weights();
  double acc = 0.0;
  for (std::size_t a = 0; a < f.size(); ++a)
    acc += w[a] * std::pow(std::abs(f[a]), q);
  return std::pow(acc, 1.0 / q);
}

GrushinForm::GrushinForm(GridPtr grid, double gamma)
    : grid_(std::move(grid)), gamma_(gamma) {
  const RadialGrid& g = *grid_;
  const int m = g.m(), ell = g.ell();
  const double hr = g.dr(), hs = g.ds();
  const double sigma = sphere_area(m) * sphere_area(ell);
  cr_.resize(g.size());
  cs_.resize(g.size());
  for (int i = 0; i < g.nr(); ++i) {
    const double rf = (i + 1) * hr;
    const double ri = g.r(i);
    const double rw = std::pow(ri, m - 1) * std::pow(ri, 2.0 * gamma);
    for (int j = 0; j < g.ns(); ++j) {
      const double sf = (j + 1) * hs;
      cr_[g.index(i, j)] =
          sigma * std::pow(rf, m - 1) * std::pow(g.s(j), ell - 1) * hs / hr;
      cs_[g.index(i, j)] = sigma * rw * std::pow(sf, ell - 1) * hr / hs;
    }
  }
}

void GrushinForm::apply_stiffness(std::span<const double> u,
                                  std::span<double> out) const {
  const RadialGrid& g = *grid_;
  const int nr = g.nr(), ns = g.ns();
  for (std::size_t a = 0; a < g.size(); ++a) out[a] = 0.0;
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < ns; ++j) {
      const std::size_t a = g.index(i, j);
      const double ua = u[a];
      // r-face toward (i+1, j) or the ghost.
      {
        const double c = cr_[a];
        const double ub = (i + 1 < nr) ? u[g.index(i + 1, j)] : 0.0;
        const double flux = c * (ua - ub);
        out[a] += flux;
        if (i + 1 < nr) out[g.index(i + 1, j)] -= flux;
      }
      {
        const double c = cs_[a];
        const double ub = (j + 1 < ns) ? u[a + 1] : 0.0;
        const double flux = c * (ua - ub);
        out[a] += flux;
        if (j + 1 < ns) out[a + 1] -= flux;
      }
    }
  }
}

double GrushinForm::energy(std::span<const double> u) const {
  const RadialGrid& g = *grid_;
  const int nr = g.nr(), ns = g.ns();
  double acc = 0.0;
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < ns; ++j) {
      const std::size_t a = g.index(i, j);
      const double dr = u[a] - ((i + 1 < nr) ? u[g.index(i + 1, j)] : 0.0);
      const double ds = u[a] - ((j + 1 < ns) ? u[a + 1] : 0.0);
      acc += cr_[a] * dr * dr + cs_[a] * ds * ds;
    }
  }
  return acc;
}

std::vector<GrushinForm::Triplet> GrushinForm::triplets(
    double diag_shift) const {
  const RadialGrid& g = *grid_;
  const int nr = g.nr(), ns = g.ns();
  std::vector<double> diag(g.size(), 0.0);
  std::vector<Triplet> out;
  out.reserve(5 * g.size());
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < ns; ++j) {
      const std::size_t a = g.index(i, j);
      diag[a] += cr_[a] + cs_[a];
      if (i + 1 < nr) {
        const std::size_t b = g.index(i + 1, j);
        diag[b] += cr_[a];
        out.push_back({int(a), int(b), -cr_[a]});
        out.push_back({int(b), int(a), -cr_[a]});
      }
      if (j + 1 < ns) {
        const std::size_t b = a + 1;
        diag[b] += cs_[a];
        out.push_back({int(a), int(b), -cs_[a]});
        out.push_back({int(b), int(a), -cs_[a]});
      }
    }
  }
  for (std::size_t a = 0; a < g.size(); ++a)
    out.push_back({int(a), int(a), diag[a] + diag_shift * g.weight(a)});
  return out;
}

RadialField apply_grushin_laplacian(const RadialField& u,
                                    const ProblemParams& params) {
  require_compatible(u.grid(), params);
  const GrushinForm form(u.grid_ptr(), params.gamma());
  RadialField out(u.grid_ptr());
  form.apply_stiffness(u.values(), out.values());
  const auto w = u.grid().weights();
  for (std::size_t a = 0; a < out.size(); ++a) out[a] = -out[a] / w[a];
  return out;
}

double dirichlet_energy(const RadialField& u, const ProblemParams& params) {
  require_compatible(u.grid(), params);
  return GrushinForm(u.grid_ptr(), params.gamma()).energy(u.values());
}

double grushin_norm_sq(const RadialField& u, const ProblemParams& params) {
  return dirichlet_energy(u, params) + weighted_dot(u, u);
}

namespace {

// Catmull-Rom weights for the four nodes around fractional position t.
void cubic_weights(double t, double w[4]) {
  const double t2 = t * t, t3 = t2 * t;
  w[0] = 0.5 * (-t3 + 2 * t2 - t);
  w[1] = 0.5 * (3 * t3 - 5 * t2 + 2);
  w[2] = 0.5 * (-3 * t3 + 4 * t2 + t);
  w[3] = 0.5 * (t3 - t2);
}

// Node index after even reflection across the axis; n marks the zero ghost.
int fold(int k, int n) {
  if (k < 0) k = -k - 1;
  return k >= n ? n : k;
}

}  // namespace

double interpolate(const RadialField& u, double r, double s) {
  const RadialGrid& g = u.grid();
  if (r < 0.0 || s < 0.0 || r > g.R() || s > g.S()) return 0.0;
  const double xr = r / g.dr() - 0.5, xs = s / g.ds() - 0.5;
  const int br = static_cast<int>(std::floor(xr));
  const int bs = static_cast<int>(std::floor(xs));
  double wr[4], ws[4];
  cubic_weights(xr - br, wr);
  cubic_weights(xs - bs, ws);
  double acc = 0.0;
  for (int a = 0; a < 4; ++a) {
    const int i = fold(br - 1 + a, g.nr());
    if (i == g.nr()) continue;
    double row = 0.0;
    for (int b = 0; b < 4; ++b) {
      const int j = fold(bs - 1 + b, g.ns());
      if (j != g.ns()) row += ws[b] * u.at(i, j);
    }
    acc += wr[a] * row;
  }
  return acc;
}

RadialField dilate_field(const RadialField& u, double t,
                         const ProblemParams& params) {
  if (!(t > 0.0)) throw InvalidArgument("dilation factor must be positive");
  require_compatible(u.grid(), params);
  if (t == 1.0) return u;
  const double tr = 1.0 / t;
  const double ts = 1.0 / std::pow(t, 1.0 + params.gamma());
  return sample(u.grid_ptr(), [&](double r, double s) {
    return interpolate(u, r * tr, s * ts);
  });
}

}  // namespace grushin
