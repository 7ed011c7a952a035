#include "grushin/nonlocal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "grushin/error.hpp"
#include "grushin/parallel.hpp"

namespace grushin {

namespace {

constexpr int kLadderDepth = 16;

// Depth of the graded angular rule for an angular peak of width `eps`:
// the finest panel must be narrower than the peak.
int ladder_level(double eps) {
  if (!(eps > 0.0)) return kLadderDepth;
  const int level =
      static_cast<int>(std::ceil(std::log(std::numbers::pi / eps) / std::log(4.0))) + 1;
  return std::clamp(level, 1, kLadderDepth);
}

}  // namespace

KernelEvaluator::KernelEvaluator(const ProblemParams& params, int n_theta)
    : m_(params.m()),
      ell_(params.ell()),
      gamma_(params.gamma()),
      mu_(params.mu()),
      exponent_(-params.mu() / (2.0 * (params.gamma() + 1.0))),
      n_theta_(n_theta) {
  if (n_theta < 4) throw InvalidArgument("n_theta must be >= 4");
  rule_x_ = AngularRule::uniform(m_, n_theta);
  rule_y_ = AngularRule::uniform(ell_, n_theta);
  for (int level = 0; level <= kLadderDepth; ++level) {
    ladder_x_.push_back(AngularRule::graded(m_, 8, level));
    ladder_y_.push_back(AngularRule::graded(ell_, 8, level));
  }
}

double KernelEvaluator::power(double base) const {
  if (exponent_ == -0.5) return 1.0 / std::sqrt(base);
  if (exponent_ == -0.25) return 1.0 / std::sqrt(std::sqrt(base));
  if (exponent_ == -1.0) return 1.0 / base;
  return std::exp(exponent_ * std::log(base));
}

double KernelEvaluator::average(const AngularRule& rx, const AngularRule& ry,
                                double r, double s, double rp,
                                double sp) const {
  const double g1 = gamma_ + 1.0;
  const double dr2 = (r - rp) * (r - rp);
  const double ds2 = (s - sp) * (s - sp);
  const double rr = 2.0 * r * rp;
  const double ss = 2.0 * s * sp;
  // x-part depends only on the x-angle; precompute it per node.
  thread_local std::vector<double> xpart;
  xpart.resize(rx.weights.size());
  for (std::size_t a = 0; a < xpart.size(); ++a) {
    const double base = dr2 + rr * rx.one_minus_cos[a];
    xpart[a] = (g1 == 1.0) ? base : (g1 == 2.0 ? base * base : std::pow(base, g1));
  }
  double acc = 0.0;
  for (std::size_t b = 0; b < ry.weights.size(); ++b) {
    const double y = ds2 + ss * ry.one_minus_cos[b];
    double inner = 0.0;
    for (std::size_t a = 0; a < xpart.size(); ++a) {
      const double d = xpart[a] + y;
      if (d <= 0.0) throw SingularEvaluation();
      inner += rx.weights[a] * power(d);
    }
    acc += ry.weights[b] * inner;
  }
  return acc;
}

double KernelEvaluator::value(double r, double s, double rp, double sp) const {
  if (r == rp && s == sp) throw SingularEvaluation();
  return average(rule_x_, rule_y_, r, s, rp, sp);
}

double KernelEvaluator::value_graded(double r, double s, double rp,
                                     double sp) const {
  if (r == rp && s == sp) throw SingularEvaluation();
  // Angular peak widths: the y-angle term 2 s s'(1 - cos) competes with
  // |dr|^{2(gamma+1)} + ds^2, the x-angle term with dr^2 + |ds|^{2/(gamma+1)}.
  const double g1 = gamma_ + 1.0;
  const double dr = std::abs(r - rp), ds = std::abs(s - sp);
  int lx = 0, ly = 0;
  if (m_ > 1) {
    const double w = std::sqrt(dr * dr + std::pow(ds, 2.0 / g1));
    lx = ladder_level(w / std::sqrt(r * rp));
  }
  if (ell_ > 1) {
    const double w = std::sqrt(std::pow(dr, 2.0 * g1) + ds * ds);
    ly = ladder_level(w / std::sqrt(s * sp));
  }
  return average(ladder_x_[lx], ladder_y_[ly], r, s, rp, sp);
}

double KernelEvaluator::cell_average(double r, double s, double r0, double r1,
                                     double s0, double s1) const {
  static const double g = 0.5 / std::sqrt(3.0);
  double num = 0.0, den = 0.0;
  auto leaf = [&](double a0, double a1, double b0, double b1) {
    const double ha = a1 - a0, hb = b1 - b0;
    const double ma = 0.5 * (a0 + a1), mb = 0.5 * (b0 + b1);
    for (double ea : {-g, g}) {
      for (double eb : {-g, g}) {
        const double rp = ma + ea * ha;
        const double sp = mb + eb * hb;
        const double w = 0.25 * ha * hb * std::pow(rp, m_ - 1) *
                         std::pow(sp, ell_ - 1);
        num += w * value_graded(r, s, rp, sp);
        den += w;
      }
    }
  };
  auto recurse = [&](auto&& self, double a0, double a1, double b0, double b1,
                     int level) -> void {
    const double ha = (a1 - a0) / 4.0, hb = (b1 - b0) / 4.0;
    for (int p = 0; p < 4; ++p) {
      for (int q = 0; q < 4; ++q) {
        const double sa0 = a0 + p * ha, sa1 = a0 + (p + 1) * ha;
        const double sb0 = b0 + q * hb, sb1 = b0 + (q + 1) * hb;
        const bool touches = r >= sa0 && r <= sa1 && s >= sb0 && s <= sb1;
        if (touches && level < 2)
          self(self, sa0, sa1, sb0, sb1, level + 1);
        else
          leaf(sa0, sa1, sb0, sb1);
      }
    }
  };
  recurse(recurse, r0, r1, s0, s1, 0);
  return num / den;
}

double corrected_diagonal(const KernelEvaluator& ev, const RadialGrid& g,
                          int i, int j) {
  constexpr int kRadius = 5;
  const int m = g.m(), ell = g.ell();
  const double hr = g.dr(), hs = g.ds();
  const double ra = g.r(i), sa = g.s(j);
  const double rho_r = kRadius * hr, rho_s = kRadius * hs;
  const double sigma = sphere_area(m) * sphere_area(ell);

  auto bump = [&](double dr, double ds) {
    const double q = (dr / rho_r) * (dr / rho_r) + (ds / rho_s) * (ds / rho_s);
    if (q >= 1.0) return 0.0;
    const double c = (1.0 - q) * (1.0 - q) * (1.0 - q);
    return c * c;
  };
  // Even in r' and s', so smooth as a function on R^N.
  auto psi = [&](double rp, double sp) {
    return bump(rp - ra, sp - sa) + bump(rp + ra, sp - sa) +
           bump(rp - ra, sp + sa) + bump(rp + ra, sp + sa);
  };
  auto density = [&](double rp, double sp) {
    return sigma * std::pow(rp, m - 1) * std::pow(sp, ell - 1) * psi(rp, sp);
  };

  static const QuadratureRule g3 = gauss_legendre(3);
  static const QuadratureRule g8 = gauss_legendre(8);
  // int over [r0, r0 + lr] x [s0, s0 + ls] split into sub x sub pieces.
  auto tensor = [&](double r0, double lr, double s0, double ls, int sub) {
    double acc = 0.0;
    const double pr = lr / sub, ps = ls / sub;
    for (int a = 0; a < sub; ++a)
      for (int b = 0; b < sub; ++b)
        for (std::size_t u = 0; u < g3.nodes.size(); ++u) {
          const double rp = r0 + (a + 0.5 * (g3.nodes[u] + 1.0)) * pr;
          for (std::size_t v = 0; v < g3.nodes.size(); ++v) {
            const double sp = s0 + (b + 0.5 * (g3.nodes[v] + 1.0)) * ps;
            const double d = density(rp, sp);
            if (d == 0.0) continue;
            acc += 0.25 * pr * ps * g3.weights[u] * g3.weights[v] * d *
                   ev.value_graded(ra, sa, rp, sp);
          }
        }
    return acc;
  };
  // Own cell: four quadrants with the node at a corner, each split into two
  // Duffy triangles so the Jacobian absorbs the singularity.
  auto own_cell = [&]() {
    double acc = 0.0;
    for (double a : {-0.5 * hr, 0.5 * hr})
      for (double b : {-0.5 * hs, 0.5 * hs})
        for (int tri = 0; tri < 2; ++tri)
          for (std::size_t u = 0; u < g8.nodes.size(); ++u) {
            const double t = 0.5 * (g8.nodes[u] + 1.0);
            for (std::size_t v = 0; v < g8.nodes.size(); ++v) {
              const double e = 0.5 * (g8.nodes[v] + 1.0);
              const double dr = tri == 0 ? a * t : a * t * e;
              const double ds = tri == 0 ? b * t * e : b * t;
              const double w = 0.25 * g8.weights[u] * g8.weights[v] *
                               std::abs(a * b) * t;
              acc += w * density(ra + dr, sa + ds) *
                     ev.value_graded(ra, sa, ra + dr, sa + ds);
            }
          }
    return acc;
  };

  // Cells past the outer boundary take part as virtual nodes so that the
  // cutoff is never truncated.
  double exact = 0.0, lattice = 0.0;
  for (int ci = std::max(0, i - kRadius - 1); ci <= i + kRadius + 1; ++ci) {
    const double rc = (ci + 0.5) * hr;
    const double wr = axis_weight(ci, hr, m);
    for (int cj = std::max(0, j - kRadius - 1); cj <= j + kRadius + 1; ++cj) {
      const double sc = (cj + 0.5) * hs;
      if (ci == i && cj == j) {
        exact += own_cell();
        continue;
      }
      const bool near = std::abs(ci - i) <= 1 && std::abs(cj - j) <= 1;
      exact += tensor(ci * hr, hr, cj * hs, hs, near ? 4 : 1);
      const double p = psi(rc, sc);
      if (p != 0.0)
        lattice += sigma * wr * axis_weight(cj, hs, ell) * p *
                   ev.value(ra, sa, rc, sc);
    }
  }
  return (exact - lattice) / (g.weight(g.index(i, j)) * psi(ra, sa));
}

double sphere_averaged_kernel(double r, double s, double rp, double sp,
                              const ProblemParams& params, int n_theta) {
  return KernelEvaluator(params, n_theta).value(r, s, rp, sp);
}

KernelMatrix KernelMatrix::build(GridPtr grid, const ProblemParams& params,
                                 const KernelOptions& options) {
  grushin::require_compatible(*grid, params);
  KernelMatrix k;
  k.grid_ = std::move(grid);
  k.m_ = params.m();
  k.ell_ = params.ell();
  k.gamma_ = params.gamma();
  k.mu_ = params.mu();
  k.n_theta_ = options.n_theta;
  k.evaluator_ = std::make_shared<const KernelEvaluator>(params, options.n_theta);
  const RadialGrid& g = *k.grid_;
  const std::size_t n = g.size();
  const double bytes = static_cast<double>(n) * static_cast<double>(n) * 8.0;
  if (!options.matrix_free && bytes > static_cast<double>(options.memory_cap_bytes))
    throw KernelMemoryError(
        "dense kernel needs " + std::to_string(bytes / (1 << 20)) +
        " MiB, above the memory cap; use a smaller grid or matrix_free mode");

  const KernelEvaluator& ev = *k.evaluator_;
  const double hr = g.dr(), hs = g.ds();
  k.diagonal_.resize(n);
  parallel_for(0, n, [&](std::size_t a) {
    const int i = static_cast<int>(a / g.ns());
    const int j = static_cast<int>(a % g.ns());
    const double r = g.r(i), s = g.s(j);
    k.diagonal_[a] =
        options.diagonal == DiagonalRule::corrected
            ? corrected_diagonal(ev, g, i, j)
            : ev.cell_average(r, s, r - 0.5 * hr, r + 0.5 * hr, s - 0.5 * hs,
                              s + 0.5 * hs);
  });
  if (options.matrix_free) return k;

  k.entries_.assign(n * n, 0.0);
  double* e = k.entries_.data();
  parallel_for(0, n, [&](std::size_t a) {
    const int i = static_cast<int>(a / g.ns());
    const int j = static_cast<int>(a % g.ns());
    const double r = g.r(i), s = g.s(j);
    e[a * n + a] = k.diagonal_[a];
    for (std::size_t b = a + 1; b < n; ++b) {
      const int ib = static_cast<int>(b / g.ns());
      const int jb = static_cast<int>(b % g.ns());
      e[a * n + b] = ev.value(r, s, g.r(ib), g.s(jb));
    }
  });
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) e[b * n + a] = e[a * n + b];
  return k;
}

KernelMatrix::KernelMatrix(GridPtr grid, const ProblemParams& params,
                           int n_theta, std::vector<double> entries)
    : grid_(std::move(grid)),
      m_(params.m()),
      ell_(params.ell()),
      gamma_(params.gamma()),
      mu_(params.mu()),
      n_theta_(n_theta),
      entries_(std::move(entries)) {
  grushin::require_compatible(*grid_, params);
  const std::size_t n = grid_->size();
  if (entries_.size() != n * n)
    throw InvalidArgument("kernel entry count does not match grid");
  diagonal_.resize(n);
  for (std::size_t a = 0; a < n; ++a) diagonal_[a] = entries_[a * n + a];
}

double KernelMatrix::entry(std::size_t a, std::size_t b) const {
  const std::size_t n = dim();
  if (dense()) return entries_[a * n + b];
  if (a == b) return diagonal_[a];
  const RadialGrid& g = *grid_;
  const int ns = g.ns();
  return evaluator_->value(g.r(int(a / ns)), g.s(int(a % ns)), g.r(int(b / ns)),
                           g.s(int(b % ns)));
}

void KernelMatrix::multiply(std::span<const double> gvec,
                            std::span<double> out) const {
  const std::size_t n = dim();
  if (dense()) {
    const double* e = entries_.data();
    parallel_for(0, n, [&](std::size_t a) {
      const double* row = e + a * n;
      double acc = 0.0;
      for (std::size_t b = 0; b < n; ++b) acc += row[b] * gvec[b];
      out[a] = acc;
    });
    return;
  }
  parallel_for(0, n, [&](std::size_t a) {
    double acc = 0.0;
    for (std::size_t b = 0; b < n; ++b)
      if (gvec[b] != 0.0) acc += entry(a, b) * gvec[b];
    out[a] = acc;
  });
}

void KernelMatrix::require_compatible(const RadialGrid& grid,
                                      const ProblemParams& params) const {
  if (!grid.same_layout(*grid_)) throw InvalidArgument("grid mismatch");
  if (params.m() != m_ || params.ell() != ell_ || params.gamma() != gamma_ ||
      params.mu() != mu_)
    throw InvalidArgument("kernel was built for different (m, ell, gamma, mu)");
}

RadialField convolve(const KernelMatrix& kernel, const RadialField& f) {
  if (!f.grid().same_layout(kernel.grid()))
    throw InvalidArgument("grid mismatch");
  const auto w = f.grid().weights();
  std::vector<double> wf(f.size());
  for (std::size_t a = 0; a < f.size(); ++a) wf[a] = w[a] * f[a];
  RadialField out(f.grid_ptr());
  kernel.multiply(wf, out.values());
  return out;
}

RadialField abs_pow(const RadialField& u, double p) {
  RadialField out(u.grid_ptr());
  for (std::size_t a = 0; a < u.size(); ++a) {
    const double v = std::abs(u[a]);
    out[a] = (v == 0.0) ? 0.0 : (p == 2.0 ? v * v : std::pow(v, p));
  }
  return out;
}

double choquard_term(const KernelMatrix& kernel, const RadialField& u,
                     const ProblemParams& params) {
  kernel.require_compatible(u.grid(), params);
  const RadialField f = abs_pow(u, params.p());
  bool any = false;
  for (std::size_t a = 0; a < f.size(); ++a) any = any || f[a] != 0.0;
  if (!any) return 0.0;
  const RadialField k = convolve(kernel, f);
  return weighted_dot(k, f);
}

}  // namespace grushin
