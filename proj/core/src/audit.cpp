#include "grushin/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <tuple>

#include "grushin/error.hpp"
#include "grushin/quadrature.hpp"
#include "grushin/variational.hpp"

namespace grushin {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double relative_to(double value, double denom, double scale) {
  const double floor = kEps * std::max(scale, 1.0);
  return std::abs(value) / std::max(denom, floor);
}

double finite_or_zero(double v) { return std::isfinite(v) ? v : 0.0; }

// Fraction of int |u| that delta_t moves past the outer boundary.
double escaped_fraction(const RadialField& u, double t, double gamma) {
  if (t <= 1.0) return 0.0;
  const RadialGrid& g = u.grid();
  const double r_lim = g.R() / t;
  const double s_lim = g.S() / std::pow(t, 1.0 + gamma);
  double total = 0.0, out = 0.0;
  for (int i = 0; i < g.nr(); ++i)
    for (int j = 0; j < g.ns(); ++j) {
      const std::size_t a = g.index(i, j);
      const double v = g.weight(a) * std::abs(u[a]);
      total += v;
      if (g.r(i) + 0.5 * g.dr() > r_lim || g.s(j) + 0.5 * g.ds() > s_lim)
        out += v;
    }
  return total > 0.0 ? out / total : 0.0;
}

}  // namespace

Residual pohozaev_residual(const RadialField& u, const KernelMatrix& kernel,
                           const ProblemParams& params) {
  const EnergyBreakdown e = energy(u, kernel, params);
  const double p = pohozaev_defect(e, params);
  return {p, relative_to(p, e.D, e.norm_sq())};
}

Residual nehari_residual(const RadialField& u, const KernelMatrix& kernel,
                         const ProblemParams& params) {
  const EnergyBreakdown e = energy(u, kernel, params);
  const double n = e.norm_sq() - e.D;
  return {n, relative_to(n, e.D, e.norm_sq())};
}

RatioDecomposition ratio_decomposition(const RadialField& u,
                                       const KernelMatrix& kernel,
                                       const ProblemParams& params) {
  const EnergyBreakdown e = energy(u, kernel, params);
  if (!(e.D > 0.0)) throw DegenerateField();
  RatioDecomposition out;
  std::tie(out.c_A, out.c_B) = pohozaev_coefficients(params);
  out.a_over_d = e.A / e.D;
  out.b_over_d = e.B / e.D;
  out.a_err = out.a_over_d - out.c_A;
  out.b_err = out.b_over_d - out.c_B;
  return out;
}

HlsAudit hls_scaling_audit(const RadialField& u, const KernelMatrix& kernel,
                           const ProblemParams& params,
                           const std::vector<double>& t_values) {
  kernel.require_compatible(u.grid(), params);
  if (t_values.empty()) throw InvalidArgument("t_values must not be empty");
  for (double t : t_values) {
    if (!(t > 0.0) || !std::isfinite(t))
      throw InvalidArgument("dilation factor must be positive");
    if (escaped_fraction(u, t, params.gamma()) > 1e-8)
      throw InvalidArgument("support violation");
  }

  const double n = homogeneous_dimension(params);
  const double q = hls_exponent(params);
  const double p = params.p();
  const double d0 = choquard_term(kernel, u, params);
  const double lq0 = std::pow(lq_norm(u, q), q);
  const double m0 = integrate(u);

  HlsAudit out;
  out.t_values = t_values;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo, sum = 0.0;
  std::vector<double> log_t, log_d;
  for (double t : t_values) {
    const RadialField ut = dilate_field(u, t, params);
    const double d = choquard_term(kernel, ut, params);
    const double lq = lq_norm(ut, q);
    const double ratio = lq > 0.0 ? d / std::pow(lq, 2.0 * p) : 0.0;
    out.ratios.push_back(ratio);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    sum += ratio;
    if (d0 > 0.0)
      out.d_scaling_err = std::max(
          out.d_scaling_err,
          std::abs(d / (std::pow(t, 2.0 * n - params.mu()) * d0) - 1.0));
    if (lq0 > 0.0)
      out.lq_scaling_err = std::max(
          out.lq_scaling_err,
          std::abs(std::pow(lq, q) / (std::pow(t, n) * lq0) - 1.0));
    if (m0 != 0.0)
      out.mass_scaling_err =
          std::max(out.mass_scaling_err,
                   std::abs(integrate(ut) / (std::pow(t, n) * m0) - 1.0));
    if (d > 0.0) {
      log_t.push_back(std::log(t));
      log_d.push_back(std::log(d));
    }
  }
  const double mean = sum / static_cast<double>(t_values.size());
  out.spread = mean > 0.0 ? (hi - lo) / mean : 0.0;

  if (log_t.size() >= 2) {
    const double k = static_cast<double>(log_t.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < log_t.size(); ++i) {
      mx += log_t[i];
      my += log_d[i];
    }
    mx /= k;
    my /= k;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < log_t.size(); ++i) {
      sxy += (log_t[i] - mx) * (log_d[i] - my);
      sxx += (log_t[i] - mx) * (log_t[i] - mx);
    }
    if (sxx > 0.0) out.d_exponent = sxy / sxx;
  }
  return out;
}

double direct_potential(const KernelEvaluator& evaluator, const RadialField& f,
                        int i, int j, int sub) {
  if (sub < 1) throw InvalidArgument("sub must be >= 1");
  const RadialGrid& g = f.grid();
  const int m = g.m(), ell = g.ell();
  const double area = sphere_area(m) * sphere_area(ell);
  const double r = g.r(i), s = g.s(j);
  const QuadratureRule leaf = gauss_legendre(2);
  const double hr = g.dr() / sub, hs = g.ds() / sub;

  double total = 0.0;
  // The interpolant is supported on the node box plus one ghost cell.
  for (int ci = 0; ci <= g.nr(); ++ci) {
    for (int cj = 0; cj <= g.ns(); ++cj) {
      const double r0 = ci * g.dr(), s0 = cj * g.ds();
      if (r0 >= g.R() + g.dr() * 0.5 || s0 >= g.S() + g.ds() * 0.5) continue;
      const bool near = std::abs(ci - i) <= 1 && std::abs(cj - j) <= 1;
      for (int a = 0; a < sub; ++a) {
        for (int b = 0; b < sub; ++b) {
          const double pr0 = r0 + a * hr, ps0 = s0 + b * hs;
          if (near) {
            // Kernel averaged over the piece, f at its measure centroid.
            const double mr = (std::pow(pr0 + hr, m) - std::pow(pr0, m)) / m;
            const double ms =
                (std::pow(ps0 + hs, ell) - std::pow(ps0, ell)) / ell;
            const double cr = m == 1 ? pr0 + 0.5 * hr
                                     : (std::pow(pr0 + hr, m + 1) -
                                        std::pow(pr0, m + 1)) /
                                           (m + 1) / mr;
            const double cs = ell == 1 ? ps0 + 0.5 * hs
                                       : (std::pow(ps0 + hs, ell + 1) -
                                          std::pow(ps0, ell + 1)) /
                                             (ell + 1) / ms;
            const double fv = interpolate(f, cr, cs);
            if (fv == 0.0) continue;
            total += area * mr * ms * fv *
                     evaluator.cell_average(r, s, pr0, pr0 + hr, ps0, ps0 + hs);
            continue;
          }
          for (std::size_t qa = 0; qa < leaf.nodes.size(); ++qa) {
            const double rp = pr0 + 0.5 * hr * (leaf.nodes[qa] + 1.0);
            const double wr = 0.5 * hr * leaf.weights[qa] * std::pow(rp, m - 1);
            for (std::size_t qb = 0; qb < leaf.nodes.size(); ++qb) {
              const double sp = ps0 + 0.5 * hs * (leaf.nodes[qb] + 1.0);
              const double fv = interpolate(f, rp, sp);
              if (fv == 0.0) continue;
              const double ws =
                  0.5 * hs * leaf.weights[qb] * std::pow(sp, ell - 1);
              total += area * wr * ws * fv * evaluator.value(r, s, rp, sp);
            }
          }
        }
      }
    }
  }
  return total;
}

KBoundAudit k_boundedness_audit(const RadialField& u, const KernelMatrix& kernel,
                                const ProblemParams& params, int n_samples,
                                std::uint64_t seed) {
  kernel.require_compatible(u.grid(), params);
  if (n_samples < 0) throw InvalidArgument("n_samples must be >= 0");
  const RadialField f = abs_pow(u, params.p());
  const RadialField k = convolve(kernel, f);

  KBoundAudit out;
  const auto kv = k.values();
  out.k_sup = *std::max_element(kv.begin(), kv.end());
  out.k_min = *std::min_element(kv.begin(), kv.end());
  if (out.k_sup == 0.0 || n_samples == 0) return out;

  const RadialGrid& g = u.grid();
  const KernelEvaluator evaluator(params, std::max(kernel.n_theta(), 48));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_i(0, g.nr() - 1);
  std::uniform_int_distribution<int> pick_j(0, g.ns() - 1);
  for (int n = 0; n < n_samples; ++n) {
    const int i = pick_i(rng), j = pick_j(rng);
    const double ref = direct_potential(evaluator, f, i, j, 4);
    const double got = k[g.index(i, j)];
    out.oracle_err = std::max(out.oracle_err,
                              std::abs(got - ref) / std::max(std::abs(ref), kEps));
  }
  return out;
}

RegularityReport regularity_sanity(const RadialField& u) {
  const RadialGrid& g = u.grid();
  RegularityReport out;
  double mass = 0.0, tail = 0.0;
  for (int i = 0; i < g.nr(); ++i)
    for (int j = 0; j < g.ns(); ++j) {
      const std::size_t a = g.index(i, j);
      out.sup_norm = std::max(out.sup_norm, std::abs(u[a]));
      const double v = g.weight(a) * u[a] * u[a];
      mass += v;
      if (g.r(i) > 0.8 * g.R() || g.s(j) > 0.8 * g.S()) tail += v;
    }
  out.tail_mass_fraction = mass > 0.0 ? tail / mass : 0.0;

  // Angular-max profile: along r, the max over s of |u|; along s, over r.
  std::vector<double> pr(g.nr(), 0.0), ps(g.ns(), 0.0);
  for (int i = 0; i < g.nr(); ++i)
    for (int j = 0; j < g.ns(); ++j) {
      const double v = std::abs(u.at(i, j));
      pr[i] = std::max(pr[i], v);
      ps[j] = std::max(ps[j], v);
    }
  auto decreasing_tail = [](const std::vector<double>& prof) {
    const std::size_t start = prof.size() - prof.size() / 5;
    for (std::size_t k = std::max<std::size_t>(start, 1); k < prof.size(); ++k)
      if (prof[k] > prof[k - 1]) return false;
    return true;
  };
  out.monotone_tail = decreasing_tail(pr) && decreasing_tail(ps);

  for (int i = 0; i < g.nr(); ++i)
    for (int j = 0; j < g.ns(); ++j) {
      if (i + 1 < g.nr())
        out.holder_modulus =
            std::max(out.holder_modulus,
                     std::abs(u.at(i + 1, j) - u.at(i, j)) / std::sqrt(g.dr()));
      if (j + 1 < g.ns())
        out.holder_modulus =
            std::max(out.holder_modulus,
                     std::abs(u.at(i, j + 1) - u.at(i, j)) / std::sqrt(g.ds()));
    }
  return out;
}

AuditReport run_audit(const RadialField& u, const KernelMatrix& kernel,
                      const ProblemParams& params, const AuditOptions& options) {
  kernel.require_compatible(u.grid(), params);
  AuditReport out;
  const Residual poh = pohozaev_residual(u, kernel, params);
  const Residual neh = nehari_residual(u, kernel, params);
  out.pohozaev_abs = poh.absolute;
  out.pohozaev_rel = poh.relative;
  out.nehari_abs = neh.absolute;
  out.nehari_rel = neh.relative;

  const double d = choquard_term(kernel, u, params);
  if (d > 0.0) {
    const RatioDecomposition rd = ratio_decomposition(u, kernel, params);
    out.ratio_A_err = rd.a_err;
    out.ratio_B_err = rd.b_err;
    try {
      out.hls_ratio_spread =
          hls_scaling_audit(u, kernel, params, options.hls_t_values).spread;
    } catch (const InvalidArgument&) {
      out.hls_ratio_spread = 0.0;
      out.hls_support_violation = true;
    }
  }

  const KBoundAudit kb =
      k_boundedness_audit(u, kernel, params, options.k_samples, options.seed);
  out.k_sup = kb.k_sup;
  out.k_oracle_err = kb.oracle_err;

  const RegularityReport reg = regularity_sanity(u);
  out.sup_norm = reg.sup_norm;
  out.tail_mass_fraction = reg.tail_mass_fraction;
  out.monotone_tail = reg.monotone_tail;
  out.holder_modulus = reg.holder_modulus;
  out.regularity_theorem_applies = regularity_theorem_applies(params);

  for (double* v : {&out.pohozaev_abs, &out.pohozaev_rel, &out.nehari_abs,
                    &out.nehari_rel, &out.ratio_A_err, &out.ratio_B_err,
                    &out.hls_ratio_spread, &out.k_sup, &out.k_oracle_err,
                    &out.sup_norm, &out.tail_mass_fraction, &out.holder_modulus})
    *v = finite_or_zero(*v);
  return out;
}

}  // namespace grushin
