#include "grushin/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include "grushin/error.hpp"

namespace grushin {

NonadmissibleExponent::NonadmissibleExponent(double p, double lo, double hi)
    : Error([&] {
        std::ostringstream os;
        os << "nonadmissible exponent: p = " << p << " outside the admissible interval "
           << format_interval(lo, hi);
        return os.str();
      }()),
      p_(p),
      lo_(lo),
      hi_(hi) {}

ProblemParams::ProblemParams(int m, int ell, double gamma, double mu, double p)
    : m_(m), ell_(ell), gamma_(gamma), mu_(mu), p_(p) {
  if (m < 1) throw InvalidArgument("m must be >= 1");
  if (ell < 1) throw InvalidArgument("ell must be >= 1");
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw InvalidArgument("gamma must be finite and >= 0");
  if (!(p > 1.0) || !std::isfinite(p))
    throw InvalidArgument("p must be finite and > 1");
  const double n_gamma = m + (1.0 + gamma) * ell;
  if (!(n_gamma > 2.0))
    throw InvalidArgument("homogeneous dimension must exceed 2");
  if (!(mu > 0.0) || !(mu < n_gamma))
    throw InvalidArgument("mu must lie in (0, N_gamma)");
}

double homogeneous_dimension(const ProblemParams& params) {
  return params.m() + (1.0 + params.gamma()) * params.ell();
}

namespace {

double squared_norm(const std::vector<double>& v) {
  double acc = 0.0;
  for (double c : v) acc += c * c;
  return acc;
}

void check_dims(const SplitPoint& z, const ProblemParams& params) {
  if (z.x.size() != static_cast<std::size_t>(params.m()) ||
      z.y.size() != static_cast<std::size_t>(params.ell()))
    throw InvalidArgument("point dimension does not match (m, ell)");
}

}  // namespace

double grushin_distance(const SplitPoint& z, const ProblemParams& params) {
  check_dims(z, params);
  const double g1 = params.gamma() + 1.0;
  const double x2 = squared_norm(z.x);
  const double y2 = squared_norm(z.y);
  if (x2 == 0.0 && y2 == 0.0) return 0.0;
  return std::pow(std::pow(x2, g1) + y2, 1.0 / (2.0 * g1));
}

SplitPoint anisotropic_dilation(const SplitPoint& z, double t,
                                const ProblemParams& params) {
  check_dims(z, params);
  if (!(t > 0.0)) throw InvalidArgument("dilation factor must be positive");
  const double ty = std::pow(t, params.gamma() + 1.0);
  SplitPoint out = z;
  for (double& c : out.x) c *= t;
  for (double& c : out.y) c *= ty;
  return out;
}

std::pair<double, double> admissible_p_interval(const ProblemParams& params) {
  const double n = homogeneous_dimension(params);
  const double num = 2.0 * n - params.mu();
  return {num / n, num / (n - 2.0)};
}

Regime classify_exponent(const ProblemParams& params) {
  const auto [lo, hi] = admissible_p_interval(params);
  return (params.p() > lo && params.p() < hi) ? Regime::admissible
                                              : Regime::nonexistent;
}

std::pair<double, double> pohozaev_coefficients(const ProblemParams& params) {
  const double n = homogeneous_dimension(params);
  const double k = (2.0 * n - params.mu()) / (2.0 * params.p());
  return {n / 2.0 - k, k - (n - 2.0) / 2.0};
}

ExponentData exponent_data(const ProblemParams& params) {
  ExponentData out{};
  out.n_gamma = homogeneous_dimension(params);
  out.two_star = 2.0 * out.n_gamma / (out.n_gamma - 2.0);
  std::tie(out.p_lo, out.p_hi) = admissible_p_interval(params);
  std::tie(out.c_A, out.c_B) = pohozaev_coefficients(params);
  return out;
}

double hls_exponent(const ProblemParams& params) {
  const double n = homogeneous_dimension(params);
  return 2.0 * params.p() * n / (2.0 * n - params.mu());
}

bool regularity_theorem_applies(const ProblemParams& params) {
  return params.mu() < 4.0 && classify_exponent(params) == Regime::admissible;
}

namespace {

// "9/5" when v is a fraction with a small denominator, else empty.
std::string as_fraction(double v) {
  for (int q = 1; q <= 64; ++q) {
    const double n = std::round(v * q);
    if (std::abs(v * q - n) <= 1e-9 * std::max(1.0, std::abs(v * q))) {
      std::ostringstream os;
      os << static_cast<long long>(n);
      if (q > 1) os << '/' << q;
      return os.str();
    }
  }
  return {};
}

}  // namespace

std::string format_interval(double lo, double hi) {
  std::ostringstream os;
  os.precision(6);
  os << '(' << lo << ", " << hi << ')';
  const std::string a = as_fraction(lo), b = as_fraction(hi);
  if (a.empty() || b.empty()) return os.str();
  const std::string exact = '(' + a + ", " + b + ')';
  return exact == os.str() ? exact : exact + " = " + os.str();
}

}  // namespace grushin
