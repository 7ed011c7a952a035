#pragma once

#include <string>
#include <utility>
#include <vector>

namespace grushin {

/// Problem data (m, ell, gamma, mu, p) for
///   -Delta_gamma u + u = (d^{-mu} * |u|^p) |u|^{p-2} u   on R^m x R^ell.
///
/// Construction validates m, ell >= 1, gamma >= 0, p > 1, N_gamma > 2 and
/// 0 < mu < N_gamma; an instance is therefore always admissible as input
/// to the rest of the library. Whether p lies in the existence window is a
/// separate question answered by classify_exponent().
class ProblemParams {
 public:
  ProblemParams(int m, int ell, double gamma, double mu, double p);

  int m() const noexcept { return m_; }
  int ell() const noexcept { return ell_; }
  double gamma() const noexcept { return gamma_; }
  double mu() const noexcept { return mu_; }
  double p() const noexcept { return p_; }

  ProblemParams with_p(double p) const { return {m_, ell_, gamma_, mu_, p}; }
  ProblemParams with_mu(double mu) const { return {m_, ell_, gamma_, mu, p_}; }
  ProblemParams with_gamma(double gamma) const {
    return {m_, ell_, gamma, mu_, p_};
  }

  friend bool operator==(const ProblemParams&, const ProblemParams&) = default;

 private:
  int m_;
  int ell_;
  double gamma_;
  double mu_;
  double p_;
};

/// A point z = (x, y) of R^m x R^ell.
struct SplitPoint {
  std::vector<double> x;
  std::vector<double> y;
};

struct ExponentData {
  double n_gamma;   // homogeneous dimension
  double two_star;  // critical Sobolev-Grushin exponent
  double p_lo;      // lower end of the existence window
  double p_hi;      // upper end of the existence window
  double c_A;       // A = c_A D on solutions
  double c_B;       // B = c_B D on solutions
};

enum class Regime { admissible, nonexistent };

/// N_gamma = m + (1 + gamma) ell.
double homogeneous_dimension(const ProblemParams& params);

/// (|x|^{2(gamma+1)} + |y|^2)^{1/(2(gamma+1))}.
double grushin_distance(const SplitPoint& z, const ProblemParams& params);

/// delta_t(x, y) = (t x, t^{gamma+1} y), t > 0.
SplitPoint anisotropic_dilation(const SplitPoint& z, double t,
                                const ProblemParams& params);

/// Open interval ((2N-mu)/N, (2N-mu)/(N-2)) with N = N_gamma.
std::pair<double, double> admissible_p_interval(const ProblemParams& params);

/// Endpoints count as nonexistent: the nonexistence theorem has closed
/// conditions on 1/p.
Regime classify_exponent(const ProblemParams& params);

/// (c_A, c_B) with c_A = N/2 - (2N-mu)/(2p), c_B = (2N-mu)/(2p) - (N-2)/2.
/// Combining the Pohozaev and Nehari identities gives A = c_A D, B = c_B D.
std::pair<double, double> pohozaev_coefficients(const ProblemParams& params);

ExponentData exponent_data(const ProblemParams& params);

/// HLS-natural Lebesgue exponent q = 2 p N_gamma / (2 N_gamma - mu).
double hls_exponent(const ProblemParams& params);

/// The L^q / Holder regularity result needs mu in (0, 4) and p admissible.
bool regularity_theorem_applies(const ProblemParams& params);

/// Human-readable "(lo, hi)" for diagnostics: "(9/5, 3) = (1.8, 3)" when both
/// ends are fractions with denominator <= 64, short decimals otherwise.
std::string format_interval(double lo, double hi);

}  // namespace grushin
