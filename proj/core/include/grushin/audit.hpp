#pragma once

#include <cstdint>
#include <vector>

#include "grushin/grid.hpp"
#include "grushin/nonlocal.hpp"
#include "grushin/params.hpp"

namespace grushin {

struct Residual {
  double absolute = 0.0;
  double relative = 0.0;
};

/// P(u) = (N-2)/2 A + N/2 B - (2N-mu)/(2p) D; relative to D.
Residual pohozaev_residual(const RadialField& u, const KernelMatrix& kernel,
                           const ProblemParams& params);

/// ||u||_gamma^2 - D(u); relative to D.
Residual nehari_residual(const RadialField& u, const KernelMatrix& kernel,
                         const ProblemParams& params);

struct RatioDecomposition {
  double a_over_d = 0.0;
  double b_over_d = 0.0;
  double c_A = 0.0;
  double c_B = 0.0;
  double a_err = 0.0;  // a_over_d - c_A
  double b_err = 0.0;  // b_over_d - c_B
};

/// Measured A/D, B/D against the values forced by the two identities.
/// Throws DegenerateField when D = 0.
RatioDecomposition ratio_decomposition(const RadialField& u,
                                       const KernelMatrix& kernel,
                                       const ProblemParams& params);

struct HlsAudit {
  std::vector<double> t_values;
  std::vector<double> ratios;      // D(u_t) / ||u_t||_q^{2p}
  double spread = 0.0;             // (max - min) / mean of ratios
  double d_scaling_err = 0.0;      // max_t |D(u_t) / (t^{2N-mu} D(u)) - 1|
  double lq_scaling_err = 0.0;     // max_t |||u_t||_q^q / (t^N ||u||_q^q) - 1|
  double mass_scaling_err = 0.0;   // max_t |int u_t / (t^N int u) - 1|
  double d_exponent = 0.0;         // least-squares slope of log D(u_t) vs log t
};

/// Dilation invariance of the HLS quotient with q = 2pN/(2N-mu). Throws
/// InvalidArgument("support violation") when a dilate would push mass past
/// the outer boundary.
HlsAudit hls_scaling_audit(const RadialField& u, const KernelMatrix& kernel,
                           const ProblemParams& params,
                           const std::vector<double>& t_values);

/// Direct quadrature of K(z) = int d(z - w)^{-mu} f(w) dw at a grid node,
/// with f the interpolate() reconstruction of the given samples. Each source cell is
/// split into `sub` x `sub` pieces with Gauss points; cells near the target
/// are resolved by the kernel's cell average.
double direct_potential(const KernelEvaluator& evaluator, const RadialField& f,
                        int i, int j, int sub);

struct KBoundAudit {
  double k_sup = 0.0;
  double k_min = 0.0;
  double oracle_err = 0.0;  // max relative deviation at sampled nodes
};

/// K = convolve(kernel, |u|^p): sup over the grid and agreement with
/// direct_potential at n_samples random nodes drawn with `seed`.
KBoundAudit k_boundedness_audit(const RadialField& u, const KernelMatrix& kernel,
                                const ProblemParams& params, int n_samples,
                                std::uint64_t seed = 0);

struct RegularityReport {
  double sup_norm = 0.0;
  double tail_mass_fraction = 0.0;  // mass of u^2 in {r > 0.8R or s > 0.8S} / B
  bool monotone_tail = true;
  double holder_modulus = 0.0;      // max |u(a) - u(b)| / |a - b|^{1/2}, neighbours
};

RegularityReport regularity_sanity(const RadialField& u);

struct AuditOptions {
  std::vector<double> hls_t_values{0.8, 1.0};
  int k_samples = 5;
  std::uint64_t seed = 0;
};

struct AuditReport {
  double pohozaev_abs = 0.0, pohozaev_rel = 0.0;
  double nehari_abs = 0.0, nehari_rel = 0.0;
  double ratio_A_err = 0.0, ratio_B_err = 0.0;
  double hls_ratio_spread = 0.0;
  bool hls_support_violation = false;  // dilates left the domain; spread not measured
  double k_sup = 0.0;
  double k_oracle_err = 0.0;
  double sup_norm = 0.0;
  double tail_mass_fraction = 0.0;
  bool monotone_tail = true;
  double holder_modulus = 0.0;
  bool regularity_theorem_applies = false;
};

/// All audits on one field. Quantities that are undefined for the field
/// (zero D, dilates leaving the domain) are reported as 0, never NaN.
AuditReport run_audit(const RadialField& u, const KernelMatrix& kernel,
                      const ProblemParams& params,
                      const AuditOptions& options = {});

}  // namespace grushin
