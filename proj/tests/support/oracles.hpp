#pragma once

#include <cstdint>
#include <vector>

namespace grushin::testing {

/// Ground state of -Delta u + u = (|x|^{-1} * u^2) u in R^3, radial.
///
/// Solved for w = r u on a uniform grid of (0, L] with Newton's method and a
/// dense Jacobian. The potential is
///   V(r) = 4 pi [ r^{-1} int_0^r w^2 + int_r^L w^2 / rho ],
/// with trapezoid sums; derivatives are second-order differences.
struct RadialChoquard {
  double A = 0.0;  // int |grad u|^2
  double B = 0.0;  // int u^2
  double D = 0.0;  // int V u^2
  double E = 0.0;  // (A + B) / 2 - D / 4
  double u0 = 0.0; // u(0), extrapolated
  int newton_iters = 0;
  double residual = 0.0;  // max-norm of the discrete equation
  std::vector<double> r, u;
};

RadialChoquard solve_radial_choquard(int n, double length);

/// Monte Carlo average of d(z - w)^{-mu} with z = (r e, s f), w = (r' e', s' f')
/// and e, e', f, f' independent uniform unit vectors in R^m and R^ell.
double monte_carlo_kernel(int m, int ell, double gamma, double mu, double r,
                          double s, double rp, double sp, std::int64_t samples,
                          std::uint64_t seed);

/// Value of K(z) = int d(z - w)^{-mu} f(w) dw at z = (r, s) for an explicit
/// bi-radial f, by adaptive nested Gauss-Kronrod integration in (r', s') and
/// Gauss-Legendre angular averages of high order. Independent of the
/// library's kernel code.
template <class F>
double fine_potential(int m, int ell, double gamma, double mu, double r,
                      double s, F&& f, double R, double S, double tol = 1e-9);

}  // namespace grushin::testing

#include "oracles_impl.hpp"
