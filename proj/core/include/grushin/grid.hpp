#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "grushin/params.hpp"

namespace grushin {

/// Unit-sphere area of S^{d-1} in R^d: 2 pi^{d/2} / Gamma(d/2); 2 for d = 1.
double sphere_area(int dim);

/// One-axis factor of the node weights: x^{d-1} h at x = (k + 1/2) h. For
/// d = 2 the midpoint sum of x f(x) carries an h^2 f(0) / 24 boundary term;
/// the first two weights absorb it through f(0) ~ (9 f_0 - f_1) / 8, which is
/// exact for even quadratics.
double axis_weight(int k, double h, int dim);

enum class WeightRule {
  /// x^{d-1} h at the cell centre on both axes.
  midpoint,
  /// midpoint, with axis_weight's correction on two-dimensional axes.
  axis_corrected,
};

/// Cell-centered tensor grid in (r, s) = (|x|, |y|) on [0, R] x [0, S].
///
/// Node (i, j) sits at r_i = (i + 1/2) dr, s_j = (j + 1/2) ds and carries the
/// weight sigma_{m-1} sigma_{ell-1} axis_weight(i, dr, m) axis_weight(j, ds, ell)
/// (or the plain midpoint factors under WeightRule::midpoint), so sums of weighted samples approximate integrals over the truncated
/// region of R^N.
/// Flat index of (i, j) is i * ns + j.
class RadialGrid {
 public:
  RadialGrid(int nr, int ns, double R, double S, int m, int ell,
             WeightRule rule = WeightRule::axis_corrected);

  int nr() const noexcept { return nr_; }
  int ns() const noexcept { return ns_; }
  double R() const noexcept { return R_; }
  double S() const noexcept { return S_; }
  double dr() const noexcept { return R_ / nr_; }
  double ds() const noexcept { return S_ / ns_; }
  int m() const noexcept { return m_; }
  int ell() const noexcept { return ell_; }
  WeightRule weight_rule() const noexcept { return rule_; }
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(nr_) * ns_;
  }
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(i) * ns_ + j;
  }

  std::span<const double> r_nodes() const noexcept { return r_; }
  std::span<const double> s_nodes() const noexcept { return s_; }
  std::span<const double> weights() const noexcept { return w_; }
  double r(int i) const noexcept { return r_[i]; }
  double s(int j) const noexcept { return s_[j]; }
  double weight(std::size_t a) const noexcept { return w_[a]; }

  /// Same layout and measure: nodes, radii, block dimensions and weight
  /// rule agree.
  bool same_layout(const RadialGrid& other) const noexcept;

 private:
  int nr_, ns_;
  double R_, S_;
  int m_, ell_;
  WeightRule rule_;
  std::vector<double> r_, s_, w_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

GridPtr build_grid(int nr, int ns, double R, double S,
                   const ProblemParams& params,
                   WeightRule rule = WeightRule::axis_corrected);

/// Samples of a bi-radial function on a RadialGrid.
class RadialField {
 public:
  explicit RadialField(GridPtr grid);
  RadialField(GridPtr grid, std::vector<double> values);

  const RadialGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](std::size_t a) const noexcept { return values_[a]; }
  double& operator[](std::size_t a) noexcept { return values_[a]; }
  double at(int i, int j) const noexcept { return values_[grid_->index(i, j)]; }

  RadialField& operator*=(double c);
  RadialField& operator+=(const RadialField& other);
  RadialField& operator-=(const RadialField& other);
  friend RadialField operator*(double c, RadialField f) { return f *= c; }
  friend RadialField operator+(RadialField a, const RadialField& b) {
    return a += b;
  }
  friend RadialField operator-(RadialField a, const RadialField& b) {
    return a -= b;
  }

  /// this += c * other
  void axpy(double c, const RadialField& other);

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

/// Samples f(r, s) at every node.
template <class F>
RadialField sample(const GridPtr& grid, F&& f) {
  RadialField out(grid);
  for (int i = 0; i < grid->nr(); ++i)
    for (int j = 0; j < grid->ns(); ++j)
      out[grid->index(i, j)] = f(grid->r(i), grid->s(j));
  return out;
}

/// Throws InvalidArgument unless both fields live on the same layout.
void require_same_grid(const RadialField& a, const RadialField& b);

/// Throws InvalidArgument unless the grid was built for params' (m, ell).
void require_compatible(const RadialGrid& grid, const ProblemParams& params);

/// sum_a w_a f_a
double integrate(const RadialField& f);

/// <f, g>_w = sum_a w_a f_a g_a
double weighted_dot(const RadialField& f, const RadialField& g);

/// sqrt(<f, f>_w)
double weighted_norm(const RadialField& f);

/// (sum_a w_a |f_a|^q)^{1/q}
double lq_norm(const RadialField& f, double q);

/// Face coefficients of the discrete Dirichlet form
///   a(u, u) = sum_faces c_f (u_+ - u_-)^2,
/// i.e. midpoint quadrature of u_r^2 + r^{2 gamma} u_s^2 on cell faces.
/// The r = 0 and s = 0 faces carry no flux (even reflection); the faces at
/// r = R and s = S couple to a zero ghost value (homogeneous Dirichlet).
class GrushinForm {
 public:
  GrushinForm(GridPtr grid, double gamma);

  const RadialGrid& grid() const noexcept { return *grid_; }
  double gamma() const noexcept { return gamma_; }

  /// c for the face between (i, j) and (i + 1, j); i = nr - 1 is the outer face.
  double r_face(int i, int j) const noexcept {
    return cr_[grid_->index(i, j)];
  }
  /// c for the face between (i, j) and (i, j + 1); j = ns - 1 is the outer face.
  double s_face(int i, int j) const noexcept {
    return cs_[grid_->index(i, j)];
  }

  /// out = L u where a(u, v) = v^T L u.
  void apply_stiffness(std::span<const double> u, std::span<double> out) const;

  /// a(u, u)
  double energy(std::span<const double> u) const;

  /// Sparse triplets (row, col, value) of L plus diag_shift * W, lower and
  /// upper parts both present.
  struct Triplet {
    int row, col;
    double value;
  };
  std::vector<Triplet> triplets(double diag_shift) const;

 private:
  GridPtr grid_;
  double gamma_;
  std::vector<double> cr_, cs_;
};

/// Discrete Delta_gamma u := -W^{-1} L u, so -<Delta_gamma u, v>_w = a(u, v).
RadialField apply_grushin_laplacian(const RadialField& u,
                                    const ProblemParams& params);

/// A(u) = a(u, u) = -<Delta_gamma u, u>_w.
double dirichlet_energy(const RadialField& u, const ProblemParams& params);

/// A(u) + int u^2.
double grushin_norm_sq(const RadialField& u, const ProblemParams& params);

/// Catmull-Rom bicubic interpolant of u at (r, s), using even reflection
/// across both axes and zero ghost nodes past the last one; zero outside
/// [0, R] x [0, S]. Reproduces nodal values exactly.
double interpolate(const RadialField& u, double r, double s);

/// v(r, s) = u(r / t, s / t^{1+gamma}), i.e. u o delta_{1/t}; integrals scale
/// by t^{N_gamma}.
RadialField dilate_field(const RadialField& u, double t,
                         const ProblemParams& params);

}  // namespace grushin
