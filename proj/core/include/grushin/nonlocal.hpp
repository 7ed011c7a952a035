#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "grushin/grid.hpp"
#include "grushin/params.hpp"
#include "grushin/quadrature.hpp"

namespace grushin {

/// Sphere average of d(z - w)^{-mu} for bi-radial arguments: the mean of
///   [(r^2 + r'^2 - 2 r r' cos a)^{gamma+1} + (s^2 + s'^2 - 2 s s' cos b)]^{-mu/(2(gamma+1))}
/// over the angle a between x, x' in R^m and b between y, y' in R^ell.
class KernelEvaluator {
 public:
  KernelEvaluator(const ProblemParams& params, int n_theta);

  int n_theta() const noexcept { return n_theta_; }

  /// Point value with the order-n_theta rules. Throws SingularEvaluation
  /// when both points coincide.
  double value(double r, double s, double rp, double sp) const;

  /// Same average with graded angular panels whose depth follows the
  /// distance between the arguments, for nearly coincident points.
  double value_graded(double r, double s, double rp, double sp) const;

  /// Average of the sphere-averaged kernel centred at (r, s) over the
  /// bi-radial cell [r0, r1] x [s0, s1] with respect to r'^{m-1} s'^{ell-1}
  /// dr' ds'. The cell may contain (r, s): it is resolved by 4 x 4 subcells,
  /// with those touching (r, s) split again, twice; leaves use 2 x 2 Gauss
  /// points.
  double cell_average(double r, double s, double r0, double r1, double s0,
                      double s1) const;

 private:
  double average(const AngularRule& rx, const AngularRule& ry, double r,
                 double s, double rp, double sp) const;
  double power(double base) const;

  int m_, ell_;
  double gamma_, mu_;
  double exponent_;  // -mu / (2 (gamma + 1))
  int n_theta_;
  AngularRule rule_x_, rule_y_;
  std::vector<AngularRule> ladder_x_, ladder_y_;  // graded rules by depth
};

/// Diagonal rule of the kernel matrix.
enum class DiagonalRule {
  /// Cell average of the kernel around the node.
  cell_average,
  /// Weight chosen so that the row reproduces int k(z_a, w) psi_a(w) dw for
  /// a smooth cutoff psi_a centred at the node (radius five cells, evenly
  /// reflected across the axes). This removes the O(h^2) f(z_a) error that
  /// the cell average leaves in the product of point values.
  corrected,
};

/// Diagonal entry at node (i, j) under the corrected rule.
double corrected_diagonal(const KernelEvaluator& evaluator,
                          const RadialGrid& grid, int i, int j);

/// One-off evaluation; builds the angular rules on every call.
double sphere_averaged_kernel(double r, double s, double rp, double sp,
                              const ProblemParams& params, int n_theta);

struct KernelOptions {
  int n_theta = 32;
  DiagonalRule diagonal = DiagonalRule::corrected;
  /// Dense storage is refused above this many bytes unless matrix_free.
  std::size_t memory_cap_bytes = std::size_t{2} << 30;
  bool matrix_free = false;
};

/// Sphere-averaged kernel between all node pairs of a grid.
///
/// Off-diagonal entries are point values k(node_a, node_b); the diagonal
/// follows KernelOptions::diagonal. Dense storage holds
/// (nr ns)^2 doubles in row-major flat-index order; the matrix-free mode
/// keeps only the diagonal and recomputes off-diagonal entries per use.
class KernelMatrix {
 public:
  static KernelMatrix build(GridPtr grid, const ProblemParams& params,
                            const KernelOptions& options);

  /// Wraps precomputed dense entries (e.g. from a cache file).
  KernelMatrix(GridPtr grid, const ProblemParams& params, int n_theta,
               std::vector<double> entries);

  const RadialGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  int m() const noexcept { return m_; }
  int ell() const noexcept { return ell_; }
  double gamma() const noexcept { return gamma_; }
  double mu() const noexcept { return mu_; }
  int n_theta() const noexcept { return n_theta_; }
  bool dense() const noexcept { return !entries_.empty(); }
  std::size_t dim() const noexcept { return grid_->size(); }

  double entry(std::size_t a, std::size_t b) const;

  /// Dense entries; empty in matrix-free mode.
  std::span<const double> entries() const noexcept { return entries_; }

  /// out_a = sum_b k_ab g_b (no weights applied).
  void multiply(std::span<const double> g, std::span<double> out) const;

  /// Throws InvalidArgument unless params share (m, ell, gamma, mu) with the
  /// kernel and the grid layout agrees.
  void require_compatible(const RadialGrid& grid,
                          const ProblemParams& params) const;

 private:
  KernelMatrix() = default;

  GridPtr grid_;
  int m_ = 0, ell_ = 0;
  double gamma_ = 0.0, mu_ = 0.0;
  int n_theta_ = 0;
  std::vector<double> entries_;
  std::vector<double> diagonal_;
  std::shared_ptr<const KernelEvaluator> evaluator_;
};

/// K_a = sum_b k_ab w_b f_b, the discrete d^{-mu} * f.
RadialField convolve(const KernelMatrix& kernel, const RadialField& f);

/// |u|^p pointwise.
RadialField abs_pow(const RadialField& u, double p);

/// D(u) = <convolve(kernel, |u|^p), |u|^p>_w.
double choquard_term(const KernelMatrix& kernel, const RadialField& u,
                     const ProblemParams& params);

/// GKRN1 cache: "GKRN1", then little-endian u32 nr, u32 ns, f64 R, f64 S,
/// f64 gamma, f64 mu, u32 m, u32 ell, u32 n_theta, then the dense entries as
/// f64 in row-major flat-index order.
void save_kernel(const std::filesystem::path& path, const KernelMatrix& kernel);

struct KernelHeader {
  std::uint32_t nr, ns;
  double R, S, gamma, mu;
  std::uint32_t m, ell, n_theta;
};

KernelHeader read_kernel_header(const std::filesystem::path& path);

/// Loads a cache after checking every header field against the expected
/// grid, params and angular order; a mismatch raises FormatError naming the
/// field.
KernelMatrix load_kernel(const std::filesystem::path& path, GridPtr grid,
                         const ProblemParams& params, int n_theta);

}  // namespace grushin
