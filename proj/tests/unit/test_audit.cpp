#include <gtest/gtest.h>

#include <cmath>

#include "grushin/audit.hpp"
#include "grushin/error.hpp"
#include "grushin/solver.hpp"
#include "oracles.hpp"

using namespace grushin;

namespace {

class Audit : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    grid_ = build_grid(24, 24, 8.0, 8.0, params_);
    kernel_ = new KernelMatrix(KernelMatrix::build(grid_, params_, {}));
    ground_ = new SolveReport(solve_ground_state(params_, grid_, *kernel_, {}));
  }
  static void TearDownTestSuite() {
    delete ground_;
    delete kernel_;
  }
  static inline const ProblemParams params_{1, 2, 1.0, 1.0, 2.0};
  static GridPtr grid_;
  static KernelMatrix* kernel_;
  static SolveReport* ground_;
};
GridPtr Audit::grid_;
KernelMatrix* Audit::kernel_ = nullptr;
SolveReport* Audit::ground_ = nullptr;

}  // namespace

TEST_F(Audit, ZeroField) {
  const RadialField zero(grid_);
  EXPECT_EQ(pohozaev_residual(zero, *kernel_, params_).absolute, 0.0);
  EXPECT_EQ(pohozaev_residual(zero, *kernel_, params_).relative, 0.0);
  EXPECT_EQ(nehari_residual(zero, *kernel_, params_).relative, 0.0);
  EXPECT_THROW(ratio_decomposition(zero, *kernel_, params_), DegenerateField);
  const KBoundAudit kb = k_boundedness_audit(zero, *kernel_, params_, 5);
  EXPECT_EQ(kb.k_sup, 0.0);
  const RegularityReport reg = regularity_sanity(zero);
  EXPECT_EQ(reg.sup_norm, 0.0);
  EXPECT_EQ(reg.tail_mass_fraction, 0.0);
  EXPECT_TRUE(reg.monotone_tail);
  const AuditReport all = run_audit(zero, *kernel_, params_);
  EXPECT_EQ(all.pohozaev_rel, 0.0);
  EXPECT_EQ(all.nehari_rel, 0.0);
  EXPECT_EQ(all.k_sup, 0.0);
}

TEST_F(Audit, NehariResidualArithmetic) {
  const RadialField& u = ground_->field;
  const Residual at = nehari_residual(u, *kernel_, params_);
  EXPECT_LE(at.relative, 1e-10);
  const EnergyBreakdown e = energy(u, *kernel_, params_);
  const Residual doubled = nehari_residual(2.0 * u, *kernel_, params_);
  EXPECT_NEAR(doubled.absolute, (4.0 - 16.0) * e.norm_sq(), 1e-9 * e.norm_sq());
}

TEST_F(Audit, SolutionIdentities) {
  const RadialField& u = ground_->field;
  const Residual poh = pohozaev_residual(u, *kernel_, params_);
  EXPECT_LT(poh.relative, 5e-2);
  EXPECT_NEAR(poh.absolute, ground_->pohozaev_residual, 1e-12);
  const RatioDecomposition rd = ratio_decomposition(u, *kernel_, params_);
  EXPECT_DOUBLE_EQ(rd.c_A + rd.c_B, 1.0);
  EXPECT_GT(rd.a_over_d, 0.0);
  EXPECT_GT(rd.b_over_d, 0.0);
  EXPECT_NEAR(rd.a_err, rd.a_over_d - 0.25, 1e-15);
  EXPECT_LT(std::abs(rd.a_err), 5e-2);
  EXPECT_LT(std::abs(rd.b_err), 5e-2);
}

TEST_F(Audit, NonSolutionHasPohozaevDefect) {
  const RadialField bump = standard_bump(grid_, params_);
  const RadialField v = nehari_scaling(bump, *kernel_, params_) *
                        sample(grid_, [](double r, double s) { return std::exp(-3 * r * r - s * s); });
  EXPECT_GT(pohozaev_residual(v, *kernel_, params_).relative, 1e-2);
}

TEST_F(Audit, KBoundedness) {
  const KBoundAudit kb = k_boundedness_audit(ground_->field, *kernel_, params_, 5, 3);
  EXPECT_TRUE(std::isfinite(kb.k_sup));
  EXPECT_GT(kb.k_sup, 0.0);
  EXPECT_GE(kb.k_min, 0.0);
  EXPECT_LE(kb.oracle_err, 1e-3);
}

TEST_F(Audit, DirectPotentialAgreesWithFineOracle) {
  // Library's direct quadrature of the interpolated field against the
  // independent nested adaptive oracle on the same interpolant.
  const RadialField f = abs_pow(ground_->field, 2.0);
  const KernelEvaluator ev(params_, 48);
  auto fi = [&](double r, double s) { return interpolate(f, r, s); };
  for (auto [i, j] : {std::pair{0, 0}, {3, 7}, {10, 2}}) {
    const double lib = direct_potential(ev, f, i, j, 4);
    const double fine = grushin::testing::fine_potential(1, 2, 1.0, 1.0, grid_->r(i), grid_->s(j), fi, 8.0, 8.0, 1e-6);
    EXPECT_NEAR(lib / fine, 1.0, 2e-4) << i << "," << j;
  }
}

TEST_F(Audit, RegularityOfSolution) {
  const RegularityReport reg = regularity_sanity(ground_->field);
  EXPECT_TRUE(std::isfinite(reg.sup_norm));
  EXPECT_GT(reg.sup_norm, 0.0);
  EXPECT_LT(reg.tail_mass_fraction, 1e-2);  // R = S = 8 is a small box
  EXPECT_TRUE(reg.monotone_tail);
  EXPECT_GT(reg.holder_modulus, 0.0);
}

TEST(AuditTruncation, SmallBoxIsFlagged) {
  const ProblemParams params(1, 2, 1.0, 1.0, 2.0);
  const GridPtr g = build_grid(16, 16, 3.0, 3.0, params);
  const KernelMatrix k = KernelMatrix::build(g, params, {});
  const SolveReport r = solve_ground_state(params, g, k, {});
  EXPECT_GT(regularity_sanity(r.field).tail_mass_fraction, 1e-3);
}

TEST(AuditTail, EnlargedBoxMeetsTailTarget) {
  const ProblemParams params(1, 2, 1.0, 1.0, 2.0);
  const GridPtr g = build_grid(24, 32, 12.0, 24.0, params);
  const KernelMatrix k = KernelMatrix::build(g, params, {});
  const SolveReport r = solve_ground_state(params, g, k, {});
  EXPECT_LE(regularity_sanity(r.field).tail_mass_fraction, 1e-4);
}

TEST(Hls, ScalingAuditEuclidean) {
  const ProblemParams params(1, 2, 0.0, 1.0, 2.0);
  const GridPtr g = build_grid(64, 64, 9.0, 9.0, params);
  const KernelMatrix k = KernelMatrix::build(g, params, {});
  const RadialField u = sample(g, [](double r, double s) { return std::exp(-r * r - s * s); });
  EXPECT_EQ(hls_scaling_audit(u, k, params, {1.0}).spread, 0.0);
  const HlsAudit a = hls_scaling_audit(u, k, params, {0.5, 1.0, 2.0});
  EXPECT_LE(a.spread, 1e-3);
  EXPECT_LE(a.mass_scaling_err, 1e-3);
  EXPECT_LE(a.lq_scaling_err, 1e-3);
  EXPECT_LE(a.d_scaling_err, 2e-3);
  EXPECT_NEAR(a.d_exponent / 5.0, 1.0, 1e-2);
  EXPECT_THROW(hls_scaling_audit(u, k, params, {4.0}), InvalidArgument);
  EXPECT_THROW(hls_scaling_audit(u, k, params, {}), InvalidArgument);
  EXPECT_THROW(hls_scaling_audit(u, k, params, {-1.0}), InvalidArgument);
  const AuditReport rep = run_audit(u, k, params, {{0.5, 1.0, 4.0}, 0, 0});
  EXPECT_TRUE(rep.hls_support_violation);
  EXPECT_EQ(rep.hls_ratio_spread, 0.0);
}
