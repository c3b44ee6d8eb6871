#include <cmath>
#include <complex>
#include <numbers>
#include <tuple>
#include <vector>

#include <gtest/gtest.h>

#include "dstable/genfun.hpp"
#include "oracles.hpp"

using namespace dstable;

namespace {

std::vector<DSParams> sample_grid() {
  return {validate_ds(0.3, -1.0, 0.0), validate_ds(0.7, -0.5, 2.0), validate_ds(1.0, 1.0, 2.0),
          validate_ds(1.0, 0.0, 1.5),  validate_ds(1.3, 1.0, 2.0),  validate_ds(1.5, 1.0, 2.25),
          validate_ds(2.0, 1.0, 2.0),  validate_ds(2.0, 0.5, 3.0)};
}

}  // namespace

TEST(Pgf, UnitAndZero) {
  for (const DSParams& p : sample_grid()) {
    EXPECT_EQ(pgf(p, 1.0), 1.0) << p.describe();
    EXPECT_EQ(pgf(p, ComplexPoint(1.0, 0.0)), ComplexPoint(1.0, 0.0));
    // G(0) = exp(-delta + gamma) off alpha = 1; exp(-delta) at alpha = 1.
    const double expect = p.unit_alpha() ? std::exp(-p.delta()) : std::exp(p.gamma() - p.delta());
    EXPECT_NEAR(pgf(p, 0.0), expect, 1e-15);
  }
}

TEST(Pgf, ComplexMatchesRealOnAxis) {
  const DSParams p = validate_ds(1.5, 1.0, 2.25);
  for (double x : {-0.9, -0.2, 0.3, 0.99}) {
    EXPECT_NEAR(std::abs(pgf(p, ComplexPoint(x, 0.0)) - pgf(p, x)), 0.0, 1e-15);
  }
}

TEST(Pgf, ConjugateSymmetryAndBound) {
  for (const DSParams& p : sample_grid()) {
    for (double th : {0.1, 1.0, 2.5, 3.1}) {
      const ComplexPoint z = std::polar(0.95, th);
      const ComplexPoint a = pgf(p, z), b = pgf(p, std::conj(z));
      EXPECT_NEAR(std::abs(a - std::conj(b)), 0.0, 1e-14);
      EXPECT_LE(std::abs(a), 1.0 + 1e-14);
    }
  }
}

TEST(Pgf, RejectsOutsideDisk) {
  const DSParams p = validate_ds(2.0, 1.0, 2.0);
  EXPECT_THROW(pgf(p, 1.5), Error);
  EXPECT_THROW(pgf(p, ComplexPoint(0.0, 1.1)), Error);
}

TEST(Pgf, PoissonAndPointMass) {
  const DSParams poi = validate_ds(1.0, 0.0, 2.0);
  EXPECT_NEAR(pgf(poi, 0.3), std::exp(2.0 * (0.3 - 1.0)), 1e-15);
  const DSParams point = validate_ds(1.0, 0.0, 0.0);
  EXPECT_EQ(pgf(point, 0.0), 1.0);
  EXPECT_EQ(pgf(point, ComplexPoint(-1.0, 0.0)), ComplexPoint(1.0, 0.0));
}

TEST(Fcgf, MatchesLogPgf) {
  for (const DSParams& p : sample_grid()) {
    for (double t : {-1.0, -0.5, -0.01}) EXPECT_NEAR(fcgf(p, t), log_pgf(p, 1.0 + t), 1e-14);
    EXPECT_EQ(fcgf(p, 0.0), 0.0);
  }
}

TEST(Rfunc, MatchesNumericDerivative) {
  for (const DSParams& p : sample_grid()) {
    for (double z : {0.1, 0.5, 0.9}) {
      const double num = oracle::derivative([&](double x) { return log_pgf(p, x); }, z);
      EXPECT_NEAR(rfunc(p, z), num, 1e-7 * (1.0 + std::abs(num))) << p.describe() << " z=" << z;
    }
  }
}

TEST(Rfunc, LeadingRatio) {
  // R(0) = f(1)/f(0).
  const DSParams p = validate_ds(2.0, 1.0, 3.0);
  EXPECT_NEAR(rfunc(p, 0.0), 1.0, 1e-15);
}

TEST(BSibPgf, EndpointsAndCoefficients) {
  const BSibParams b = validate_bsib(1.5, 2.0);
  EXPECT_EQ(bsib_pgf(b, ComplexPoint(0.0, 0.0)), ComplexPoint(0.0, 0.0));
  EXPECT_EQ(bsib_pgf(b, ComplexPoint(1.0, 0.0)), ComplexPoint(1.0, 0.0));
  // Derivative at zero is p1 = rho + (1-rho) alpha.
  const double h = 1e-6;
  const double d = bsib_pgf(b, ComplexPoint(h, 0.0)).real() / h;
  EXPECT_NEAR(d, 2.0 + (1.0 - 2.0) * 1.5, 1e-5);
  const BSibParams u = validate_bsib(1.0, 0.4);
  EXPECT_NEAR(bsib_pgf(u, ComplexPoint(0.5, 0.0)).real(), 0.5 + 0.4 * 0.5 * std::log(0.5), 1e-15);
}

TEST(Thinning, PowerLaw) {
  const DSParams p = validate_ds(1.5, 1.0, 3.0);
  const DSParams t = thin_params(p, 0.25);
  EXPECT_NEAR(t.gamma(), std::pow(0.25, 1.5), 1e-15);
  EXPECT_NEAR(t.delta(), 0.75, 1e-15);
  EXPECT_EQ(thin_params(p, 1.0), p);
  EXPECT_THROW(thin_params(p, 0.0), Error);
}

TEST(Thinning, UnitAlphaShiftsDelta) {
  const DSParams p = validate_ds(1.0, 1.0, 2.0);
  const DSParams t = thin_params(p, 0.5);
  EXPECT_NEAR(t.gamma(), 0.5, 1e-15);
  EXPECT_NEAR(t.delta(), 0.5 * (2.0 + std::log(2.0)), 1e-15);
}

TEST(Thinning, PgfComposition) {
  // G_{a∘X}(z) = G_X(1 - a(1-z)).
  for (const DSParams& p : sample_grid()) {
    if (p.degenerate()) continue;
    const DSParams t = thin_params(p, 0.3);
    for (double z : {0.0, 0.4, 0.9}) {
      EXPECT_NEAR(pgf(t, z), pgf(p, 1.0 - 0.3 * (1.0 - z)), 1e-14) << p.describe();
    }
  }
}

TEST(Translate, AndConvolve) {
  const DSParams p = validate_ds(2.0, 1.0, 3.0);
  EXPECT_DOUBLE_EQ(translate_params(p, 1.5).delta(), 4.5);
  EXPECT_DOUBLE_EQ(translate_params(p, -1.0).delta(), 2.0);
  EXPECT_THROW(translate_params(p, -1.5), Error);

  const DSParams q = validate_ds(2.0, 0.5, 1.0);
  const DSParams s = convolve_params(p, q);
  for (double z : {0.0, 0.5}) EXPECT_NEAR(pgf(s, z), pgf(p, z) * pgf(q, z), 1e-15);
  EXPECT_THROW(convolve_params(p, validate_ds(1.5, 1.0, 2.0)), Error);
}

TEST(Stability, MuSign) {
  // mu >= 0 exactly when the law is not a shifted strict alpha < 1 one.
  for (const DSParams& p : sample_grid()) {
    for (double rho = 0.1; rho < 0.95; rho += 0.1) {
      const double mu = stability_mu(p, rho);
      if (p.alpha() < 1.0 && p.delta() > 0.0) {
        EXPECT_LT(mu, 0.0) << p.describe();
      } else {
        EXPECT_GE(mu, 0.0) << p.describe();
      }
    }
  }
  EXPECT_EQ(stability_mu(validate_ds(0.5, -1.0, 0.0), 0.3), 0.0);
  EXPECT_EQ(stability_mu(validate_ds(1.0, 0.0, 2.0), 0.3), 0.0);
}

TEST(Stability, ResidualSmallAndMuMatters) {
  const auto grid = default_stability_grid();
  ASSERT_EQ(grid.size(), 11u);
  EXPECT_EQ(grid.back(), 0.99);
  for (const DSParams& p : sample_grid()) {
    for (double rho : {0.1, 0.5, 0.9}) {
      EXPECT_LT(stability_residual(p, rho, grid).max_residual, 1e-12) << p.describe();
    }
  }
  const DSParams h = validate_ds(2.0, 1.0, 4.0);
  EXPECT_GT(stability_residual(h, 0.6, grid, 0.0).max_residual, 1e-3);
}

TEST(SelfDecomposition, RemainderPgfFactor) {
  // G(z) = G(1 - rho(1-z)) * G_rem(z).
  const DSParams p = validate_ds(1.5, 1.0, 3.0);
  for (double rho : {0.2, 0.7}) {
    const DSParams r = selfdecomp_remainder(p, rho);
    for (double z : {0.0, 0.5, 0.95}) {
      EXPECT_NEAR(pgf(p, z), pgf(p, 1.0 - rho * (1.0 - z)) * pgf(r, z), 1e-14);
    }
  }
  const DSParams u = validate_ds(1.0, 1.0, 2.5);
  const DSParams ur = selfdecomp_remainder(u, 0.4);
  for (double z : {0.0, 0.5}) {
    EXPECT_NEAR(pgf(u, z), pgf(u, 1.0 - 0.4 * (1.0 - z)) * pgf(ur, z), 1e-14);
  }
}

TEST(SelfDecomposition, FailsOutsideRegion) {
  const DSParams h = validate_ds(2.0, 1.0, 2.0);
  EXPECT_THROW(selfdecomp_remainder(h, 0.5), Error);
  EXPECT_EQ(selfdecomp_remainder(h, 0.0), h);
}
