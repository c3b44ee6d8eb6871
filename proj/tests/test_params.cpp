#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>

#include <gtest/gtest.h>

#include "dstable/params.hpp"

using namespace dstable;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected dstable::Error";
  return Errc::InternalConsistency;
}

}  // namespace

TEST(Validate, AcceptsEachRegime) {
  EXPECT_NO_THROW(validate_ds(0.5, -1.0, 0.0));
  EXPECT_NO_THROW(validate_ds(0.5, -1.0, -0.5));  // delta == alpha*gamma
  EXPECT_NO_THROW(validate_ds(1.0, 0.0, 0.0));
  EXPECT_NO_THROW(validate_ds(1.0, 0.0, 3.0));
  EXPECT_NO_THROW(validate_ds(1.0, 1.0, 1.0));
  EXPECT_NO_THROW(validate_ds(1.5, 1.0, 1.5));
  EXPECT_NO_THROW(validate_ds(2.0, 1.0, 2.0));
}

TEST(Validate, AlphaRange) {
  for (double a : {0.0, -0.1, 2.0000001, 3.0, std::numeric_limits<double>::quiet_NaN()}) {
    EXPECT_EQ(code_of([&] { validate_ds(a, 1.0, 5.0); }), Errc::AlphaOutOfRange) << a;
  }
}

TEST(Validate, GammaSign) {
  EXPECT_EQ(code_of([] { validate_ds(0.5, 1.0, 1.0); }), Errc::GammaSignViolation);
  EXPECT_EQ(code_of([] { validate_ds(1.0, -1.0, 1.0); }), Errc::GammaSignViolation);
  EXPECT_EQ(code_of([] { validate_ds(1.5, -1.0, 1.0); }), Errc::GammaSignViolation);
}

TEST(Validate, ZeroGammaNeedsUnitAlpha) {
  EXPECT_EQ(code_of([] { validate_ds(0.5, 0.0, 1.0); }), Errc::PoissonConventionViolation);
  EXPECT_EQ(code_of([] { validate_ds(2.0, 0.0, 1.0); }), Errc::PoissonConventionViolation);
}

TEST(Validate, DeltaFloor) {
  EXPECT_EQ(code_of([] { validate_ds(0.5, -1.0, -0.6); }), Errc::DeltaBelowAlphaGamma);
  EXPECT_EQ(code_of([] { validate_ds(2.0, 1.0, 1.999); }), Errc::DeltaBelowAlphaGamma);
  EXPECT_EQ(code_of([] { validate_ds(1.0, 1.0, 0.5); }), Errc::DeltaBelowAlphaGamma);
}

TEST(Validate, NonFinite) {
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_EQ(code_of([&] { validate_ds(1.5, inf, inf); }), Errc::DomainError);
  EXPECT_EQ(code_of([&] { validate_ds(1.0, 0.0, std::nan("")); }), Errc::DomainError);
}

TEST(Validate, MessageNamesConstraint) {
  try {
    validate_ds(2.0, 1.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("DeltaBelowAlphaGamma"), std::string::npos);
  }
}

TEST(Validate, NearAlphaOneIsAWarningOnly) {
  const DSParams p = validate_ds(1.0 + 1e-10, 1.0, 3.0);
  EXPECT_TRUE(p.near_alpha_one());
  EXPECT_FALSE(validate_ds(1.0, 1.0, 3.0).near_alpha_one());
}

TEST(BSib, RhoRanges) {
  EXPECT_NO_THROW(validate_bsib(0.5, -1.0));
  EXPECT_NO_THROW(validate_bsib(0.5, 0.0));
  EXPECT_EQ(code_of([] { validate_bsib(0.5, -1.01); }), Errc::RhoOutOfRange);
  EXPECT_EQ(code_of([] { validate_bsib(0.5, 1.0); }), Errc::RhoOutOfRange);
  EXPECT_NO_THROW(validate_bsib(1.0, 0.0));
  EXPECT_NO_THROW(validate_bsib(1.0, 1.0));
  EXPECT_EQ(code_of([] { validate_bsib(1.0, 1.1); }), Errc::RhoOutOfRange);
  EXPECT_NO_THROW(validate_bsib(1.5, 3.0));
  EXPECT_EQ(code_of([] { validate_bsib(1.5, 1.0); }), Errc::RhoOutOfRange);
  EXPECT_EQ(code_of([] { validate_bsib(1.5, 3.01); }), Errc::RhoOutOfRange);
  EXPECT_NO_THROW(validate_bsib(2.0, 2.0));
}

TEST(Compound, KnownMaps) {
  const CompoundRep c = ds_to_compound(validate_ds(2.0, 1.0, 3.0));
  EXPECT_DOUBLE_EQ(c.lambda, 2.0);
  EXPECT_DOUBLE_EQ(c.summand.rho(), 1.5);

  const CompoundRep u = ds_to_compound(validate_ds(1.0, 1.0, 2.0));
  EXPECT_DOUBLE_EQ(u.lambda, 2.0);
  EXPECT_DOUBLE_EQ(u.summand.rho(), 0.5);

  const CompoundRep poi = ds_to_compound(validate_ds(1.0, 0.0, 4.0));
  EXPECT_DOUBLE_EQ(poi.lambda, 4.0);
  EXPECT_EQ(poi.summand.rho(), 0.0);

  EXPECT_EQ(code_of([] { ds_to_compound(validate_ds(1.0, 0.0, 0.0)); }),
            Errc::DegenerateDistribution);
}

class RoundTrip : public ::testing::TestWithParam<std::tuple<double, double, double>> {};

TEST_P(RoundTrip, CompoundAndBack) {
  const auto [a, g, d] = GetParam();
  const DSParams p = validate_ds(a, g, d);
  const DSParams q = compound_to_ds(ds_to_compound(p));
  EXPECT_NEAR(q.alpha(), a, 0.0);
  EXPECT_NEAR(q.gamma(), g, 1e-14 * (1.0 + std::abs(g)));
  EXPECT_NEAR(q.delta(), d, 1e-14 * (1.0 + std::abs(d)));
}

TEST_P(RoundTrip, ExtremeStableAndBack) {
  const auto [a, g, d] = GetParam();
  const DSParams p = validate_ds(a, g, d);
  const DSParams q = es_to_ds(ds_to_es(p));
  EXPECT_NEAR(q.gamma(), g, 1e-12 * (1.0 + std::abs(g)));
  EXPECT_EQ(q.delta(), d);
}

INSTANTIATE_TEST_SUITE_P(Grid, RoundTrip,
                         ::testing::Values(std::tuple{0.3, -1.0, 0.0}, std::tuple{0.7, -2.0, -1.4},
                                           std::tuple{0.5, -1.0, 2.0}, std::tuple{1.0, 1.0, 1.0},
                                           std::tuple{1.0, 0.5, 3.0}, std::tuple{1.3, 1.0, 1.3},
                                           std::tuple{1.5, 2.0, 7.0}, std::tuple{2.0, 1.0, 2.0},
                                           std::tuple{2.0, 0.5, 4.0}));

TEST(ExtremeStable, UnitAlphaScale) {
  const DSParams p = es_to_ds(ESParams{1.0, std::numbers::pi / 2.0, 3.0});
  EXPECT_DOUBLE_EQ(p.gamma(), 1.0);
}

TEST(ExtremeStable, GammaFromSecant) {
  // alpha = 0.5: sec(pi/4) = sqrt(2), so gamma = -sqrt(2) sigma^0.5.
  const DSParams p = es_to_ds(ESParams{0.5, 4.0, 0.0});
  EXPECT_NEAR(p.gamma(), -2.0 * std::sqrt(2.0), 1e-14);
  // alpha = 2: sec(pi) = -1, so gamma = sigma^2.
  const DSParams h = es_to_ds(ESParams{2.0, 3.0, 20.0});
  EXPECT_NEAR(h.gamma(), 9.0, 1e-13);
}

TEST(ExtremeStable, LocationTooSmall) {
  EXPECT_EQ(code_of([] { es_to_ds(ESParams{2.0, 1.0, 1.0}); }), Errc::DeltaLimViolation);
}

TEST(Classify, Flags) {
  const Classification strict = classify(validate_ds(0.5, -1.0, 0.0));
  EXPECT_TRUE(strict.strict);
  EXPECT_TRUE(strict.self_decomposable);
  EXPECT_FALSE(strict.mean_finite);
  EXPECT_FALSE(strict.variance_finite);

  const Classification poi = classify(validate_ds(1.0, 0.0, 2.0));
  EXPECT_TRUE(poi.is_poisson);
  EXPECT_TRUE(poi.strict);
  EXPECT_TRUE(poi.mean_finite);
  EXPECT_TRUE(poi.variance_finite);

  const Classification point = classify(validate_ds(1.0, 0.0, 0.0));
  EXPECT_TRUE(point.is_degenerate);
  EXPECT_FALSE(point.is_poisson);

  const Classification herm = classify(validate_ds(2.0, 1.0, 2.0));
  EXPECT_FALSE(herm.self_decomposable);
  EXPECT_TRUE(herm.mean_finite);
  EXPECT_TRUE(herm.variance_finite);

  const Classification mid = classify(validate_ds(1.5, 1.0, 3.0));
  EXPECT_TRUE(mid.self_decomposable);
  EXPECT_TRUE(mid.mean_finite);
  EXPECT_FALSE(mid.variance_finite);
  EXPECT_FALSE(mid.strict);
}

TEST(Classify, SelfDecomposableBoundary) {
  EXPECT_TRUE(classify(validate_ds(1.5, 1.0, 2.25)).self_decomposable);
  EXPECT_FALSE(classify(validate_ds(1.5, 1.0, 2.2)).self_decomposable);
  EXPECT_TRUE(classify(validate_ds(1.0, 1.0, 2.0)).self_decomposable);
  EXPECT_FALSE(classify(validate_ds(1.0, 1.0, 1.99)).self_decomposable);
}

TEST(Describe, Format) {
  EXPECT_EQ(validate_ds(2.0, 1.0, 3.0).describe(), "DS(2, 1, 3)");
  EXPECT_EQ(validate_bsib(0.5, 0.0).describe(), "bSib(0.5, 0)");
}
