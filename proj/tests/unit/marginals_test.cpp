#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rvar/errors.hpp"
#include "rvar/marginals.hpp"
#include "rvar/specfun.hpp"

using namespace rvar;

namespace {

void expect_rel(double got, double want, double tol) { EXPECT_NEAR(got, want, tol * std::fabs(want)) << want; }

std::vector<MarginalModel> full_laws() {
  return {Gev{0, 1, 0.5},      Gev{1, 2, -0.3},    Gev{0, 1, 0},    Gev{-1, 0.5, 1.2}, Weibull{2, 50},
          Weibull{0.7, 3},     Exponential{2.5},   Uniform{-1, 3},  ComonotoneSum{{Exponential{1}, Gev{0, 1, 0.2}}}};
}

}  // namespace

TEST(Marginals, RejectsInvalidParameters) {
  EXPECT_THROW(MarginalModel(Gev{0, 0, 0.1}), DomainError);
  EXPECT_THROW(MarginalModel(GpdTail{0, 1, 0.1, 0.0}), DomainError);
  EXPECT_THROW(MarginalModel(GpdTail{0, 1, 0.1, 1.5}), DomainError);
  EXPECT_THROW(MarginalModel(Weibull{-1, 1}), DomainError);
  EXPECT_THROW(MarginalModel(Exponential{0}), DomainError);
  EXPECT_THROW(MarginalModel(Uniform{1, 1}), DomainError);
  EXPECT_THROW(MarginalModel(ComonotoneSum{}), DomainError);
  EXPECT_THROW(LevelRange(0.9, 0.9), DomainError);
  EXPECT_THROW(LevelRange(-0.1, 0.5), DomainError);
}

TEST(Marginals, QuantileInvertsCdf) {
  for (const auto& m : full_laws()) {
    for (double p : {1e-6, 0.01, 0.3, 0.5, 0.9, 0.999}) {
      const double x = quantile(m, p);
      EXPECT_NEAR(cdf(m, x), p, 1e-12 + 1e-9 * p) << m.describe() << " p=" << p;
    }
    for (double w : {1e-12, 1e-6, 0.05}) {
      const double x = upper_quantile(m, w);
      // Bounded supports cannot resolve w below the spacing of doubles near the endpoint.
      const double ulp_step = std::fabs(survival(m, std::nextafter(x, INFINITY)) - survival(m, x));
      EXPECT_NEAR(survival(m, x), w, 1e-9 * w + 2.0 * ulp_step) << m.describe() << " w=" << w;
    }
  }
}

TEST(Marginals, FrozenQuantiles) {
  expect_rel(quantile(MarginalModel(Gev{0, 1, 0.5}), 0.95), 6.830792885, 1e-9);
  expect_rel(quantile(MarginalModel(GpdTail{10, 2, 0.25, 0.05}), 0.99), 13.96279025, 1e-9);
  // e^-1 is the GEV(0,1,0) cdf at the origin.
  EXPECT_NEAR(quantile(MarginalModel(Gev{0, 1, 0}), std::exp(-1.0)), 0.0, 1e-14);
}

TEST(Marginals, GpdTailQuantileBelowThresholdIsUndefined) {
  const MarginalModel g(GpdTail{10, 2, 0.25, 0.05});
  EXPECT_THROW(quantile(g, 0.9), DomainError);
  EXPECT_NEAR(uni_var(g, 0.95), 10.0, 1e-12);
}

TEST(Marginals, SupportEnds) {
  EXPECT_EQ(lower_support(MarginalModel(Weibull{2, 1})), 0.0);
  EXPECT_TRUE(std::isinf(upper_support(MarginalModel(Weibull{2, 1}))));
  EXPECT_NEAR(upper_support(MarginalModel(Gev{0, 1, -0.5})), 2.0, 1e-15);
  EXPECT_NEAR(lower_support(MarginalModel(Gev{0, 1, 0.5})), -2.0, 1e-15);
}

TEST(Marginals, Means) {
  expect_rel(mean(MarginalModel(Gev{0, 1, 0})).value(), rvar::specfun::euler_gamma, 1e-14);
  expect_rel(mean(MarginalModel(Exponential{4})).value(), 0.25, 1e-15);
  expect_rel(mean(MarginalModel(GpdTail{10, 2, 0.25, 0.05})).value(), 10.0 + 2.0 / 0.75, 1e-14);
  EXPECT_TRUE(mean(MarginalModel(Gev{0, 1, 1.0})).diverges());
  expect_rel(mean(MarginalModel(ComonotoneSum{{Exponential{1}, Exponential{2}}})).value(), 1.5, 1e-14);
}

TEST(Marginals, FrozenRiskValues) {
  const MarginalModel g(GpdTail{10, 2, 0.25, 0.05});
  expect_rel(uni_tvar(g, 0.99).value(), 17.950387, 1e-7);
  expect_rel(uni_rvar(g, LevelRange(0.99, 0.999)), 16.57106947, 1e-9);
  expect_rel(uni_rvar(MarginalModel(GpdTail{10, 2, 1.2, 0.05}), LevelRange(0.99, 0.999)), 45.6941891863583, 1e-12);
}

TEST(Marginals, ClosedFormsMatchOracleQuadrature) {
  const LevelRange ranges[] = {{0.9, 0.95}, {0.95, 0.99}, {0.99, 0.999}, {0.1, 0.6}};
  for (double xi : {-0.5, -0.2, -1e-9, 1e-9, 0.0, 0.2, 0.5, 0.9, 1.5}) {
    const MarginalModel m(Gev{0.3, 1.4, xi});
    for (const auto& r : ranges) expect_rel(uni_rvar(m, r), oracle::uni_rvar(m, r.alpha1, r.alpha2), 1e-9);
  }
  for (double xi : {-0.5, 0.0, 0.25, 0.5, 0.9, 1.2}) {
    const MarginalModel m(GpdTail{10, 2, xi, 0.08});
    for (const auto& r : ranges) {
      if (r.alpha1 < 0.92) continue;
      expect_rel(uni_rvar(m, r), oracle::uni_rvar(m, r.alpha1, r.alpha2), 1e-9);
    }
  }
  for (const auto& m : full_laws())
    expect_rel(uni_rvar(m, LevelRange(0.2, 0.97)), oracle::uni_rvar(m, 0.2, 0.97), 1e-9);
}

TEST(Marginals, TvarMatchesOracleWhenFinite) {
  for (double xi : {-0.5, 0.3, 0.8}) {
    const MarginalModel m(Gev{0, 1, xi});
    expect_rel(uni_tvar(m, 0.95).value(), oracle::uni_tvar(m, 0.95), 1e-9);
  }
  const MarginalModel w(Weibull{1.5, 20});
  expect_rel(uni_tvar(w, 0.9).value(), oracle::uni_tvar(w, 0.9), 1e-9);
}

TEST(Marginals, TvarDivergesForHeavyTails) {
  EXPECT_TRUE(uni_tvar(MarginalModel(Gev{0, 1, 1.2}), 0.99).diverges());
  EXPECT_TRUE(uni_tvar(MarginalModel(GpdTail{10, 2, 1.2, 0.05}), 0.99).diverges());
  EXPECT_FALSE(uni_tvar(MarginalModel(GpdTail{10, 2, 0.9, 0.05}), 0.99).diverges());
}

TEST(Marginals, GumbelTvarUsesDivergenceMarker) {
  // The xi = 0 GEV tail integral is finite; the marker follows the
  // closed-form convention. Reference value from quadrature.
  const MarginalModel g(Gev{0, 1, 0});
  EXPECT_TRUE(uni_tvar(g, 0.95).diverges());
  expect_rel(oracle::uni_tvar(g, 0.95), 3.98305464369404, 1e-12);
}

TEST(Marginals, RvarLiesBetweenEdgeQuantiles) {
  for (const auto& m : full_laws()) {
    const double r = uni_rvar(m, LevelRange(0.9, 0.99));
    EXPECT_GE(r, uni_var(m, 0.9));
    EXPECT_LE(r, uni_var(m, 0.99));
  }
}

TEST(Marginals, AffineEquivariance) {
  const MarginalModel m(Gev{0.5, 2, 0.3});
  const MarginalModel t = m.affine(3.0, 2.5);
  const LevelRange r(0.9, 0.99);
  EXPECT_NEAR(uni_rvar(t, r), 3.0 + 2.5 * uni_rvar(m, r), 1e-11);
  EXPECT_NEAR(uni_var(t, 0.7), 3.0 + 2.5 * uni_var(m, 0.7), 1e-12);
  EXPECT_THROW(MarginalModel(Weibull{2, 1}).affine(1.0, 1.0), DomainError);
  EXPECT_NEAR(uni_var(MarginalModel(Weibull{2, 1}).affine(0.0, 3.0), 0.5), 3.0 * uni_var(MarginalModel(Weibull{2, 1}), 0.5),
              1e-13);
}

TEST(Marginals, ComonotoneSumIsAdditive) {
  const MarginalModel a(Exponential{1}), b(Gev{0, 1, 0.2});
  const MarginalModel s(ComonotoneSum{{a, b}});
  const LevelRange r(0.95, 0.99);
  EXPECT_NEAR(quantile(s, 0.8), quantile(a, 0.8) + quantile(b, 0.8), 1e-12);
  EXPECT_NEAR(uni_rvar(s, r), uni_rvar(a, r) + uni_rvar(b, r), 1e-11);
  EXPECT_NEAR(cdf(s, quantile(s, 0.37)), 0.37, 1e-12);
}

TEST(Marginals, RatioLimits) {
  for (double xi : {0.25, 0.5}) {
    EXPECT_NEAR(tvar_var_ratio(MarginalModel(Gev{1.0 / xi, 1, xi}), 1 - 1e-6), 1.0 / (1.0 - xi), 1e-3);
    EXPECT_NEAR(tvar_var_ratio(MarginalModel(GpdTail{1.0 / xi, 1, xi, 0.05}), 1 - 1e-6), 1.0 / (1.0 - xi), 1e-3);
    EXPECT_NEAR(ratio_limit(MarginalModel(Gev{0, 1, xi})), 1.0 / (1.0 - xi), 1e-15);
  }
  EXPECT_NEAR(tvar_var_ratio(MarginalModel(Gev{0, 1, -0.5}), 1 - 1e-6), 1.0, 1e-3);
  EXPECT_NEAR(ratio_limit(MarginalModel(GpdTail{10, 2, -0.5, 0.05})), 1.0, 1e-15);
  // Without location normalization the GPD ratio at 1 - 1e-6 is still
  // 5.5e-3 away from the limit.
  EXPECT_NEAR(tvar_var_ratio(MarginalModel(GpdTail{10, 2, 0.25, 0.05}), 1 - 1e-6), 1.327852135, 1e-8);
}
