#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rvar/errors.hpp"
#include "rvar/specfun.hpp"

using namespace rvar::specfun;

namespace {

void expect_rel(double got, double want, double tol) { EXPECT_NEAR(got, want, tol * std::fabs(want)) << want; }

}  // namespace

// Reference values from mpmath at 30 digits.
TEST(UpperIncompleteGamma, MatchesFrozenValues) {
  expect_rel(upper_incomplete_gamma(-0.2, 0.001), 14.0891851930639383572, 1e-12);
  expect_rel(upper_incomplete_gamma(2.5, 3.0), 0.407069175871302998434, 1e-13);
  expect_rel(upper_incomplete_gamma(-1.0, 0.5), 0.653287724649106035461, 1e-13);
  expect_rel(upper_incomplete_gamma(-2.7, 4.0), 5.95949454460477661885e-5, 1e-12);
  expect_rel(upper_incomplete_gamma(0.5, 0.01), 1.57311852232484332472, 1e-13);
  expect_rel(upper_incomplete_gamma(0.0, 2.0), 0.0489005107080611195672, 1e-13);
  expect_rel(upper_incomplete_gamma(30.0, 20.0), 8.64885050725108312557e30, 1e-12);
}

TEST(UpperIncompleteGamma, MatchesQuadratureForPositiveShape) {
  for (double s : {0.3, 1.0, 1.7, 4.2}) {
    for (double a : {0.05, 0.9, 3.0}) {
      boost::math::quadrature::exp_sinh<double> es;
      const double want = es.integrate([&](double t) {
        const double y = t + a;
        return y > 1e3 ? 0.0 : std::exp((s - 1.0) * std::log(y) - y);
      });
      expect_rel(upper_incomplete_gamma(s, a), want, 1e-11);
    }
  }
}

TEST(UpperIncompleteGamma, RecurrenceHoldsForNegativeShape) {
  // Gamma(s+1, a) = s Gamma(s, a) + a^s e^-a
  for (double s : {-0.5, -1.3, -2.0, -3.6}) {
    const double a = 1.7;
    expect_rel(upper_incomplete_gamma(s + 1.0, a), s * upper_incomplete_gamma(s, a) + std::pow(a, s) * std::exp(-a),
               1e-12);
  }
}

TEST(UpperIncompleteGamma, Edges) {
  expect_rel(upper_incomplete_gamma(3.0, 0.0), 2.0, 1e-15);
  EXPECT_EQ(upper_incomplete_gamma(1.5, INFINITY), 0.0);
  EXPECT_THROW(upper_incomplete_gamma(-0.5, 0.0), rvar::DomainError);
  EXPECT_THROW(upper_incomplete_gamma(1.0, -1.0), rvar::DomainError);
}

TEST(LogIntegral, MatchesFrozenValues) {
  expect_rel(log_integral(0.5), -0.378671043061087976727, 1e-13);
  expect_rel(log_integral(0.99), -4.03295870170846279603, 1e-13);
  expect_rel(log_integral(0.1), -0.0323897895932910241074, 1e-13);
  EXPECT_EQ(log_integral(0.0), 0.0);
  EXPECT_THROW(log_integral(1.0), rvar::DomainError);
  EXPECT_THROW(log_integral(-0.1), rvar::DomainError);
}

TEST(ExponentialIntegral, MatchesFrozenValues) {
  expect_rel(exp_integral_ei(1.0), 1.89511781635593675547, 1e-14);
  expect_rel(exp_integral_ei(-2.5), -0.0249149178702697354956, 1e-13);
  expect_rel(exp_integral_ei(50.0), 1.05856368971316909631e20, 1e-13);
  expect_rel(exp_integral_e1(1.0), 0.219383934395520273677, 1e-14);
  expect_rel(exp_integral_e1(1e-6), 13.2382958930624912888, 1e-14);
  expect_rel(exp_integral_e1(30.0), 3.02155201068881254482e-15, 1e-13);
  EXPECT_THROW(exp_integral_ei(0.0), rvar::DomainError);
  EXPECT_THROW(exp_integral_e1(0.0), rvar::DomainError);
}

TEST(ExponentialIntegral, E1IsMinusEiOfNegative) {
  for (double x : {0.01, 0.7, 3.0, 12.0, 45.0}) expect_rel(exp_integral_e1(x), -exp_integral_ei(-x), 1e-14);
}

TEST(ExponentialIntegral, E1EqualsGammaZero) {
  for (double x : {0.2, 1.5, 8.0}) expect_rel(exp_integral_e1(x), upper_incomplete_gamma(0.0, x), 1e-13);
}
