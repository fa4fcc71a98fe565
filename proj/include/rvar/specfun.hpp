#pragma once

// Special functions used by the extreme-value closed forms.
//
// All functions are pure and throw rvar::DomainError outside their domain.

namespace rvar::specfun {

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

// Upper incomplete gamma function Gamma(s, a) = int_a^inf t^(s-1) e^(-t) dt.
// Any real s is accepted for a > 0 (analytic continuation in s); a = 0
// requires s > 0 and yields Gamma(s).
double upper_incomplete_gamma(double s, double a);

// Logarithmic integral li(x) = int_0^x dt / ln t on [0, 1 - 1e-12].
double log_integral(double x);

// Exponential integral Ei(x) = -PV int_{-x}^inf e^(-t)/t dt, x != 0.
double exp_integral_ei(double x);

// E1(x) = int_x^inf e^(-t)/t dt for x > 0. Equals -Ei(-x).
double exp_integral_e1(double x);

}  // namespace rvar::specfun
