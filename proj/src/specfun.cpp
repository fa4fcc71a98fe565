#include "rvar/specfun.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "rvar/errors.hpp"

namespace rvar::specfun {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr int kMaxIter = 10000;

[[noreturn]] void not_converged(const char* what) {
  throw DomainError(std::string(what) + ": series/continued fraction did not converge");
}

// Modified Lentz evaluation of the continued fraction for Gamma(s, a);
// converges for every real s once a is not small.
double gamma_continued_fraction(double s, double a) {
  double b = a + 1.0 - s;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return std::exp(-a + s * std::log(a)) * h;
  }
  not_converged("upper_incomplete_gamma");
}

// Gamma(s) - gamma(s, a) using the power series of the lower function.
// Used only for s >= 1 and a < s + 1, where no cancellation occurs.
double gamma_via_lower_series(double s, double a) {
  double ap = s;
  double del = 1.0 / s;
  double sum = del;
  for (int n = 0; n < kMaxIter; ++n) {
    ap += 1.0;
    del *= a / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kEps) {
      const double lower = sum * std::exp(-a + s * std::log(a));
      return std::tgamma(s) - lower;
    }
  }
  not_converged("upper_incomplete_gamma");
}

// For |s| < 1 and a < 1:
//   Gamma(s, a) = (Gamma(1+s) - 1)/s - (a^s - 1)/s - a^s sum_{k>=1} (-a)^k / (k! (s+k)).
// Both leading quotients have finite limits at s = 0 (-gamma and ln a).
double gamma_small_argument(double s, double a) {
  const double log_a = std::log(a);
  const double g1 = (s == 0.0) ? -euler_gamma : boost::math::tgamma1pm1(s) / s;
  const double h = (s == 0.0) ? log_a : std::expm1(s * log_a) / s;
  double term = 1.0;
  double sum = 0.0;
  for (int k = 1; k < kMaxIter; ++k) {
    term *= -a / k;
    const double add = term / (s + k);
    sum += add;
    if (std::fabs(add) < kEps * std::fabs(sum)) break;
  }
  const double a_pow_s = std::exp(s * log_a);
  return g1 - h - a_pow_s * sum;
}

}  // namespace

double upper_incomplete_gamma(double s, double a) {
  if (std::isnan(s) || std::isnan(a)) throw DomainError("upper_incomplete_gamma: NaN argument");
  if (a < 0.0) throw DomainError("upper_incomplete_gamma: a must be >= 0");
  if (a == 0.0) {
    if (s <= 0.0) throw DomainError("upper_incomplete_gamma: Gamma(s, 0) diverges for s <= 0");
    return std::tgamma(s);
  }
  if (std::isinf(a)) return 0.0;
  if (a >= 1.0 && (a >= s + 1.0 || s < 1.0)) return gamma_continued_fraction(s, a);
  if (s >= 1.0) return gamma_via_lower_series(s, a);
  if (s > -1.0) return gamma_small_argument(s, a);

  // s <= -1, a < 1: recur downward from s + n in (-1, 0].
  const int steps = static_cast<int>(std::floor(-s));
  double sc = s + steps;
  double value = gamma_small_argument(sc, a);
  const double e_a = std::exp(-a);
  for (int i = 0; i < steps; ++i) {
    sc -= 1.0;
    value = (value - std::pow(a, sc) * e_a) / sc;
  }
  return value;
}

double exp_integral_e1(double x) {
  if (!(x > 0.0)) throw DomainError("exp_integral_e1: x must be > 0");
  if (std::isinf(x)) return 0.0;
  if (x <= 1.0) {
    double term = 1.0;
    double sum = 0.0;
    for (int k = 1; k < kMaxIter; ++k) {
      term *= -x / k;
      const double add = term / k;
      sum += add;
      if (std::fabs(add) < kEps * std::fabs(sum)) break;
    }
    return -euler_gamma - std::log(x) - sum;
  }
  double b = x + 1.0;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h * std::exp(-x);
  }
  not_converged("exp_integral_e1");
}

double exp_integral_ei(double x) {
  if (std::isnan(x) || x == 0.0) throw DomainError("exp_integral_ei: x must be nonzero");
  if (x < 0.0) return -exp_integral_e1(-x);
  if (x <= 40.0) {
    double term = 1.0;
    double sum = 0.0;
    for (int k = 1; k < kMaxIter; ++k) {
      term *= x / k;
      const double add = term / k;
      sum += add;
      if (add < kEps * sum) break;
    }
    return euler_gamma + std::log(x) + sum;
  }
  // Asymptotic expansion; stop at the smallest term.
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 100; ++k) {
    const double next = term * k / x;
    if (next > term) break;
    term = next;
    sum += term;
    if (term < kEps * sum) break;
  }
  return std::exp(x) / x * sum;
}

double log_integral(double x) {
  if (std::isnan(x) || x < 0.0) throw DomainError("log_integral: x must be in [0, 1)");
  if (x > 1.0 - 1e-12) throw DomainError("log_integral: singular at x = 1");
  if (x == 0.0) return 0.0;
  return exp_integral_ei(std::log(x));
}

}  // namespace rvar::specfun
