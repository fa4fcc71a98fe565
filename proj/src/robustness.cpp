#include "rvar/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rvar/errors.hpp"
#include "rvar/orthant.hpp"

namespace rvar {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double oriented_cdf(const BivariateModel& b, double x, double y, Component fixed) {
  return fixed == Component::first ? joint_cdf(b, x, y) : joint_cdf(b, y, x);
}

double oriented_survival(const BivariateModel& b, double x, double y, Component fixed) {
  return fixed == Component::first ? joint_survival(b, x, y) : joint_survival(b, y, x);
}

double step_at(double y) { return 1e-6 * std::max(1.0, std::fabs(y)); }

// d/dy P(X_j <= y | X_i <= x).
double lower_conditional_density(const BivariateModel& b, double x, double y, double mass, Component fixed) {
  const double h = step_at(y);
  const double d = (oriented_cdf(b, x, y + h, fixed) - oriented_cdf(b, x, y - h, fixed)) / (2.0 * h * mass);
  if (!(d > 0.0) || !std::isfinite(d)) throw ZeroDensity("conditional density vanishes at the lower VaR point");
  return d;
}

// d/dy P(X_j <= y | X_i > x).
double upper_conditional_density(const BivariateModel& b, double x, double y, double mass, Component fixed) {
  const double h = step_at(y);
  const double d =
      (oriented_survival(b, x, y - h, fixed) - oriented_survival(b, x, y + h, fixed)) / (2.0 * h * (1.0 - mass));
  if (!(d > 0.0) || !std::isfinite(d)) throw ZeroDensity("conditional density vanishes at the upper VaR point");
  return d;
}

SensitivityFunction var_function(SensitivityTarget t, double y, double below, double above, double f) {
  return SensitivityFunction{t, y, y, below, 0.0, 0.0, above, y, f};
}

// Lower RVaR over [a1, B]; `value` is the measure itself. The tails are
// constant only when the level interval stays inside (0, A).
SensitivityFunction lower_integral_function(SensitivityTarget t, const BivariateModel& b, double a1, double a2,
                                            double x, Component fixed, double value) {
  const double mass = conditioning_mass(b, x, fixed);
  const double top = lower_band_top(b, a2, x, fixed);
  const double width = top - a1;
  const bool open_lo = a1 > 0.0;
  const bool open_hi = top < mass;
  const double l1 = open_lo ? lower_var(b, a1, x, fixed) : -kInf;
  const double v2 = open_hi ? uni_var(b.margin(other(fixed)), a2) : kInf;
  const double low_term = open_lo ? a1 * l1 : 0.0;
  const double high_term = open_hi ? (mass - top) * v2 : 0.0;
  SensitivityFunction s{};
  s.target = t;
  s.lo = l1;
  s.hi = v2;
  s.slope = mass / width;
  s.offset = (-low_term - high_term) / width - value;
  s.below = open_lo ? ((mass - a1) * l1 - high_term) / width - value : -kInf;
  s.above = open_hi ? (top * v2 - low_term) / width - value : kInf;
  s.measure = value;
  return s;
}

// Upper RVaR over [C, a2].
SensitivityFunction upper_integral_function(SensitivityTarget t, const BivariateModel& b, double a1, double a2,
                                            double x, Component fixed, double value) {
  const double mass = conditioning_mass(b, x, fixed);
  const double bottom = upper_band_bottom(b, a1, x, fixed);
  const double width = a2 - bottom;
  const bool open_lo = bottom > mass;
  const bool open_hi = a2 < 1.0;
  const double v1 = open_lo ? uni_var(b.margin(other(fixed)), a1) : -kInf;
  const double u2 = open_hi ? upper_var(b, a2, x, fixed) : kInf;
  const double low_term = open_lo ? (bottom - mass) * v1 : 0.0;
  const double high_term = open_hi ? (1.0 - a2) * u2 : 0.0;
  SensitivityFunction s{};
  s.target = t;
  s.lo = v1;
  s.hi = u2;
  s.slope = (1.0 - mass) / width;
  s.offset = (-low_term - high_term) / width - value;
  s.below = open_lo ? ((1.0 - bottom) * v1 - high_term) / width - value : -kInf;
  s.above = open_hi ? ((a2 - mass) * u2 - low_term) / width - value : kInf;
  s.measure = value;
  return s;
}

}  // namespace

std::string to_string(SensitivityTarget t) { return to_string(static_cast<CurveKind>(t)); }

SensitivityTarget parse_sensitivity_target(const std::string& name) {
  return static_cast<SensitivityTarget>(parse_curve_kind(name));
}

std::string to_string(Branch b) {
  switch (b) {
    case Branch::below: return "below";
    case Branch::at: return "at";
    case Branch::middle: return "middle";
    case Branch::above: return "above";
  }
  return "?";
}

double SensitivityFunction::operator()(double z) const {
  switch (branch(z)) {
    case Branch::below: return below;
    case Branch::above: return above;
    case Branch::at: return 0.0;
    case Branch::middle: return slope * z + offset;
  }
  return 0.0;
}

Branch SensitivityFunction::branch(double z) const {
  if (z < lo) return Branch::below;
  if (z > hi) return Branch::above;
  if (lo == hi) return Branch::at;
  return Branch::middle;
}

bool SensitivityFunction::bounded() const { return std::isfinite(below) && std::isfinite(above); }

double SensitivityFunction::sup_abs() const {
  if (!bounded()) return kInf;
  return std::max(std::fabs(below), std::fabs(above));
}

SensitivityFunction lower_var_sensitivity(const BivariateModel& b, double alpha, double x_fixed, Component fixed) {
  const double mass = conditioning_mass(b, x_fixed, fixed);
  const double y = lower_var(b, alpha, x_fixed, fixed);
  const double f = lower_conditional_density(b, x_fixed, y, mass, fixed);
  return var_function(SensitivityTarget::lower_var, y, -(mass - alpha) / (f * mass), alpha / (f * mass), f);
}

SensitivityFunction upper_var_sensitivity(const BivariateModel& b, double alpha, double x_fixed, Component fixed) {
  const double mass = conditioning_mass(b, x_fixed, fixed);
  const double y = upper_var(b, alpha, x_fixed, fixed);
  const double f = upper_conditional_density(b, x_fixed, y, mass, fixed);
  const double scale = f * (1.0 - mass);
  return var_function(SensitivityTarget::upper_var, y, -(1.0 - alpha) / scale, (alpha - mass) / scale, f);
}

SensitivityFunction lower_rvar_sensitivity(const BivariateModel& b, const LevelRange& range, double x_fixed,
                                           Component fixed) {
  const double value = lower_rvar(b, range, x_fixed, fixed);
  return lower_integral_function(SensitivityTarget::lower_rvar, b, range.alpha1, range.alpha2, x_fixed, fixed,
                                 value);
}

SensitivityFunction upper_rvar_sensitivity(const BivariateModel& b, const LevelRange& range, double x_fixed,
                                           Component fixed) {
  const double value = upper_rvar(b, range, x_fixed, fixed);
  return upper_integral_function(SensitivityTarget::upper_rvar, b, range.alpha1, range.alpha2, x_fixed, fixed,
                                 value);
}

SensitivityFunction lower_tvar_sensitivity(const BivariateModel& b, double alpha, double x_fixed, Component fixed) {
  const double value = lower_tvar(b, alpha, x_fixed, fixed).value();
  return lower_integral_function(SensitivityTarget::lower_tvar, b, alpha, 1.0, x_fixed, fixed, value);
}

SensitivityFunction upper_tvar_sensitivity(const BivariateModel& b, double alpha, double x_fixed, Component fixed) {
  const double value = upper_tvar(b, alpha, x_fixed, fixed).value();
  return upper_integral_function(SensitivityTarget::upper_tvar, b, alpha, 1.0, x_fixed, fixed, value);
}

SensitivityFunction sensitivity(const BivariateModel& b, SensitivityTarget target, double alpha1, double alpha2,
                                double x_fixed, Component fixed) {
  switch (target) {
    case SensitivityTarget::lower_var: return lower_var_sensitivity(b, alpha1, x_fixed, fixed);
    case SensitivityTarget::upper_var: return upper_var_sensitivity(b, alpha1, x_fixed, fixed);
    case SensitivityTarget::lower_rvar:
      return lower_rvar_sensitivity(b, LevelRange(alpha1, alpha2), x_fixed, fixed);
    case SensitivityTarget::upper_rvar:
      return upper_rvar_sensitivity(b, LevelRange(alpha1, alpha2), x_fixed, fixed);
    case SensitivityTarget::lower_tvar: return lower_tvar_sensitivity(b, alpha1, x_fixed, fixed);
    case SensitivityTarget::upper_tvar: return upper_tvar_sensitivity(b, alpha1, x_fixed, fixed);
  }
  throw DomainError("unknown sensitivity target");
}

double sens_lower_var(const BivariateModel& b, double alpha, double x_fixed, double z, Component fixed) {
  return lower_var_sensitivity(b, alpha, x_fixed, fixed)(z);
}
double sens_upper_var(const BivariateModel& b, double alpha, double x_fixed, double z, Component fixed) {
  return upper_var_sensitivity(b, alpha, x_fixed, fixed)(z);
}
double sens_lower_rvar(const BivariateModel& b, const LevelRange& range, double x_fixed, double z, Component fixed) {
  return lower_rvar_sensitivity(b, range, x_fixed, fixed)(z);
}
double sens_upper_rvar(const BivariateModel& b, const LevelRange& range, double x_fixed, double z, Component fixed) {
  return upper_rvar_sensitivity(b, range, x_fixed, fixed)(z);
}
double sens_lower_tvar(const BivariateModel& b, double alpha, double x_fixed, double z, Component fixed) {
  return lower_tvar_sensitivity(b, alpha, x_fixed, fixed)(z);
}
double sens_upper_tvar(const BivariateModel& b, double alpha, double x_fixed, double z, Component fixed) {
  return upper_tvar_sensitivity(b, alpha, x_fixed, fixed)(z);
}

SensitivityProfile sensitivity_profile(const SensitivityFunction& s, const std::vector<double>& z_grid) {
  SensitivityProfile p{z_grid, {}, {}, s.bounded(), s.sup_abs()};
  for (double z : z_grid) {
    p.values.push_back(s(z));
    p.branches.push_back(s.branch(z));
  }
  return p;
}

std::vector<double> default_z_grid(const SensitivityFunction& s, std::size_t points) {
  if (points < 2) throw DomainError("z grid needs at least two points");
  double lo = s.lo;
  double hi = s.hi;
  const double anchor = std::isfinite(lo) ? lo : (std::isfinite(hi) ? hi : s.measure);
  const double scale = std::max(1.0, std::fabs(anchor));
  if (!std::isfinite(lo)) lo = (std::isfinite(hi) ? hi : anchor) - scale;
  if (!std::isfinite(hi)) hi = lo + scale;
  const double span = std::max(hi - lo, 0.5 * scale);
  const double a = lo - span;
  const double c = hi + span;
  std::vector<double> z;
  for (std::size_t k = 0; k < points; ++k)
    z.push_back(a + (c - a) * static_cast<double>(k) / static_cast<double>(points - 1));
  if (std::isfinite(s.lo)) z.push_back(s.lo);
  if (std::isfinite(s.hi) && s.hi != s.lo) z.push_back(s.hi);
  std::sort(z.begin(), z.end());
  z.erase(std::unique(z.begin(), z.end()), z.end());
  return z;
}

}  // namespace rvar
