#pragma once

#include <string>
#include <vector>

#include "rvar/dependence.hpp"
#include "rvar/marginals.hpp"

// Sensitivity functions of the orthant measures to a point-mass
// contamination of the conditional law of X_j given the fixed coordinate:
// X_j | X_i <= x (lower) or X_j | X_i > x (upper). All are piecewise linear
// in z with at most two breakpoints.

namespace rvar {

enum class SensitivityTarget { lower_var, upper_var, lower_rvar, upper_rvar, lower_tvar, upper_tvar };

std::string to_string(SensitivityTarget t);
SensitivityTarget parse_sensitivity_target(const std::string& name);

enum class Branch { below, at, middle, above };
std::string to_string(Branch b);

// S(z) = below              for z < lo
//        slope z + offset   for lo <= z <= hi   (VaR kinds: 0 at z = lo = hi)
//        above              for z > hi          (TVaR kinds: hi = +inf)
struct SensitivityFunction {
  SensitivityTarget target;
  double lo;
  double hi;
  double below;
  double slope;
  double offset;
  double above;
  // Value of the unperturbed measure.
  double measure;
  // Conditional density at the breakpoint (VaR kinds only, else 0).
  double density = 0.0;

  double operator()(double z) const;
  Branch branch(double z) const;
  bool bounded() const;
  // max over z of |S(z)|; +inf when unbounded.
  double sup_abs() const;
};

// Throw ZeroDensity when the conditional density at the VaR point is not positive.
SensitivityFunction lower_var_sensitivity(const BivariateModel& b, double alpha, double x_fixed, Component fixed);
SensitivityFunction upper_var_sensitivity(const BivariateModel& b, double alpha, double x_fixed, Component fixed);
SensitivityFunction lower_rvar_sensitivity(const BivariateModel& b, const LevelRange& range, double x_fixed,
                                           Component fixed);
SensitivityFunction upper_rvar_sensitivity(const BivariateModel& b, const LevelRange& range, double x_fixed,
                                           Component fixed);
// Throw DomainError when the TVaR itself diverges.
SensitivityFunction lower_tvar_sensitivity(const BivariateModel& b, double alpha, double x_fixed, Component fixed);
SensitivityFunction upper_tvar_sensitivity(const BivariateModel& b, double alpha, double x_fixed, Component fixed);

// Dispatch on target; var and tvar targets read alpha1 only.
SensitivityFunction sensitivity(const BivariateModel& b, SensitivityTarget target, double alpha1, double alpha2,
                                double x_fixed, Component fixed);

double sens_lower_var(const BivariateModel& b, double alpha, double x_fixed, double z,
                      Component fixed = Component::first);
double sens_upper_var(const BivariateModel& b, double alpha, double x_fixed, double z,
                      Component fixed = Component::first);
double sens_lower_rvar(const BivariateModel& b, const LevelRange& range, double x_fixed, double z,
                       Component fixed = Component::first);
double sens_upper_rvar(const BivariateModel& b, const LevelRange& range, double x_fixed, double z,
                       Component fixed = Component::first);
double sens_lower_tvar(const BivariateModel& b, double alpha, double x_fixed, double z,
                       Component fixed = Component::first);
double sens_upper_tvar(const BivariateModel& b, double alpha, double x_fixed, double z,
                       Component fixed = Component::first);

// The verdict comes from the closed-form tails, not from the sampled values.
struct SensitivityProfile {
  std::vector<double> z_grid;
  std::vector<double> values;
  std::vector<Branch> branches;
  bool bounded;
  double sup_abs;
};

SensitivityProfile sensitivity_profile(const SensitivityFunction& s, const std::vector<double>& z_grid);

// Evenly spaced z values covering both breakpoints with a margin on each side.
std::vector<double> default_z_grid(const SensitivityFunction& s, std::size_t points = 101);

}  // namespace rvar
