#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rvar/dependence.hpp"
#include "rvar/marginals.hpp"
#include "rvar/risk_value.hpp"

// Bivariate lower/upper orthant measures. Coordinate i (`fixed`) is held at
// x_fixed; all measures are values of the other coordinate j.
//
//   lower_var(alpha, x) = inf{ y : F(x, y) >= alpha }
//   upper_var(alpha, x) = inf{ y : Fbar(x, y) <= 1 - alpha }
//   lower_rvar = (B - a1)^-1 int_{a1}^{B} lower_var(u, x) du,  B = F(x, VaR_a2(X_j))
//   upper_rvar = (a2 - C)^-1 int_{C}^{a2} upper_var(u, x) du,  C = 1 - Fbar(x, VaR_a1(X_j))
//
// TVaR is the a2 = 1 case of the same integrals.

namespace rvar {

enum class CurveKind { lower_var, upper_var, lower_rvar, upper_rvar, lower_tvar, upper_tvar };

std::string to_string(CurveKind k);
// Throws DomainError on an unknown name.
CurveKind parse_curve_kind(const std::string& name);

// A = F_i(x_fixed).
double conditioning_mass(const BivariateModel& b, double x_fixed, Component fixed);
// B = F(x_fixed, VaR_a2(X_j)); equals A when a2 = 1.
double lower_band_top(const BivariateModel& b, double alpha2, double x_fixed, Component fixed);
// C = 1 - Fbar(x_fixed, VaR_a1(X_j)).
double upper_band_bottom(const BivariateModel& b, double alpha1, double x_fixed, Component fixed);

// Throw InfeasibleLevel when the level cannot be reached at x_fixed.
double lower_var(const BivariateModel& b, double alpha, double x_fixed, Component fixed);
double upper_var(const BivariateModel& b, double alpha, double x_fixed, Component fixed);

// Throw BandViolation outside the band and DegenerateRange when the
// integration interval is narrower than 1e-12. With alpha2 = 1 these
// throw DomainError if the tail integral diverges.
double lower_rvar(const BivariateModel& b, const LevelRange& range, double x_fixed, Component fixed);
double upper_rvar(const BivariateModel& b, const LevelRange& range, double x_fixed, Component fixed);

// Divergent when the free margin has an infinite tail mean and the orthant
// quantile is unbounded as the level approaches its cap.
RiskValue lower_tvar(const BivariateModel& b, double alpha, double x_fixed, Component fixed);
RiskValue upper_tvar(const BivariateModel& b, double alpha, double x_fixed, Component fixed);

// Independent GEV margins; the branch follows the free margin's shape.
double closed_lower_rvar_gev_indep(const BivariateModel& b, const LevelRange& range, double x_fixed,
                                   Component fixed);
double closed_upper_rvar_gev_indep(const BivariateModel& b, const LevelRange& range, double x_fixed,
                                   Component fixed);
// Exponential margins under Independence, Comonotone or Countermonotone.
double closed_lower_rvar_exponential(const BivariateModel& b, const LevelRange& range, double x_fixed,
                                     Component fixed);

// Levels of a curve: var kinds use alpha1 only, tvar kinds use alpha1 with alpha2 = 1.
struct CurveSpec {
  CurveKind kind;
  double alpha1;
  double alpha2;
  Component fixed;

  static CurveSpec var(CurveKind k, double alpha, Component fixed);
  static CurveSpec rvar(CurveKind k, const LevelRange& range, Component fixed);
  static CurveSpec tvar(CurveKind k, double alpha, Component fixed);
};

RiskValue evaluate(const BivariateModel& b, const CurveSpec& spec, double x_fixed);

// Closed interval of admissible x_fixed; infinite support ends are replaced by
// the fixed margin's 1e-8 / 1 - 1e-8 quantiles.
struct Band {
  double lo;
  double hi;
};
Band valid_band(const BivariateModel& b, const CurveSpec& spec);

// `points` evenly spaced values with both ends moved inward by 1e-8 of the width.
std::vector<double> band_grid(const Band& band, std::size_t points = 200);

struct OrthantCurve {
  CurveSpec spec;
  std::vector<double> fixed_values;
  std::vector<RiskValue> values;
};

// Grid points are evaluated in parallel; values are stored by grid index.
OrthantCurve orthant_curve(const BivariateModel& b, const CurveSpec& spec, std::vector<double> fixed_values);
OrthantCurve orthant_curve(const BivariateModel& b, const CurveSpec& spec, std::size_t points = 200);

}  // namespace rvar
