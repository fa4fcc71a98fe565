#include "rvar/orthant.hpp"

#include <cmath>
#include <limits>

#include "rvar/errors.hpp"
#include "rvar/numerics.hpp"
#include "rvar/specfun.hpp"

namespace rvar {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTinyW = 1e-300;
constexpr double kDegenerate = 1e-12;

// The pair (fixed margin at x_fixed, free margin) seen through the copula.
// Orthant quantiles are solved for the free margin's tail probability w and
// mapped back with its upper quantile; this keeps full precision in the tails.
struct Slice {
  const MarginalModel& fixed_m;
  const MarginalModel& free_m;
  const Copula& copula;
  double a;     // F_i(x_fixed)
  double abar;  // 1 - F_i(x_fixed)

  // P(X_i <= x, X_j > y) with w = P(X_j > y).
  double deficit(double w) const { return copula_deficit(copula, a, w); }
  // P(X_i > x, X_j > y).
  double joint_tail(double w) const { return std::max(w - deficit(w), 0.0); }
};

Slice make_slice(const BivariateModel& b, double x_fixed, Component fixed) {
  if (std::isnan(x_fixed)) throw DomainError("x_fixed must not be NaN");
  const MarginalModel& fm = b.margin(fixed);
  return Slice{fm, b.margin(other(fixed)), b.copula(), cdf(fm, x_fixed), survival(fm, x_fixed)};
}

double free_value(const Slice& s, double w) {
  if (w <= 0.0) {
    const double top = upper_support(s.free_m);
    if (std::isinf(top)) throw InfeasibleLevel("orthant quantile is attained only at +infinity");
    return top;
  }
  if (w >= 1.0) {
    const double bottom = lower_support(s.free_m);
    if (std::isinf(bottom)) throw InfeasibleLevel("orthant quantile is attained only at -infinity");
    return bottom;
  }
  return upper_quantile(s.free_m, w);
}

// Largest w with deficit(w) <= delta, delta = A - u.
double lower_tail_prob(const Slice& s, double delta) {
  const double hi = std::min(1.0, s.abar + delta);
  if (s.deficit(hi) <= delta) return hi;
  const double lo = std::max(delta, kTinyW);
  auto pred = [&](double w) { return s.deficit(w) <= delta; };
  if (!pred(lo)) return 0.0;
  return numerics::bisect_log(pred, lo, hi);
}

// Largest w with joint_tail(w) <= delta, delta = 1 - v.
double upper_tail_prob(const Slice& s, double delta) {
  const double hi = std::min(1.0, delta + s.a);
  if (s.joint_tail(hi) <= delta) return hi;
  const double lo = std::max(delta, kTinyW);
  auto pred = [&](double w) { return s.joint_tail(w) <= delta; };
  if (!pred(lo)) return 0.0;
  return numerics::bisect_log(pred, lo, hi);
}

double lower_var_at(const Slice& s, double delta) { return free_value(s, lower_tail_prob(s, delta)); }
double upper_var_at(const Slice& s, double delta) { return free_value(s, upper_tail_prob(s, delta)); }

bool gev_zero(const MarginalModel& m) { return m.is<Gev>() && std::fabs(m.as<Gev>().xi) < kXiZero; }

// Infinite tail mean, including the GEV xi = 0 convention used by uni_tvar.
bool tail_mean_diverges(const MarginalModel& m) {
  if (const auto* s = std::get_if<ComonotoneSum>(&m.params())) {
    for (const auto& part : s->parts)
      if (tail_mean_diverges(part)) return true;
    return false;
  }
  return gev_zero(m) || mean(m).diverges();
}

bool lower_tail_diverges(const BivariateModel& b, Component fixed) {
  return tail_mean_diverges(b.margin(other(fixed))) &&
         !std::holds_alternative<Comonotone>(b.copula().params());
}

bool upper_tail_diverges(const BivariateModel& b, Component fixed) {
  return tail_mean_diverges(b.margin(other(fixed))) &&
         !std::holds_alternative<Countermonotone>(b.copula().params());
}

void check_width(double width, const char* band_msg, const char* degenerate_msg) {
  if (width < -kDegenerate) throw BandViolation(band_msg);
  if (width <= kDegenerate) throw DegenerateRange(degenerate_msg);
}

// int_{d_lo}^{d_hi} g(delta) d delta with delta = d_hi e^{-t}; d_lo may be 0.
double integrate_log_scale(const std::function<double(double)>& g, double d_lo, double d_hi) {
  auto f = [&](double t) {
    const double delta = d_hi * std::exp(-t);
    return delta == 0.0 ? 0.0 : g(delta) * delta;
  };
  if (d_lo <= 0.0) return numerics::integrate_half_line(f).value;
  return numerics::integrate(f, 0.0, std::log(d_hi / d_lo)).value;
}

double xlogx(double x) { return x == 0.0 ? 0.0 : x * std::log(x); }

const Gev& free_gev_indep(const BivariateModel& b, Component fixed) {
  if (!b.margin1().is<Gev>() || !b.margin2().is<Gev>())
    throw DomainError("closed form requires GEV margins");
  if (!std::holds_alternative<Independence>(b.copula().params()))
    throw DomainError("closed form requires the independence copula");
  return b.margin(other(fixed)).as<Gev>();
}

double gamma_or_zero(double s, double t) {
  return std::isinf(t) ? 0.0 : specfun::upper_incomplete_gamma(s, t);
}
double e1_or_zero(double t) { return std::isinf(t) ? 0.0 : specfun::exp_integral_e1(t); }
double xlog(double x, double t) { return x == 0.0 ? 0.0 : x * std::log(t); }

}  // namespace

std::string to_string(CurveKind k) {
  switch (k) {
    case CurveKind::lower_var: return "lower_var";
    case CurveKind::upper_var: return "upper_var";
    case CurveKind::lower_rvar: return "lower_rvar";
    case CurveKind::upper_rvar: return "upper_rvar";
    case CurveKind::lower_tvar: return "lower_tvar";
    case CurveKind::upper_tvar: return "upper_tvar";
  }
  return "?";
}

CurveKind parse_curve_kind(const std::string& name) {
  for (CurveKind k : {CurveKind::lower_var, CurveKind::upper_var, CurveKind::lower_rvar, CurveKind::upper_rvar,
                      CurveKind::lower_tvar, CurveKind::upper_tvar})
    if (to_string(k) == name) return k;
  throw DomainError("unknown curve kind '" + name + "'");
}

double conditioning_mass(const BivariateModel& b, double x_fixed, Component fixed) {
  return cdf(b.margin(fixed), x_fixed);
}

double lower_band_top(const BivariateModel& b, double alpha2, double x_fixed, Component fixed) {
  const Slice s = make_slice(b, x_fixed, fixed);
  return s.a - s.deficit(1.0 - alpha2);
}

double upper_band_bottom(const BivariateModel& b, double alpha1, double x_fixed, Component fixed) {
  const Slice s = make_slice(b, x_fixed, fixed);
  return alpha1 + s.deficit(1.0 - alpha1);
}

double lower_var(const BivariateModel& b, double alpha, double x_fixed, Component fixed) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("lower_var: level must lie in (0, 1]");
  const Slice s = make_slice(b, x_fixed, fixed);
  if (alpha > s.a) throw InfeasibleLevel("lower_var: F_i(x_fixed) < alpha, level unreachable");
  return lower_var_at(s, s.a - alpha);
}

double upper_var(const BivariateModel& b, double alpha, double x_fixed, Component fixed) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError("upper_var: level must lie in [0, 1)");
  const Slice s = make_slice(b, x_fixed, fixed);
  if (s.a > alpha) throw InfeasibleLevel("upper_var: F_i(x_fixed) > alpha, level unreachable");
  return upper_var_at(s, 1.0 - alpha);
}

double lower_rvar(const BivariateModel& b, const LevelRange& range, double x_fixed, Component fixed) {
  const Slice s = make_slice(b, x_fixed, fixed);
  const double d_hi = s.a - range.alpha1;
  const double d_lo = range.alpha2 == 1.0 ? 0.0 : s.deficit(1.0 - range.alpha2);
  check_width(d_hi - d_lo, "lower_rvar: x_fixed below the band, F(x_fixed, VaR_a2) < alpha1",
              "lower_rvar: F(x_fixed, VaR_a2) - alpha1 <= 1e-12");
  if (d_lo == 0.0 && lower_tail_diverges(b, fixed)) throw DomainError("lower orthant TVaR diverges");
  const double integral = integrate_log_scale([&](double d) { return lower_var_at(s, d); }, d_lo, d_hi);
  return integral / (d_hi - d_lo);
}

double upper_rvar(const BivariateModel& b, const LevelRange& range, double x_fixed, Component fixed) {
  const Slice s = make_slice(b, x_fixed, fixed);
  const double d_hi = s.joint_tail(1.0 - range.alpha1);  // 1 - C
  const double d_lo = 1.0 - range.alpha2;
  check_width(d_hi - d_lo, "upper_rvar: x_fixed above the band, C > alpha2",
              "upper_rvar: alpha2 - C <= 1e-12");
  if (d_lo == 0.0 && upper_tail_diverges(b, fixed)) throw DomainError("upper orthant TVaR diverges");
  const double integral = integrate_log_scale([&](double d) { return upper_var_at(s, d); }, d_lo, d_hi);
  return integral / (d_hi - d_lo);
}

RiskValue lower_tvar(const BivariateModel& b, double alpha, double x_fixed, Component fixed) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError("lower_tvar: level must lie in [0, 1)");
  if (lower_tail_diverges(b, fixed)) {
    check_width(conditioning_mass(b, x_fixed, fixed) - alpha, "lower_tvar: F_i(x_fixed) < alpha",
                "lower_tvar: F_i(x_fixed) - alpha <= 1e-12");
    return RiskValue::divergent();
  }
  return RiskValue::finite(lower_rvar(b, LevelRange(alpha, 1.0), x_fixed, fixed));
}

RiskValue upper_tvar(const BivariateModel& b, double alpha, double x_fixed, Component fixed) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError("upper_tvar: level must lie in [0, 1)");
  if (upper_tail_diverges(b, fixed)) {
    check_width(1.0 - upper_band_bottom(b, alpha, x_fixed, fixed), "upper_tvar: C > 1",
                "upper_tvar: 1 - C <= 1e-12");
    return RiskValue::divergent();
  }
  return RiskValue::finite(upper_rvar(b, LevelRange(alpha, 1.0), x_fixed, fixed));
}

double closed_lower_rvar_gev_indep(const BivariateModel& b, const LevelRange& range, double x_fixed,
                                   Component fixed) {
  const Gev& g = free_gev_indep(b, fixed);
  const double a = conditioning_mass(b, x_fixed, fixed);
  const double a1 = range.alpha1;
  const double big_b = a * range.alpha2;
  check_width(big_b - a1, "lower_rvar: x_fixed below the band", "lower_rvar: B - alpha1 <= 1e-12");
  const double t_b = std::log(a / big_b);
  const double t_1 = a1 == 0.0 ? kInf : std::log(a / a1);
  if (t_b == 0.0 && (g.xi >= 1.0 || std::fabs(g.xi) < kXiZero)) throw DomainError("lower orthant TVaR diverges");
  if (std::fabs(g.xi) < kXiZero) {
    const double bracket = xlog(big_b, t_b) - xlog(a1, t_1) + a * (e1_or_zero(t_b) - e1_or_zero(t_1));
    return g.mu - g.sigma / (big_b - a1) * bracket;
  }
  const double s = 1.0 - g.xi;
  const double gam = gamma_or_zero(s, t_b) - gamma_or_zero(s, t_1);
  return g.mu - g.sigma / g.xi * (1.0 - a / (big_b - a1) * gam);
}

double closed_upper_rvar_gev_indep(const BivariateModel& b, const LevelRange& range, double x_fixed,
                                   Component fixed) {
  const Gev& g = free_gev_indep(b, fixed);
  const MarginalModel& fm = b.margin(fixed);
  const double a = cdf(fm, x_fixed);
  const double abar = survival(fm, x_fixed);
  const double a2 = range.alpha2;
  // Under independence C - A = alpha1 (1 - A).
  const double c_minus_a = range.alpha1 * abar;
  const double c = a + c_minus_a;
  check_width(a2 - c, "upper_rvar: x_fixed above the band", "upper_rvar: alpha2 - C <= 1e-12");
  const double t_2 = a2 == 1.0 ? 0.0 : std::log(abar / (a2 - a));
  const double t_c = range.alpha1 == 0.0 ? kInf : -std::log(range.alpha1);
  if (t_2 == 0.0 && (g.xi >= 1.0 || std::fabs(g.xi) < kXiZero)) throw DomainError("upper orthant TVaR diverges");
  if (std::fabs(g.xi) < kXiZero) {
    const double bracket = xlog(a2 - a, t_2) + abar * e1_or_zero(t_2) - xlog(c_minus_a, t_c) - abar * e1_or_zero(t_c);
    return g.mu - g.sigma / (a2 - c) * bracket;
  }
  const double s = 1.0 - g.xi;
  const double gam = gamma_or_zero(s, t_2) - gamma_or_zero(s, t_c);
  return g.mu - g.sigma / g.xi * (1.0 - abar / (a2 - c) * gam);
}

double closed_lower_rvar_exponential(const BivariateModel& b, const LevelRange& range, double x_fixed,
                                     Component fixed) {
  if (!b.margin1().is<Exponential>() || !b.margin2().is<Exponential>())
    throw DomainError("closed form requires exponential margins");
  const double lambda = b.margin(other(fixed)).as<Exponential>().lambda;
  const double a = conditioning_mass(b, x_fixed, fixed);
  const double a1 = range.alpha1;
  const double a2 = range.alpha2;
  return std::visit(
      [&](const auto& c) -> double {
        using C = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<C, Independence>) {
          const double width = a2 * a - a1;
          check_width(width, "lower_rvar: x_fixed below the band", "lower_rvar: B - alpha1 <= 1e-12");
          const double bracket = a * xlogx(1.0 - a2) - (a - a1) * std::log((a - a1) / a) + width;
          return bracket / (lambda * width);
        } else if constexpr (std::is_same_v<C, Comonotone>) {
          const double big_b = std::min(a, a2);
          const double width = big_b - a1;
          check_width(width, "lower_rvar: x_fixed below the band", "lower_rvar: B - alpha1 <= 1e-12");
          return (xlogx(1.0 - big_b) - xlogx(1.0 - a1) + width) / (lambda * width);
        } else if constexpr (std::is_same_v<C, Countermonotone>) {
          const double width = a + a2 - 1.0 - a1;
          check_width(width, "lower_rvar: x_fixed below the band", "lower_rvar: B - alpha1 <= 1e-12");
          return (xlogx(1.0 - a2) - xlogx(a - a1) + width) / (lambda * width);
        } else {
          throw DomainError("closed exponential form requires an independence or extremal copula");
        }
      },
      b.copula().params());
}

CurveSpec CurveSpec::var(CurveKind k, double alpha, Component fixed) {
  if (k != CurveKind::lower_var && k != CurveKind::upper_var) throw DomainError("CurveSpec::var needs a var kind");
  return {k, alpha, alpha, fixed};
}

CurveSpec CurveSpec::rvar(CurveKind k, const LevelRange& range, Component fixed) {
  if (k != CurveKind::lower_rvar && k != CurveKind::upper_rvar) throw DomainError("CurveSpec::rvar needs an rvar kind");
  return {k, range.alpha1, range.alpha2, fixed};
}

CurveSpec CurveSpec::tvar(CurveKind k, double alpha, Component fixed) {
  if (k != CurveKind::lower_tvar && k != CurveKind::upper_tvar) throw DomainError("CurveSpec::tvar needs a tvar kind");
  return {k, alpha, 1.0, fixed};
}

RiskValue evaluate(const BivariateModel& b, const CurveSpec& spec, double x) {
  switch (spec.kind) {
    case CurveKind::lower_var: return RiskValue::finite(lower_var(b, spec.alpha1, x, spec.fixed));
    case CurveKind::upper_var: return RiskValue::finite(upper_var(b, spec.alpha1, x, spec.fixed));
    case CurveKind::lower_rvar:
      return RiskValue::finite(lower_rvar(b, LevelRange(spec.alpha1, spec.alpha2), x, spec.fixed));
    case CurveKind::upper_rvar:
      return RiskValue::finite(upper_rvar(b, LevelRange(spec.alpha1, spec.alpha2), x, spec.fixed));
    case CurveKind::lower_tvar: return lower_tvar(b, spec.alpha1, x, spec.fixed);
    case CurveKind::upper_tvar: return upper_tvar(b, spec.alpha1, x, spec.fixed);
  }
  throw DomainError("unknown curve kind");
}

Band valid_band(const BivariateModel& b, const CurveSpec& spec) {
  const MarginalModel& fm = b.margin(spec.fixed);
  const MarginalModel& om = b.margin(other(spec.fixed));
  const Component j = other(spec.fixed);
  double lo = lower_support(fm);
  double hi = upper_support(fm);
  if (std::isinf(lo)) lo = quantile(fm, 1e-8);
  if (std::isinf(hi)) hi = upper_quantile(fm, 1e-8);
  switch (spec.kind) {
    case CurveKind::lower_var:
    case CurveKind::lower_tvar: lo = quantile(fm, spec.alpha1); break;
    case CurveKind::upper_var: hi = quantile(fm, spec.alpha1); break;
    case CurveKind::upper_tvar: break;
    case CurveKind::lower_rvar: lo = lower_var(b, spec.alpha1, quantile(om, spec.alpha2), j); break;
    case CurveKind::upper_rvar: hi = upper_var(b, spec.alpha2, quantile(om, spec.alpha1), j); break;
  }
  if (!(lo < hi)) throw DegenerateRange("valid band for x_fixed is empty");
  return {lo, hi};
}

std::vector<double> band_grid(const Band& band, std::size_t points) {
  if (points == 0) throw DomainError("grid needs at least one point");
  const double width = band.hi - band.lo;
  const double lo = band.lo + 1e-8 * width;
  const double hi = band.hi - 1e-8 * width;
  std::vector<double> out(points);
  if (points == 1) {
    out[0] = 0.5 * (lo + hi);
    return out;
  }
  for (std::size_t k = 0; k < points; ++k)
    out[k] = k + 1 == points ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
  return out;
}

OrthantCurve orthant_curve(const BivariateModel& b, const CurveSpec& spec, std::vector<double> fixed_values) {
  OrthantCurve curve{spec, std::move(fixed_values), {}};
  curve.values.assign(curve.fixed_values.size(), RiskValue::divergent());
  numerics::parallel_for(curve.fixed_values.size(),
                         [&](std::size_t k) { curve.values[k] = evaluate(b, spec, curve.fixed_values[k]); });
  return curve;
}

OrthantCurve orthant_curve(const BivariateModel& b, const CurveSpec& spec, std::size_t points) {
  return orthant_curve(b, spec, band_grid(valid_band(b, spec), points));
}

}  // namespace rvar
