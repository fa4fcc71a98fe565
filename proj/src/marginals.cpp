#include "rvar/marginals.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "rvar/errors.hpp"
#include "rvar/numerics.hpp"
#include "rvar/specfun.hpp"

namespace rvar {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overload : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overload(Ts...) -> Overload<Ts...>;

bool xi_is_zero(double xi) { return std::fabs(xi) < kXiZero; }

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

bool finite_real(double v) { return std::isfinite(v); }

// Levels of a GPD tail must lie in its coverage [1 - zeta, 1]; allow one ulp of slack.
void require_gpd_level(const GpdTail& g, double p) {
  if (p < 1.0 - g.zeta - 4 * std::numeric_limits<double>::epsilon())
    throw DomainError("GPD tail model covers only levels >= 1 - zeta");
}

// (w/zeta)^(-xi) - 1 over xi, i.e. (VaR - u) / sigma for a GPD tail at tail probability w.
double gpd_excess(const GpdTail& g, double w) {
  const double log_r = std::log(w / g.zeta);
  if (xi_is_zero(g.xi)) return -log_r;
  return std::expm1(-g.xi * log_r) / g.xi;
}

// For GEV with L = -ln p: ((L)^(-xi) - 1) / xi.
double gev_reduced(double xi, double neg_log_p) {
  const double ll = std::log(neg_log_p);
  if (xi_is_zero(xi)) return -ll;
  return std::expm1(-xi * ll) / xi;
}

// t(x) = (1 + xi z)^(-1/xi), the GEV tail function; F = exp(-t).
double gev_t(const Gev& g, double x) {
  const double z = (x - g.mu) / g.sigma;
  if (xi_is_zero(g.xi)) return std::exp(-z);
  const double arg = g.xi * z;
  if (arg <= -1.0) return g.xi > 0 ? kInf : 0.0;
  return std::exp(-std::log1p(arg) / g.xi);
}

double xlogx(double x, double scale) { return x == 0.0 ? 0.0 : x * std::log(x / scale); }

double sum_quantile(const ComonotoneSum& s, double p) {
  double total = 0.0;
  for (const auto& part : s.parts) total += quantile(part, p);
  return total;
}

double sum_upper_quantile(const ComonotoneSum& s, double w) {
  double total = 0.0;
  for (const auto& part : s.parts) total += upper_quantile(part, w);
  return total;
}

double sum_lower_support(const ComonotoneSum& s) {
  double total = 0.0;
  for (const auto& part : s.parts) total += lower_support(part);
  return total;
}

double sum_upper_support(const ComonotoneSum& s) {
  double total = 0.0;
  for (const auto& part : s.parts) total += upper_support(part);
  return total;
}

// Survival of a comonotone sum: the w with sum of upper quantiles equal to x.
double sum_survival(const ComonotoneSum& s, double x) {
  if (x < sum_lower_support(s)) return 1.0;
  if (x >= sum_upper_support(s)) return 0.0;
  constexpr double kFloor = 1e-300;
  if (sum_upper_quantile(s, kFloor) <= x) return 0.0;
  if (sum_upper_quantile(s, 1.0) > x) return 1.0;
  return numerics::bisect_log([&](double w) { return sum_upper_quantile(s, w) > x; }, kFloor, 1.0);
}

double sum_cdf(const ComonotoneSum& s, double x) {
  const double surv = sum_survival(s, x);
  if (surv < 0.5) return 1.0 - surv;
  constexpr double kFloor = 1e-300;
  if (sum_quantile(s, kFloor) > x) return 0.0;
  return numerics::bisect_log([&](double p) { return sum_quantile(s, p) <= x; }, kFloor, 0.5);
}

double gev_rvar(const Gev& g, double a1, double a2) {
  const double width = a2 - a1;
  if (xi_is_zero(g.xi)) {
    // int ln(-ln u) du = u ln(-ln u) - li(u)
    auto anti = [](double u) {
      if (u == 0.0) return 0.0;
      return u * std::log(-std::log(u)) - specfun::log_integral(u);
    };
    return g.mu - g.sigma / width * (anti(a2) - anti(a1));
  }
  const double s = 1.0 - g.xi;
  auto gam = [s](double u) {
    if (u == 0.0) return 0.0;
    return specfun::upper_incomplete_gamma(s, -std::log(u));
  };
  return g.mu - g.sigma / g.xi + g.sigma / (g.xi * width) * (gam(a2) - gam(a1));
}

double gpd_rvar(const GpdTail& g, double a1, double a2) {
  const double w1 = 1.0 - a1;
  const double w2 = 1.0 - a2;
  const double width = a2 - a1;
  if (std::fabs(g.xi - 1.0) < kXiZero) {
    return g.u - g.sigma + g.sigma * g.zeta * (std::log(w1) - std::log(w2)) / width;
  }
  if (xi_is_zero(g.xi)) {
    return g.u + g.sigma - g.sigma / width * (xlogx(w1, g.zeta) - xlogx(w2, g.zeta));
  }
  // w * ((w/zeta)^(-xi) - 1) / xi vanishes as w -> 0 when xi < 1.
  auto term = [&](double w) { return w == 0.0 ? 0.0 : w * gpd_excess(g, w); };
  return g.u + g.sigma / (1.0 - g.xi) + g.sigma * (term(w1) - term(w2)) / ((1.0 - g.xi) * width);
}

RiskValue quadrature_tvar(const MarginalModel& m, double alpha) {
  return RiskValue::finite(uni_rvar_quadrature(m, LevelRange(alpha, 1.0)));
}

void require_level(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("level must lie in (0, 1)");
}

}  // namespace

MarginalModel::MarginalModel(Gev p) : params_(p) {
  require(finite_real(p.mu) && finite_real(p.xi), "GEV parameters must be finite");
  require(p.sigma > 0.0 && std::isfinite(p.sigma), "GEV requires sigma > 0");
}

MarginalModel::MarginalModel(GpdTail p) : params_(p) {
  require(finite_real(p.u) && finite_real(p.xi), "GPD parameters must be finite");
  require(p.sigma > 0.0 && std::isfinite(p.sigma), "GPD requires sigma > 0");
  require(p.zeta > 0.0 && p.zeta <= 1.0, "GPD requires zeta in (0, 1]");
}

MarginalModel::MarginalModel(Weibull p) : params_(p) {
  require(p.shape > 0.0 && std::isfinite(p.shape), "Weibull requires shape > 0");
  require(p.scale > 0.0 && std::isfinite(p.scale), "Weibull requires scale > 0");
}

MarginalModel::MarginalModel(Exponential p) : params_(p) {
  require(p.lambda > 0.0 && std::isfinite(p.lambda), "Exponential requires lambda > 0");
}

MarginalModel::MarginalModel(Uniform p) : params_(p) {
  require(finite_real(p.lo) && finite_real(p.hi) && p.lo < p.hi, "Uniform requires lo < hi");
}

MarginalModel::MarginalModel(ComonotoneSum p) : params_(std::move(p)) {
  require(!std::get<ComonotoneSum>(params_).parts.empty(), "comonotone sum needs at least one part");
}

MarginalModel MarginalModel::affine(double shift, double scale) const {
  require(scale > 0.0 && std::isfinite(scale) && std::isfinite(shift), "affine map needs scale > 0");
  return std::visit(
      Overload{
          [&](const Gev& g) -> MarginalModel { return Gev{shift + scale * g.mu, scale * g.sigma, g.xi}; },
          [&](const GpdTail& g) -> MarginalModel {
            return GpdTail{shift + scale * g.u, scale * g.sigma, g.xi, g.zeta};
          },
          [&](const Uniform& g) -> MarginalModel { return Uniform{shift + scale * g.lo, shift + scale * g.hi}; },
          [&](const Weibull& g) -> MarginalModel {
            require(shift == 0.0, "Weibull family is not closed under shifts");
            return Weibull{g.shape, scale * g.scale};
          },
          [&](const Exponential& g) -> MarginalModel {
            require(shift == 0.0, "Exponential family is not closed under shifts");
            return Exponential{g.lambda / scale};
          },
          [&](const ComonotoneSum& s) -> MarginalModel {
            ComonotoneSum out;
            for (std::size_t i = 0; i < s.parts.size(); ++i)
              out.parts.push_back(s.parts[i].affine(i == 0 ? shift : 0.0, scale));
            return out;
          },
      },
      params_);
}

std::string MarginalModel::describe() const {
  std::ostringstream os;
  os.precision(10);
  std::visit(Overload{
                 [&](const Gev& g) { os << "gev mu=" << g.mu << " sigma=" << g.sigma << " xi=" << g.xi; },
                 [&](const GpdTail& g) {
                   os << "gpd u=" << g.u << " sigma=" << g.sigma << " xi=" << g.xi << " zeta=" << g.zeta;
                 },
                 [&](const Weibull& g) { os << "weibull shape=" << g.shape << " scale=" << g.scale; },
                 [&](const Exponential& g) { os << "exponential lambda=" << g.lambda; },
                 [&](const Uniform& g) { os << "uniform lo=" << g.lo << " hi=" << g.hi; },
                 [&](const ComonotoneSum& s) {
                   os << "comonotone_sum[";
                   for (std::size_t i = 0; i < s.parts.size(); ++i)
                     os << (i ? "; " : "") << s.parts[i].describe();
                   os << "]";
                 },
             },
             params_);
  return os.str();
}

LevelRange::LevelRange(double a1, double a2) : alpha1(a1), alpha2(a2) {
  if (!(a1 >= 0.0 && a1 < a2 && a2 <= 1.0))
    throw DomainError("level range requires 0 <= alpha1 < alpha2 <= 1");
}

double survival(const MarginalModel& m, double x) {
  if (std::isnan(x)) throw DomainError("survival: NaN argument");
  return std::visit(
      Overload{
          [&](const Gev& g) { return -std::expm1(-gev_t(g, x)); },
          [&](const GpdTail& g) {
            if (x < g.u) throw DomainError("GPD tail model is undefined below the threshold u");
            const double z = (x - g.u) / g.sigma;
            if (xi_is_zero(g.xi)) return g.zeta * std::exp(-z);
            const double arg = g.xi * z;
            if (arg <= -1.0) return 0.0;
            return g.zeta * std::exp(-std::log1p(arg) / g.xi);
          },
          [&](const Weibull& g) {
            if (x <= 0.0) return 1.0;
            return std::exp(-std::pow(x / g.scale, g.shape));
          },
          [&](const Exponential& g) { return x <= 0.0 ? 1.0 : std::exp(-g.lambda * x); },
          [&](const Uniform& g) {
            if (x <= g.lo) return 1.0;
            if (x >= g.hi) return 0.0;
            return (g.hi - x) / (g.hi - g.lo);
          },
          [&](const ComonotoneSum& s) { return sum_survival(s, x); },
      },
      m.params());
}

double cdf(const MarginalModel& m, double x) {
  if (std::isnan(x)) throw DomainError("cdf: NaN argument");
  return std::visit(
      Overload{
          [&](const Gev& g) { return std::exp(-gev_t(g, x)); },
          [&](const GpdTail&) { return 1.0 - survival(m, x); },
          [&](const Weibull& g) {
            if (x <= 0.0) return 0.0;
            return -std::expm1(-std::pow(x / g.scale, g.shape));
          },
          [&](const Exponential& g) { return x <= 0.0 ? 0.0 : -std::expm1(-g.lambda * x); },
          [&](const Uniform& g) {
            if (x <= g.lo) return 0.0;
            if (x >= g.hi) return 1.0;
            return (x - g.lo) / (g.hi - g.lo);
          },
          [&](const ComonotoneSum& s) { return sum_cdf(s, x); },
      },
      m.params());
}

double quantile(const MarginalModel& m, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile: level must lie in [0, 1]");
  if (p == 0.0) return lower_support(m);
  if (p == 1.0) return upper_support(m);
  return std::visit(
      Overload{
          [&](const Gev& g) { return g.mu + g.sigma * gev_reduced(g.xi, -std::log(p)); },
          [&](const GpdTail& g) {
            require_gpd_level(g, p);
            return g.u + g.sigma * gpd_excess(g, std::min(1.0 - p, g.zeta));
          },
          [&](const Weibull& g) { return g.scale * std::pow(-std::log1p(-p), 1.0 / g.shape); },
          [&](const Exponential& g) { return -std::log1p(-p) / g.lambda; },
          [&](const Uniform& g) { return g.lo + p * (g.hi - g.lo); },
          [&](const ComonotoneSum& s) { return sum_quantile(s, p); },
      },
      m.params());
}

double upper_quantile(const MarginalModel& m, double w) {
  if (!(w >= 0.0 && w <= 1.0)) throw DomainError("upper_quantile: tail probability must lie in [0, 1]");
  if (w == 0.0) return upper_support(m);
  if (w == 1.0) return lower_support(m);
  return std::visit(
      Overload{
          [&](const Gev& g) { return g.mu + g.sigma * gev_reduced(g.xi, -std::log1p(-w)); },
          [&](const GpdTail& g) {
            if (w > g.zeta * (1.0 + 4 * std::numeric_limits<double>::epsilon()))
              throw DomainError("GPD tail model covers only levels >= 1 - zeta");
            return g.u + g.sigma * gpd_excess(g, std::min(w, g.zeta));
          },
          [&](const Weibull& g) { return g.scale * std::pow(-std::log(w), 1.0 / g.shape); },
          [&](const Exponential& g) { return -std::log(w) / g.lambda; },
          [&](const Uniform& g) { return g.hi - w * (g.hi - g.lo); },
          [&](const ComonotoneSum& s) { return sum_upper_quantile(s, w); },
      },
      m.params());
}

double lower_support(const MarginalModel& m) {
  return std::visit(Overload{
                        [](const Gev& g) { return g.xi > 0.0 && !xi_is_zero(g.xi) ? g.mu - g.sigma / g.xi : -kInf; },
                        [](const GpdTail& g) { return g.u; },
                        [](const Weibull&) { return 0.0; },
                        [](const Exponential&) { return 0.0; },
                        [](const Uniform& g) { return g.lo; },
                        [](const ComonotoneSum& s) { return sum_lower_support(s); },
                    },
                    m.params());
}

double upper_support(const MarginalModel& m) {
  return std::visit(Overload{
                        [](const Gev& g) { return g.xi < 0.0 && !xi_is_zero(g.xi) ? g.mu - g.sigma / g.xi : kInf; },
                        [](const GpdTail& g) { return g.xi < 0.0 && !xi_is_zero(g.xi) ? g.u - g.sigma / g.xi : kInf; },
                        [](const Weibull&) { return kInf; },
                        [](const Exponential&) { return kInf; },
                        [](const Uniform& g) { return g.hi; },
                        [](const ComonotoneSum& s) { return sum_upper_support(s); },
                    },
                    m.params());
}

RiskValue mean(const MarginalModel& m) {
  return std::visit(
      Overload{
          [](const Gev& g) {
            if (g.xi >= 1.0) return RiskValue::divergent();
            if (xi_is_zero(g.xi)) return RiskValue::finite(g.mu + g.sigma * specfun::euler_gamma);
            return RiskValue::finite(g.mu + g.sigma / g.xi * (std::tgamma(1.0 - g.xi) - 1.0));
          },
          // Mean of the exceedance law, E[X | X > u].
          [](const GpdTail& g) {
            if (g.xi >= 1.0) return RiskValue::divergent();
            return RiskValue::finite(g.u + g.sigma / (1.0 - g.xi));
          },
          [](const Weibull& g) { return RiskValue::finite(g.scale * std::tgamma(1.0 + 1.0 / g.shape)); },
          [](const Exponential& g) { return RiskValue::finite(1.0 / g.lambda); },
          [](const Uniform& g) { return RiskValue::finite(0.5 * (g.lo + g.hi)); },
          [](const ComonotoneSum& s) {
            double total = 0.0;
            for (const auto& part : s.parts) {
              const RiskValue v = mean(part);
              if (v.diverges()) return v;
              total += v.value();
            }
            return RiskValue::finite(total);
          },
      },
      m.params());
}

double uni_var(const MarginalModel& m, double alpha) {
  require_level(alpha);
  return quantile(m, alpha);
}

RiskValue uni_tvar(const MarginalModel& m, double alpha) {
  require_level(alpha);
  return std::visit(
      Overload{
          [&](const Gev& g) {
            // xi = 0 is reported as divergent, following the li(x) singularity
            // argument; the Gumbel integral itself is finite.
            if (g.xi >= 1.0 || xi_is_zero(g.xi)) return RiskValue::divergent();
            return RiskValue::finite(gev_rvar(g, alpha, 1.0));
          },
          [&](const GpdTail& g) {
            require_gpd_level(g, alpha);
            if (g.xi >= 1.0) return RiskValue::divergent();
            const double var = quantile(m, alpha);
            if (xi_is_zero(g.xi)) return RiskValue::finite(var + g.sigma);
            return RiskValue::finite((var + g.sigma - g.xi * g.u) / (1.0 - g.xi));
          },
          [&](const ComonotoneSum& s) {
            double total = 0.0;
            for (const auto& part : s.parts) {
              const RiskValue v = uni_tvar(part, alpha);
              if (v.diverges()) return v;
              total += v.value();
            }
            return RiskValue::finite(total);
          },
          [&](const auto&) { return quadrature_tvar(m, alpha); },
      },
      m.params());
}

double uni_rvar(const MarginalModel& m, const LevelRange& range) {
  if (range.alpha2 == 1.0) {
    if (range.alpha1 == 0.0) return mean(m).value();
    return uni_tvar(m, range.alpha1).value();
  }
  return std::visit(
      Overload{
          [&](const Gev& g) { return gev_rvar(g, range.alpha1, range.alpha2); },
          [&](const GpdTail& g) {
            require_gpd_level(g, range.alpha1);
            return gpd_rvar(g, range.alpha1, range.alpha2);
          },
          [&](const ComonotoneSum& s) {
            double total = 0.0;
            for (const auto& part : s.parts) total += uni_rvar(part, range);
            return total;
          },
          [&](const auto&) { return uni_rvar_quadrature(m, range); },
      },
      m.params());
}

double uni_rvar_quadrature(const MarginalModel& m, const LevelRange& range) {
  if (const auto* g = std::get_if<GpdTail>(&m.params())) require_gpd_level(*g, range.alpha1);
  const double a1 = range.alpha1;
  const double a2 = range.alpha2;
  double total = 0.0;

  // Lower half in p = e^{-t} when it reaches 0, plain p otherwise.
  const double mid = 0.5;
  if (a1 < mid) {
    const double b = std::min(a2, mid);
    if (a1 == 0.0) {
      auto f = [&](double t) {
        const double p = b * std::exp(-t);
        return p == 0.0 ? 0.0 : quantile(m, p) * p;
      };
      total += numerics::integrate_half_line(f).value;
    } else {
      total += numerics::integrate([&](double p) { return quantile(m, p); }, a1, b).value;
    }
  }
  // Upper half in w = 1 - u = w_hi e^{-t}, so the quantile is evaluated from w directly.
  if (a2 > mid) {
    const double w_hi = 1.0 - std::max(a1, mid);
    auto f = [&](double t) {
      const double w = w_hi * std::exp(-t);
      return w == 0.0 ? 0.0 : upper_quantile(m, w) * w;
    };
    if (a2 == 1.0) {
      total += numerics::integrate_half_line(f).value;
    } else {
      const double t_end = std::log(w_hi / (1.0 - a2));
      total += numerics::integrate(f, 0.0, t_end).value;
    }
  }
  return total / range.width();
}

double tvar_var_ratio(const MarginalModel& m, double alpha) {
  if (!m.is<Gev>() && !m.is<GpdTail>()) throw DomainError("tvar_var_ratio requires a GEV or GPD model");
  const double xi = m.is<Gev>() ? m.as<Gev>().xi : m.as<GpdTail>().xi;
  if (xi >= 1.0) throw DomainError("tvar_var_ratio requires xi < 1");
  const RiskValue tvar = uni_tvar(m, alpha);
  if (tvar.diverges()) throw DomainError("tvar_var_ratio: TVaR is reported divergent for this model");
  const double var = uni_var(m, alpha);
  if (var == 0.0) throw DomainError("tvar_var_ratio: VaR is zero");
  return tvar.value() / var;
}

double ratio_limit(const MarginalModel& m) {
  if (const auto* g = std::get_if<Gev>(&m.params())) {
    if (g->xi >= 1.0) throw DomainError("ratio_limit requires xi < 1");
    if (xi_is_zero(g->xi)) throw DomainError("ratio_limit: GEV TVaR is reported divergent for xi = 0");
    return g->xi > 0.0 ? 1.0 / (1.0 - g->xi) : 1.0;
  }
  if (const auto* g = std::get_if<GpdTail>(&m.params())) {
    if (g->xi >= 1.0) throw DomainError("ratio_limit requires xi < 1");
    return g->xi >= 0.0 || xi_is_zero(g->xi) ? 1.0 / (1.0 - std::max(g->xi, 0.0)) : 1.0;
  }
  throw DomainError("ratio_limit requires a GEV or GPD model");
}

}  // namespace rvar
