#include "rvar/dependence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "rvar/errors.hpp"

namespace rvar {
namespace {

template <class... Ts>
struct Overload : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overload(Ts...) -> Overload<Ts...>;

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

void require_unit(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError(what);
}

// s - a where s = (a^theta + b^theta)^(1/theta), a, b >= 0.
double gumbel_excess(double a, double b, double theta) {
  if (a == 0.0) return b;
  if (b == 0.0) return 0.0;
  if (a >= b) return a * std::expm1(std::log1p(std::pow(b / a, theta)) / theta);
  return b * std::exp(std::log1p(std::pow(a / b, theta)) / theta) - a;
}

// Uniform on (0, 1) with 53-bit resolution; 0 is rejected so 1 - U is exact and positive.
double open_uniform(std::mt19937_64& rng) {
  for (;;) {
    const std::uint64_t k = rng() >> 11;
    if (k != 0) return static_cast<double>(k) * 0x1.0p-53;
  }
}

// Positive stable variate with Laplace transform exp(-s^alpha), 0 < alpha < 1 (Kanter).
double positive_stable(double alpha, std::mt19937_64& rng) {
  const double theta = std::numbers::pi * open_uniform(rng);
  const double w = -std::log(open_uniform(rng));
  const double a = std::sin(alpha * theta) / std::pow(std::sin(theta), 1.0 / alpha);
  const double b = std::pow(std::sin((1.0 - alpha) * theta) / w, (1.0 - alpha) / alpha);
  return a * b;
}

}  // namespace

Copula::Copula(Gumbel p) : params_(p) {
  if (!(p.theta >= 1.0) || !std::isfinite(p.theta)) throw DomainError("Gumbel copula requires theta >= 1");
}

std::string Copula::describe() const {
  std::ostringstream os;
  os.precision(10);
  std::visit(Overload{
                 [&](const Independence&) { os << "independence"; },
                 [&](const Comonotone&) { os << "comonotone"; },
                 [&](const Countermonotone&) { os << "countermonotone"; },
                 [&](const Gumbel& g) { os << "gumbel theta=" << g.theta; },
             },
             params_);
  return os.str();
}

double copula_cdf(const Copula& c, double u, double v) {
  require_unit(u, "copula_cdf: u must lie in [0, 1]");
  require_unit(v, "copula_cdf: v must lie in [0, 1]");
  return std::visit(Overload{
                        [&](const Independence&) { return u * v; },
                        [&](const Comonotone&) { return std::min(u, v); },
                        [&](const Countermonotone&) { return std::max(u + v - 1.0, 0.0); },
                        [&](const Gumbel& g) {
                          if (u == 0.0 || v == 0.0) return 0.0;
                          if (u == 1.0) return v;
                          if (v == 1.0) return u;
                          const double a = -std::log(u);
                          const double b = -std::log(v);
                          return std::exp(-(a + gumbel_excess(a, b, g.theta)));
                        },
                    },
                    c.params());
}

double copula_deficit(const Copula& c, double u, double w) {
  require_unit(u, "copula_deficit: u must lie in [0, 1]");
  require_unit(w, "copula_deficit: w must lie in [0, 1]");
  return std::visit(Overload{
                        [&](const Independence&) { return u * w; },
                        [&](const Comonotone&) { return std::max(u - 1.0 + w, 0.0); },
                        [&](const Countermonotone&) { return std::min(u, w); },
                        [&](const Gumbel& g) {
                          if (u == 0.0 || w == 0.0) return 0.0;
                          if (w == 1.0) return u;
                          const double a = -std::log(u);
                          const double b = -std::log1p(-w);
                          return clamp01(-u * std::expm1(-gumbel_excess(a, b, g.theta)));
                        },
                    },
                    c.params());
}

BivariateModel::BivariateModel(MarginalModel m1, MarginalModel m2, Copula c)
    : m1_(std::move(m1)), m2_(std::move(m2)), copula_(c) {
  if (m1_.is<GpdTail>() || m2_.is<GpdTail>())
    throw DomainError("bivariate margins must be full laws; GPD tail models are not allowed");
}

BivariateModel BivariateModel::affine(double a1, double b1, double a2, double b2) const {
  return BivariateModel(m1_.affine(a1, b1), m2_.affine(a2, b2), copula_);
}

double joint_cdf(const BivariateModel& b, double x1, double x2) {
  return clamp01(copula_cdf(b.copula(), cdf(b.margin1(), x1), cdf(b.margin2(), x2)));
}

double joint_survival(const BivariateModel& b, double x1, double x2) {
  const double w2 = survival(b.margin2(), x2);
  return clamp01(w2 - copula_deficit(b.copula(), cdf(b.margin1(), x1), w2));
}

namespace {

// Draws x = F^-1(p) from the pair (p, w = 1 - p), using whichever side keeps precision.
double draw(const MarginalModel& m, double p, double w) {
  constexpr double kFloor = 1e-300;
  if (p <= 0.5) return quantile(m, std::max(p, kFloor));
  return upper_quantile(m, std::max(w, kFloor));
}

}  // namespace

SampleMatrix sample(const BivariateModel& b, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw DomainError("sample: n must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<double> out;
  out.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    // (u, 1 - u) and (v, 1 - v) for the two coordinates.
    double u = 0.0, uw = 0.0, v = 0.0, vw = 0.0;
    std::visit(Overload{
                   [&](const Independence&) {
                     u = open_uniform(rng);
                     v = open_uniform(rng);
                     uw = 1.0 - u;
                     vw = 1.0 - v;
                   },
                   [&](const Comonotone&) {
                     u = v = open_uniform(rng);
                     uw = vw = 1.0 - u;
                   },
                   [&](const Countermonotone&) {
                     u = open_uniform(rng);
                     uw = 1.0 - u;
                     v = uw;
                     vw = u;
                   },
                   [&](const Gumbel& g) {
                     if (g.theta == 1.0) {
                       u = open_uniform(rng);
                       v = open_uniform(rng);
                       uw = 1.0 - u;
                       vw = 1.0 - v;
                       return;
                     }
                     // Marshall-Olkin: U_i = exp(-(E_i / S)^(1/theta)) with S positive stable.
                     const double alpha = 1.0 / g.theta;
                     const double s = positive_stable(alpha, rng);
                     const double t1 = std::pow(-std::log(open_uniform(rng)) / s, alpha);
                     const double t2 = std::pow(-std::log(open_uniform(rng)) / s, alpha);
                     u = std::exp(-t1);
                     uw = -std::expm1(-t1);
                     v = std::exp(-t2);
                     vw = -std::expm1(-t2);
                   },
               },
               b.copula().params());
    out.push_back(draw(b.margin1(), u, uw));
    out.push_back(draw(b.margin2(), v, vw));
  }
  return SampleMatrix(2, std::move(out));
}

}  // namespace rvar
