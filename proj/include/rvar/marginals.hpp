#pragma once

#include <string>
#include <variant>
#include <vector>

#include "rvar/risk_value.hpp"

namespace rvar {

// Shape parameters with |xi| below this threshold use the xi = 0 formulas.
inline constexpr double kXiZero = 1e-8;

struct Gev {
  double mu = 0.0;
  double sigma = 1.0;
  double xi = 0.0;
};

// Peaks-over-threshold tail: for x >= u, P(X > x) = zeta * (1 + xi (x-u)/sigma)^(-1/xi).
// The model says nothing about the body below u.
struct GpdTail {
  double u = 0.0;
  double sigma = 1.0;
  double xi = 0.0;
  double zeta = 1.0;
};

struct Weibull {
  double shape = 1.0;
  double scale = 1.0;
};

struct Exponential {
  double lambda = 1.0;
};

struct Uniform {
  double lo = 0.0;
  double hi = 1.0;
};

class MarginalModel;

// Law of X_1 + ... + X_n for a comonotonic vector with the given margins; its
// quantile is the sum of the component quantiles.
struct ComonotoneSum {
  std::vector<MarginalModel> parts;
};

class MarginalModel {
 public:
  using Params = std::variant<Gev, GpdTail, Weibull, Exponential, Uniform, ComonotoneSum>;

  // Validates parameters; throws DomainError.
  MarginalModel(Gev p);
  MarginalModel(GpdTail p);
  MarginalModel(Weibull p);
  MarginalModel(Exponential p);
  MarginalModel(Uniform p);
  MarginalModel(ComonotoneSum p);

  const Params& params() const noexcept { return params_; }
  template <class T>
  bool is() const noexcept {
    return std::holds_alternative<T>(params_);
  }
  template <class T>
  const T& as() const {
    return std::get<T>(params_);
  }

  // Location/scale change X -> a + b X with b > 0.
  MarginalModel affine(double shift, double scale) const;

  std::string describe() const;

 private:
  Params params_;
};

// Ordered confidence levels 0 <= alpha1 < alpha2 <= 1.
struct LevelRange {
  double alpha1;
  double alpha2;
  LevelRange(double a1, double a2);
  double width() const noexcept { return alpha2 - alpha1; }
};

double cdf(const MarginalModel& m, double x);
double survival(const MarginalModel& m, double x);
// Inf-type quantile at p in (0, 1); quantile(0) and quantile(1) give the support ends.
double quantile(const MarginalModel& m, double p);
// quantile(1 - w), evaluated without forming 1 - w (accurate for tiny w).
double upper_quantile(const MarginalModel& m, double w);
double lower_support(const MarginalModel& m);
double upper_support(const MarginalModel& m);
RiskValue mean(const MarginalModel& m);

double uni_var(const MarginalModel& m, double alpha);
RiskValue uni_tvar(const MarginalModel& m, double alpha);
// Throws DomainError when alpha2 = 1 and the tail mean diverges.
double uni_rvar(const MarginalModel& m, const LevelRange& range);
// (alpha2 - alpha1)^-1 int quantile(u) du by adaptive quadrature, for any model
// with a finite integral. Infinite integrals raise DomainError.
double uni_rvar_quadrature(const MarginalModel& m, const LevelRange& range);

double tvar_var_ratio(const MarginalModel& m, double alpha);
double ratio_limit(const MarginalModel& m);

}  // namespace rvar
