#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "rvar/marginals.hpp"
#include "rvar/sample_matrix.hpp"

namespace rvar {

struct Independence {};
struct Comonotone {};
struct Countermonotone {};
struct Gumbel {
  double theta = 1.0;
};

// All supported copulas are exchangeable: C(u, v) = C(v, u).
class Copula {
 public:
  using Params = std::variant<Independence, Comonotone, Countermonotone, Gumbel>;

  Copula(Independence p) : params_(p) {}
  Copula(Comonotone p) : params_(p) {}
  Copula(Countermonotone p) : params_(p) {}
  // Throws DomainError unless theta >= 1.
  Copula(Gumbel p);

  const Params& params() const noexcept { return params_; }
  std::string describe() const;

 private:
  Params params_;
};

double copula_cdf(const Copula& c, double u, double v);

// u - C(u, 1 - w) = P(U <= u, V > 1 - w), computed from the tail mass w
// without cancellation when w is small.
double copula_deficit(const Copula& c, double u, double w);

enum class Component { first = 1, second = 2 };

inline Component other(Component c) {
  return c == Component::first ? Component::second : Component::first;
}

class BivariateModel {
 public:
  // GPD tail margins are rejected: they do not define a full law.
  BivariateModel(MarginalModel m1, MarginalModel m2, Copula c);

  const MarginalModel& margin(Component k) const { return k == Component::first ? m1_ : m2_; }
  const MarginalModel& margin1() const noexcept { return m1_; }
  const MarginalModel& margin2() const noexcept { return m2_; }
  const Copula& copula() const noexcept { return copula_; }

  // Componentwise affine map (x1, x2) -> (a1 + b1 x1, a2 + b2 x2), b > 0.
  BivariateModel affine(double a1, double b1, double a2, double b2) const;

 private:
  MarginalModel m1_;
  MarginalModel m2_;
  Copula copula_;
};

double joint_cdf(const BivariateModel& b, double x1, double x2);
double joint_survival(const BivariateModel& b, double x1, double x2);

// n iid rows (x1, x2) from a mt19937_64 stream seeded with seed.
SampleMatrix sample(const BivariateModel& b, std::size_t n, std::uint64_t seed);

}  // namespace rvar
