#include "rvar/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rvar/errors.hpp"
#include "rvar/orthant.hpp"

namespace rvar {

AggregateModel::AggregateModel(std::vector<MarginalModel> xs, std::vector<MarginalModel> ys, Copula c)
    : xs_(std::move(xs)), ys_(std::move(ys)), copula_(std::move(c)) {
  if (xs_.empty() || xs_.size() != ys_.size())
    throw DomainError("aggregate model needs equally many (>= 1) X and Y components");
}

BivariateModel AggregateModel::component(std::size_t k) const {
  if (k >= xs_.size()) throw DomainError("component index out of range");
  return BivariateModel(xs_[k], ys_[k], copula_);
}

BivariateModel AggregateModel::aggregate() const {
  if (xs_.size() == 1) return component(0);
  return BivariateModel(MarginalModel(ComonotoneSum{xs_}), MarginalModel(ComonotoneSum{ys_}), copula_);
}

std::vector<double> component_points(const AggregateModel& m, double fixed_total) {
  const BivariateModel agg = m.aggregate();
  const double p = cdf(agg.margin1(), fixed_total);
  const double w = survival(agg.margin1(), fixed_total);
  std::vector<double> xs;
  for (std::size_t k = 0; k < m.size(); ++k) {
    const MarginalModel& xk = m.component(k).margin1();
    xs.push_back(p <= 0.5 ? quantile(xk, p) : upper_quantile(xk, w));
  }
  return xs;
}

double comonotonic_aggregate_rvar(const AggregateModel& m, const LevelRange& range, double fixed_total) {
  const std::vector<double> xs = component_points(m, fixed_total);
  double total = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k)
    total += lower_rvar(m.component(k), range, xs[k], Component::first);
  return total;
}

double aggregate_lower_rvar(const AggregateModel& m, const LevelRange& range, double fixed_total) {
  return lower_rvar(m.aggregate(), range, fixed_total, Component::first);
}

void require_comonotone(const SampleMatrix& cls) {
  const std::size_t n = cls.rows();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cls(a, 0) < cls(b, 0); });
  for (std::size_t j = 1; j < cls.cols(); ++j) {
    for (std::size_t r = 1; r < n; ++r) {
      const std::size_t a = order[r - 1];
      const std::size_t b = order[r];
      // Rows tied in column 0 carry no ordering information.
      if (cls(a, 0) < cls(b, 0) && cls(a, j) > cls(b, j))
        throw ContractViolation("class is not comonotonic: columns 1 and " + std::to_string(j + 1) +
                                " are discordant");
    }
  }
}

double empirical_aggregate_rvar(const SampleMatrix& xs, const SampleMatrix& ys, const EstimatorConfig& cfg,
                                double fixed_total) {
  if (xs.rows() != ys.rows() || xs.cols() != ys.cols())
    throw DomainError("aggregate samples must have matching shapes");
  require_comonotone(xs);
  require_comonotone(ys);
  const std::size_t n = xs.rows();
  std::vector<double> totals(n, 0.0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < xs.cols(); ++k) totals[r] += xs(r, k);
  const auto below = static_cast<std::size_t>(
      std::count_if(totals.begin(), totals.end(), [&](double t) { return t <= fixed_total; }));
  if (below == 0) throw InfeasibleLevel("no observation has aggregate <= fixed_total");

  double sum = 0.0;
  for (std::size_t k = 0; k < xs.cols(); ++k) {
    std::vector<double> col = xs.column(k);
    std::sort(col.begin(), col.end());
    const double xk = col[below - 1];
    std::vector<double> pair;
    pair.reserve(2 * n);
    for (std::size_t r = 0; r < n; ++r) {
      pair.push_back(xs(r, k));
      pair.push_back(ys(r, k));
    }
    const double x[1] = {xk};
    sum += emp_lower_rvar(SampleMatrix(2, std::move(pair)), cfg, 1, x);
  }
  return sum;
}

}  // namespace rvar
