#pragma once

#include <cstddef>
#include <vector>

#include "rvar/dependence.hpp"
#include "rvar/empirical.hpp"
#include "rvar/marginals.hpp"
#include "rvar/sample_matrix.hpp"

// Pairs (X_k, Y_k), k = 1..n, where the X_k are comonotonic, the Y_k are
// comonotonic, and every pair shares one copula. The conditioning class is X;
// S = sum X_k is held fixed, T = sum Y_k is measured.

namespace rvar {

class AggregateModel {
 public:
  // Throws DomainError unless xs and ys are non-empty and of equal length.
  AggregateModel(std::vector<MarginalModel> xs, std::vector<MarginalModel> ys, Copula c);

  std::size_t size() const noexcept { return xs_.size(); }
  BivariateModel component(std::size_t k) const;
  // (S, T) with comonotone-sum margins.
  BivariateModel aggregate() const;
  const Copula& copula() const noexcept { return copula_; }

 private:
  std::vector<MarginalModel> xs_;
  std::vector<MarginalModel> ys_;
  Copula copula_;
};

// x_k = F_{X_k}^{-1}(F_S(s)), the component values realizing S = s.
std::vector<double> component_points(const AggregateModel& m, double fixed_total);

// Sum over k of lower_rvar(component k) at x_k.
double comonotonic_aggregate_rvar(const AggregateModel& m, const LevelRange& range, double fixed_total);

// lower_rvar of (S, T) evaluated directly on the aggregate law.
double aggregate_lower_rvar(const AggregateModel& m, const LevelRange& range, double fixed_total);

// Throws ContractViolation when some pair of columns is not rank-concordant.
void require_comonotone(const SampleMatrix& cls);

// Sample version: columns of xs and ys are the components. Each pair (X_k, Y_k)
// is estimated with emp_lower_rvar at the empirical x_k and the results summed.
double empirical_aggregate_rvar(const SampleMatrix& xs, const SampleMatrix& ys, const EstimatorConfig& cfg,
                                double fixed_total);

}  // namespace rvar
