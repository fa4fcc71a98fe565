#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rvar/dependence.hpp"
#include "rvar/marginals.hpp"
#include "rvar/orthant.hpp"
#include "rvar/sample_matrix.hpp"

// Empirical orthant estimators. One column (`free_col`, 0-based) is the
// measured coordinate; `x_fixed` lists the remaining d - 1 coordinates in
// column order. The lower side conditions on X_k <= x_k for every other
// column, the upper side on X_k > x_k.

namespace rvar {

struct EstimatorConfig {
  std::size_t m = 250;
  LevelRange range{0.95, 0.99};
};

// Weak-inequality count: #{X <= x} / n.
double ecdf(const SampleMatrix& s, std::span<const double> x);
// Strict count: #{X > x} / n.
double esurv(const SampleMatrix& s, std::span<const double> x);

// Inf-type empirical quantile of one column: order statistic ceil(n alpha).
double emp_marginal_var(const SampleMatrix& s, std::size_t col, double alpha);

// Throw InfeasibleLevel when the conditioning set is empty or the level is unreachable.
double emp_lower_var(const SampleMatrix& s, double u, std::size_t free_col, std::span<const double> x_fixed);
double emp_upper_var(const SampleMatrix& s, double v, std::size_t free_col, std::span<const double> x_fixed);

// m-term averages of emp_lower_var at u_k = a1 + k (B_n - a1)/m, resp. of
// emp_upper_var at v_k = C_n + k (a2 - C_n)/m. Throw DegenerateRange when the
// band is empty.
double emp_lower_rvar(const SampleMatrix& s, const EstimatorConfig& cfg, std::size_t free_col,
                      std::span<const double> x_fixed);
double emp_upper_rvar(const SampleMatrix& s, const EstimatorConfig& cfg, std::size_t free_col,
                      std::span<const double> x_fixed);

// Empirical counterpart of an orthant curve kind for d = 2 samples; tvar kinds
// use alpha2 = 1.
double emp_estimate(const SampleMatrix& s, const CurveSpec& spec, std::size_t m, double x_fixed);

struct ConsistencyReport {
  std::uint64_t seed = 0;
  std::size_t reps = 0;
  std::size_t n = 0;
  std::vector<double> grid;
  std::vector<double> theoretical;
  // Across successful replications at each grid point.
  std::vector<double> mean_estimate;
  std::vector<double> sd_estimate;
  std::vector<double> mean_deviation;  // mean of (estimate - theoretical)
  std::vector<double> sd_deviation;
  std::vector<double> mean_abs_rel_deviation;
  std::vector<std::size_t> successes;
  // "rep <r> point <k>: <message>" for each estimator failure.
  std::vector<std::string> failures;
};

// Seed of replication r: a SplitMix64 scramble of (seed, r).
std::uint64_t replication_seed(std::uint64_t seed, std::size_t rep);

// Replications run in parallel; each draws its own sample from replication_seed.
ConsistencyReport consistency_experiment(const BivariateModel& b, std::size_t reps, std::size_t n,
                                         const CurveSpec& spec, std::size_t m, const std::vector<double>& grid,
                                         std::uint64_t seed);

}  // namespace rvar
