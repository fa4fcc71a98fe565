#include "rvar/empirical.hpp"

#include <algorithm>
#include <cmath>

#include "rvar/errors.hpp"
#include "rvar/numerics.hpp"

namespace rvar {
namespace {

// Slack for u * n landing a rounding error away from an integer count.
constexpr double kCountTol = 1e-9;

void check_shape(const SampleMatrix& s, std::size_t free_col, std::span<const double> x_fixed) {
  if (s.rows() < 2) throw DomainError("empirical estimators need n >= 2");
  if (free_col >= s.cols()) throw DomainError("free column index out of range");
  if (x_fixed.size() + 1 != s.cols()) throw DomainError("x_fixed must give the other d - 1 coordinates");
}

template <class Keep>
std::vector<double> conditional_values(const SampleMatrix& s, std::size_t free_col, std::span<const double> x_fixed,
                                       Keep keep) {
  std::vector<double> out;
  for (std::size_t i = 0; i < s.rows(); ++i) {
    bool in = true;
    for (std::size_t j = 0, k = 0; j < s.cols() && in; ++j) {
      if (j == free_col) continue;
      in = keep(s(i, j), x_fixed[k++]);
    }
    if (in) out.push_back(s(i, free_col));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> lower_set(const SampleMatrix& s, std::size_t free_col, std::span<const double> x_fixed) {
  return conditional_values(s, free_col, x_fixed, [](double v, double x) { return v <= x; });
}

std::vector<double> upper_set(const SampleMatrix& s, std::size_t free_col, std::span<const double> x_fixed) {
  return conditional_values(s, free_col, x_fixed, [](double v, double x) { return v > x; });
}

// Smallest y in the sorted conditional values with #{<= y} >= u n.
double lower_from_sorted(const std::vector<double>& ys, std::size_t n, double u) {
  if (ys.empty()) throw InfeasibleLevel("empirical lower_var: conditioning set is empty");
  const double need = std::ceil(u * static_cast<double>(n) - kCountTol);
  const std::size_t k = need < 1.0 ? 1 : static_cast<std::size_t>(need);
  if (k > ys.size()) throw InfeasibleLevel("empirical lower_var: level exceeds conditioning mass");
  return ys[k - 1];
}

// Smallest y with #{> y} <= (1 - v) n.
double upper_from_sorted(const std::vector<double>& zs, std::size_t n, double v) {
  if (zs.empty()) throw InfeasibleLevel("empirical upper_var: conditioning set is empty");
  const double allowed = std::floor((1.0 - v) * static_cast<double>(n) + kCountTol);
  const std::size_t c = allowed < 0.0 ? 0 : static_cast<std::size_t>(allowed);
  if (c >= zs.size()) throw InfeasibleLevel("empirical upper_var: level below conditioning mass");
  return zs[zs.size() - c - 1];
}

std::size_t count_le(const std::vector<double>& sorted, double y) {
  return static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), y) - sorted.begin());
}

std::size_t count_gt(const std::vector<double>& sorted, double y) { return sorted.size() - count_le(sorted, y); }

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mu = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - mu) * (x - mu);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

double ecdf(const SampleMatrix& s, std::span<const double> x) {
  if (x.size() != s.cols()) throw DomainError("ecdf: point dimension mismatch");
  std::size_t count = 0;
  for (std::size_t i = 0; i < s.rows(); ++i) {
    bool in = true;
    for (std::size_t j = 0; j < s.cols() && in; ++j) in = s(i, j) <= x[j];
    count += in;
  }
  return static_cast<double>(count) / static_cast<double>(s.rows());
}

double esurv(const SampleMatrix& s, std::span<const double> x) {
  if (x.size() != s.cols()) throw DomainError("esurv: point dimension mismatch");
  std::size_t count = 0;
  for (std::size_t i = 0; i < s.rows(); ++i) {
    bool in = true;
    for (std::size_t j = 0; j < s.cols() && in; ++j) in = s(i, j) > x[j];
    count += in;
  }
  return static_cast<double>(count) / static_cast<double>(s.rows());
}

double emp_marginal_var(const SampleMatrix& s, std::size_t col, double alpha) {
  if (col >= s.cols()) throw DomainError("column index out of range");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("empirical VaR level must lie in (0, 1]");
  std::vector<double> c = s.column(col);
  std::sort(c.begin(), c.end());
  return lower_from_sorted(c, c.size(), alpha);
}

double emp_lower_var(const SampleMatrix& s, double u, std::size_t free_col, std::span<const double> x_fixed) {
  check_shape(s, free_col, x_fixed);
  if (!(u > 0.0 && u <= 1.0)) throw DomainError("emp_lower_var: level must lie in (0, 1]");
  return lower_from_sorted(lower_set(s, free_col, x_fixed), s.rows(), u);
}

double emp_upper_var(const SampleMatrix& s, double v, std::size_t free_col, std::span<const double> x_fixed) {
  check_shape(s, free_col, x_fixed);
  if (!(v >= 0.0 && v <= 1.0)) throw DomainError("emp_upper_var: level must lie in [0, 1]");
  return upper_from_sorted(upper_set(s, free_col, x_fixed), s.rows(), v);
}

double emp_lower_rvar(const SampleMatrix& s, const EstimatorConfig& cfg, std::size_t free_col,
                      std::span<const double> x_fixed) {
  check_shape(s, free_col, x_fixed);
  if (cfg.m < 1) throw DomainError("estimator needs m >= 1");
  const std::vector<double> ys = lower_set(s, free_col, x_fixed);
  const double n = static_cast<double>(s.rows());
  const double var2 = emp_marginal_var(s, free_col, cfg.range.alpha2);
  const double b_n = static_cast<double>(count_le(ys, var2)) / n;
  const double a1 = cfg.range.alpha1;
  if (!(b_n - a1 > 0.0)) throw DegenerateRange("empirical lower_rvar: F_n(x_fixed, VaR_a2) <= alpha1");
  const double step = (b_n - a1) / static_cast<double>(cfg.m);
  double total = 0.0;
  for (std::size_t k = 1; k <= cfg.m; ++k) {
    const double u = k == cfg.m ? b_n : a1 + static_cast<double>(k) * step;
    total += lower_from_sorted(ys, s.rows(), u);
  }
  return total / static_cast<double>(cfg.m);
}

double emp_upper_rvar(const SampleMatrix& s, const EstimatorConfig& cfg, std::size_t free_col,
                      std::span<const double> x_fixed) {
  check_shape(s, free_col, x_fixed);
  if (cfg.m < 1) throw DomainError("estimator needs m >= 1");
  const std::vector<double> zs = upper_set(s, free_col, x_fixed);
  const double n = static_cast<double>(s.rows());
  const double var1 = emp_marginal_var(s, free_col, std::max(cfg.range.alpha1, 1.0 / n));
  const double c_n = 1.0 - static_cast<double>(count_gt(zs, var1)) / n;
  const double a2 = cfg.range.alpha2;
  if (!(a2 - c_n > 0.0)) throw DegenerateRange("empirical upper_rvar: alpha2 <= C_n");
  const double step = (a2 - c_n) / static_cast<double>(cfg.m);
  double total = 0.0;
  for (std::size_t k = 1; k <= cfg.m; ++k) {
    const double v = k == cfg.m ? a2 : c_n + static_cast<double>(k) * step;
    total += upper_from_sorted(zs, s.rows(), v);
  }
  return total / static_cast<double>(cfg.m);
}

double emp_estimate(const SampleMatrix& s, const CurveSpec& spec, std::size_t m, double x_fixed) {
  if (s.cols() != 2) throw DomainError("emp_estimate expects a two-column sample");
  const std::size_t free_col = spec.fixed == Component::first ? 1 : 0;
  const double x[1] = {x_fixed};
  switch (spec.kind) {
    case CurveKind::lower_var: return emp_lower_var(s, spec.alpha1, free_col, x);
    case CurveKind::upper_var: return emp_upper_var(s, spec.alpha1, free_col, x);
    case CurveKind::lower_rvar:
    case CurveKind::lower_tvar:
      return emp_lower_rvar(s, EstimatorConfig{m, LevelRange(spec.alpha1, spec.alpha2)}, free_col, x);
    case CurveKind::upper_rvar:
    case CurveKind::upper_tvar:
      return emp_upper_rvar(s, EstimatorConfig{m, LevelRange(spec.alpha1, spec.alpha2)}, free_col, x);
  }
  throw DomainError("unknown curve kind");
}

std::uint64_t replication_seed(std::uint64_t seed, std::size_t rep) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(rep) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ConsistencyReport consistency_experiment(const BivariateModel& b, std::size_t reps, std::size_t n,
                                         const CurveSpec& spec, std::size_t m, const std::vector<double>& grid,
                                         std::uint64_t seed) {
  if (reps < 1) throw DomainError("consistency experiment needs reps >= 1");
  if (n < 2) throw DomainError("consistency experiment needs n >= 2");
  ConsistencyReport rep;
  rep.seed = seed;
  rep.reps = reps;
  rep.n = n;
  rep.grid = grid;
  const OrthantCurve truth = orthant_curve(b, spec, grid);
  for (const auto& v : truth.values) rep.theoretical.push_back(v.value());

  const std::size_t g = grid.size();
  // estimates[r][k]; NaN marks a failed estimate.
  std::vector<std::vector<double>> estimates(reps, std::vector<double>(g));
  std::vector<std::vector<std::string>> errors(reps);
  numerics::parallel_for(reps, [&](std::size_t r) {
    const SampleMatrix data = sample(b, n, replication_seed(seed, r));
    for (std::size_t k = 0; k < g; ++k) {
      try {
        estimates[r][k] = emp_estimate(data, spec, m, grid[k]);
      } catch (const DomainError& e) {
        estimates[r][k] = std::nan("");
        errors[r].push_back("rep " + std::to_string(r) + " point " + std::to_string(k) + ": " + e.what());
      }
    }
  });
  for (auto& e : errors) rep.failures.insert(rep.failures.end(), e.begin(), e.end());

  for (std::size_t k = 0; k < g; ++k) {
    std::vector<double> est;
    std::vector<double> dev;
    std::vector<double> rel;
    for (std::size_t r = 0; r < reps; ++r) {
      const double e = estimates[r][k];
      if (std::isnan(e)) continue;
      est.push_back(e);
      dev.push_back(e - rep.theoretical[k]);
      rel.push_back(std::fabs(e - rep.theoretical[k]) / std::fabs(rep.theoretical[k]));
    }
    rep.successes.push_back(est.size());
    const double nan = std::nan("");
    rep.mean_estimate.push_back(est.empty() ? nan : mean_of(est));
    rep.sd_estimate.push_back(est.empty() ? nan : sd_of(est));
    rep.mean_deviation.push_back(dev.empty() ? nan : mean_of(dev));
    rep.sd_deviation.push_back(dev.empty() ? nan : sd_of(dev));
    rep.mean_abs_rel_deviation.push_back(rel.empty() ? nan : mean_of(rel));
  }
  return rep;
}

}  // namespace rvar
