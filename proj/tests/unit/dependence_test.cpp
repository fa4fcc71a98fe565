#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rvar/dependence.hpp"
#include "rvar/errors.hpp"

using namespace rvar;

namespace {

std::vector<Copula> copulas() { return {Independence{}, Comonotone{}, Countermonotone{}, Gumbel{1.5}, Gumbel{4.0}}; }

// Kendall tau without ties by counting inversions with a merge sort.
double kendall_tau(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ys(n), buf(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[idx[i]];
  std::uint64_t inversions = 0;
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo < n; lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, n), hi = std::min(lo + 2 * width, n);
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (ys[i] <= ys[j]) {
          buf[k++] = ys[i++];
        } else {
          inversions += mid - i;
          buf[k++] = ys[j++];
        }
      }
      while (i < mid) buf[k++] = ys[i++];
      while (j < hi) buf[k++] = ys[j++];
    }
    std::swap(ys, buf);
  }
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return 1.0 - 2.0 * static_cast<double>(inversions) / pairs;
}

}  // namespace

TEST(Copula, ExtremalValues) {
  EXPECT_DOUBLE_EQ(copula_cdf(Comonotone{}, 0.3, 0.7), 0.3);
  EXPECT_DOUBLE_EQ(copula_cdf(Independence{}, 0.3, 0.7), 0.21);
  EXPECT_NEAR(copula_cdf(Countermonotone{}, 0.3, 0.7), 0.0, 1e-16);
  EXPECT_NEAR(copula_cdf(Countermonotone{}, 0.6, 0.7), 0.3, 1e-15);
}

TEST(Copula, GumbelThetaOneIsIndependence) {
  for (double u : {0.1, 0.5, 0.93})
    for (double v : {0.05, 0.7}) EXPECT_NEAR(copula_cdf(Gumbel{1.0}, u, v), u * v, 1e-15);
}

TEST(Copula, RejectsThetaBelowOne) { EXPECT_THROW(Copula(Gumbel{0.9}), DomainError); }

TEST(Copula, FrechetBoundsAndUniformMargins) {
  for (const auto& c : copulas()) {
    for (double u : {0.0, 0.2, 0.5, 0.99, 1.0}) {
      EXPECT_NEAR(copula_cdf(c, u, 1.0), u, 1e-15) << c.describe();
      EXPECT_NEAR(copula_cdf(c, 1.0, u), u, 1e-15) << c.describe();
      for (double v : {0.1, 0.6, 0.95}) {
        const double cv = copula_cdf(c, u, v);
        EXPECT_LE(cv, std::min(u, v) + 1e-15);
        EXPECT_GE(cv, std::max(u + v - 1.0, 0.0) - 1e-15);
      }
    }
  }
}

TEST(Copula, DeficitMatchesDefinitionAndKeepsTailPrecision) {
  for (const auto& c : copulas()) {
    for (double u : {0.3, 0.9})
      for (double w : {0.2, 0.6}) EXPECT_NEAR(copula_deficit(c, u, w), u - copula_cdf(c, u, 1.0 - w), 1e-14);
  }
  // For tiny w the cancellation in u - C(u, 1 - w) would leave no digits.
  const double w = 1e-14;
  EXPECT_NEAR(copula_deficit(Independence{}, 0.9, w) / w, 0.9, 1e-12);
  EXPECT_GT(copula_deficit(Gumbel{2.0}, 0.9, w), 0.0);
  // Gumbel: u (-ln u)^(1-theta) w^theta / theta to leading order.
  const double a = -std::log(0.9);
  EXPECT_NEAR(copula_deficit(Gumbel{2.0}, 0.9, 1e-7) / (0.9 * 1e-14 / (2.0 * a)), 1.0, 1e-5);
}

TEST(Copula, GumbelIsPositivelyQuadrantDependent) {
  for (double u : {0.2, 0.5, 0.8})
    for (double v : {0.3, 0.9}) {
      EXPECT_GE(copula_cdf(Gumbel{1.5}, u, v), u * v);
      EXPECT_GE(copula_cdf(Gumbel{4.0}, u, v), copula_cdf(Gumbel{1.5}, u, v));
    }
}

TEST(BivariateModel, RejectsTailOnlyMargins) {
  EXPECT_THROW(BivariateModel(GpdTail{10, 2, 0.25, 0.05}, Exponential{1}, Independence{}), DomainError);
}

TEST(BivariateModel, JointSurvivalIdentity) {
  const BivariateModel b(Weibull{2, 50}, Gev{0, 1, 0.3}, Gumbel{1.5});
  for (double x1 : {20.0, 60.0, 120.0})
    for (double x2 : {-0.5, 1.0, 4.0}) {
      const double f1 = cdf(b.margin1(), x1), f2 = cdf(b.margin2(), x2);
      EXPECT_NEAR(joint_survival(b, x1, x2), 1.0 - f1 - f2 + joint_cdf(b, x1, x2), 1e-14);
    }
}

TEST(BivariateModel, AffineMapsMargins) {
  const BivariateModel b(Gev{0, 1, 0.2}, Gev{1, 2, 0.1}, Independence{});
  const BivariateModel t = b.affine(3.0, 2.0, -1.0, 0.5);
  EXPECT_NEAR(joint_cdf(t, 3.0 + 2.0 * 0.7, -1.0 + 0.5 * 2.2), joint_cdf(b, 0.7, 2.2), 1e-15);
}

TEST(Sampling, DeterministicForSeed) {
  const BivariateModel b(Weibull{2, 50}, Weibull{2, 150}, Gumbel{1.5});
  EXPECT_EQ(sample(b, 1000, 9), sample(b, 1000, 9));
  EXPECT_FALSE(sample(b, 1000, 9) == sample(b, 1000, 10));
}

TEST(Sampling, ComonotoneUniformRowsCoincide) {
  const BivariateModel b(Uniform{0, 1}, Uniform{0, 1}, Comonotone{});
  const SampleMatrix s = sample(b, 500, 3);
  for (std::size_t i = 0; i < s.rows(); ++i) EXPECT_DOUBLE_EQ(s(i, 0), s(i, 1));
}

TEST(Sampling, CountermonotoneUniformRowsSumToOne) {
  const BivariateModel b(Uniform{0, 1}, Uniform{0, 1}, Countermonotone{});
  const SampleMatrix s = sample(b, 500, 3);
  for (std::size_t i = 0; i < s.rows(); ++i) EXPECT_NEAR(s(i, 0) + s(i, 1), 1.0, 1e-12);
}

TEST(Sampling, GumbelKendallTau) {
  const BivariateModel b(Uniform{0, 1}, Uniform{0, 1}, Gumbel{1.5});
  const SampleMatrix s = sample(b, 100000, 2024);
  EXPECT_NEAR(kendall_tau(s.column(0), s.column(1)), 1.0 - 1.0 / 1.5, 0.01);
}

TEST(Sampling, EmpiricalJointCdfConvergesToCopula) {
  const BivariateModel b(Exponential{1}, Gev{0, 1, 0.4}, Gumbel{2.0});
  const std::size_t n = 200000;
  const SampleMatrix s = sample(b, n, 77);
  for (auto [x1, x2] : {std::pair{0.5, 0.0}, {1.5, 1.0}, {3.0, 4.0}}) {
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) k += s(i, 0) <= x1 && s(i, 1) <= x2;
    const double p = joint_cdf(b, x1, x2);
    EXPECT_NEAR(static_cast<double>(k) / n, p, 4.0 * std::sqrt(p * (1 - p) / n));
  }
}

TEST(Sampling, MarginalTailsAreUnbiased) {
  const BivariateModel b(Gev{0, 1, 0.5}, Weibull{2, 150}, Independence{});
  const std::size_t n = 200000;
  const SampleMatrix s = sample(b, n, 5);
  const double q = quantile(b.margin1(), 0.999);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) k += s(i, 0) > q;
  EXPECT_NEAR(static_cast<double>(k) / n, 1e-3, 4.0 * std::sqrt(1e-3 / n));
}
