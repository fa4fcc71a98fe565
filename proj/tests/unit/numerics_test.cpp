#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "rvar/numerics.hpp"

using namespace rvar::numerics;

TEST(Integrate, Polynomial) {
  const auto r = integrate([](double x) { return 3.0 * x * x; }, 0.0, 2.0);
  EXPECT_NEAR(r.value, 8.0, 1e-13);
}

TEST(Integrate, EndpointSingularity) {
  const auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-10);
  EXPECT_NEAR(r.value, 2.0, 1e-8);
}

TEST(Integrate, NarrowIntervalTerminates) {
  // Linear integrand on an interval of width 4e-9 far from zero.
  const double a = 0.95, b = 0.95 + 4e-9;
  const auto r = integrate([](double x) { return 100.0 + x; }, a, b);
  EXPECT_NEAR(r.value, (b - a) * (100.0 + 0.5 * (a + b)), 1e-20);
}

TEST(Integrate, Pieces) {
  const auto r = integrate_pieces([](double x) { return std::fabs(x - 0.3); }, {0.0, 0.3, 1.0});
  EXPECT_NEAR(r.value, 0.5 * (0.09 + 0.49), 1e-14);
}

TEST(Integrate, HalfLine) {
  const auto r = integrate_half_line([](double t) { return std::exp(-t); });
  EXPECT_NEAR(r.value, 1.0, 1e-11);
}

TEST(Bisect, FindsSwitchPoint) {
  const double r = bisect([](double x) { return x * x <= 2.0; }, 0.0, 2.0);
  EXPECT_NEAR(r, std::sqrt(2.0), 4e-16);
  const double g = bisect_log([](double x) { return x <= 1e-12; }, 1e-300, 1.0);
  EXPECT_NEAR(g, 1e-12, 1e-27);
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
}

TEST(ParallelFor, RethrowsLowestIndexError) {
  std::atomic<int> ran{0};
  try {
    parallel_for(50, [&](std::size_t i) {
      ++ran;
      if (i == 7 || i == 30) throw std::runtime_error("fail " + std::to_string(i));
    });
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "fail 7");
  }
  EXPECT_EQ(ran.load(), 50);
}
