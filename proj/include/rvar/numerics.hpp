#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace rvar::numerics {

using Integrand = std::function<double(double)>;

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

// Globally adaptive Gauss-Kronrod (G7/K15) on a finite interval. The tolerance is
// relative to the integral; panels at their round-off floor are not split
// further.
QuadratureResult integrate(const Integrand& f, double a, double b, double rel_tol = 1e-12);

// Same, split at interior breakpoints (kinks or jumps of f).
QuadratureResult integrate_pieces(const Integrand& f, const std::vector<double>& points,
                                  double rel_tol = 1e-12);

// int_0^inf f(t) dt via t = s / (1 - s).
QuadratureResult integrate_half_line(const Integrand& f, double rel_tol = 1e-12);

// Boundary of a monotone predicate: pred(lo) is true, pred(hi) is false, and
// the result is the point where pred switches, to about one ulp. The log
// variant bisects geometrically and requires 0 < lo, hi.
double bisect(const std::function<bool(double)>& pred, double lo, double hi, int max_iter = 200);
double bisect_log(const std::function<bool(double)>& pred, double lo, double hi, int max_iter = 200);

// Runs body(i) for i in [0, n) on a small worker pool. Results must be written
// by index; the first exception (lowest index) is rethrown after all workers join.
template <class Body>
void parallel_for(std::size_t n, Body&& body, unsigned max_workers = 0) {
  if (n == 0) return;
  unsigned workers = max_workers ? max_workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace rvar::numerics
