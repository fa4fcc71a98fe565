#include "rvar/numerics.hpp"

#include <cmath>
#include <limits>

#include "rvar/errors.hpp"

namespace rvar::numerics {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxSegments = 4000;

// Kronrod 15-point nodes (positive half) and weights; Gauss 7-point weights
// sit at the odd Kronrod nodes.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool splittable;
  bool operator<(const Segment& o) const { return error < o.error; }
};

// One G7/K15 panel with the QUADPACK error heuristic, including its round-off floor.
Segment panel(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  double resabs = std::fabs(resk);
  double fv1[7];
  double fv2[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    fv1[j] = f(center - dx);
    fv2[j] = f(center + dx);
    const double sum = fv1[j] + fv2[j];
    resk += kWgk[j] * sum;
    resabs += kWgk[j] * (std::fabs(fv1[j]) + std::fabs(fv2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * sum;
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::fabs(fc - mean);
  for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::fabs(fv1[j] - mean) + std::fabs(fv2[j] - mean));

  const double scale = std::fabs(half);
  resk *= half;
  resabs *= scale;
  resasc *= scale;
  double err = std::fabs((resk - resg * half));
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(50.0 * kEps * resabs, err);
  const double mid = center;
  const bool splittable = mid > a && mid < b;
  return {a, b, resk, err, splittable};
}

}  // namespace

QuadratureResult integrate(const Integrand& f, double a, double b, double rel_tol) {
  if (a == b) return {};
  if (!(std::isfinite(a) && std::isfinite(b))) throw DomainError("integrate: bounds must be finite");
  std::vector<Segment> heap;
  heap.push_back(panel(f, a, b));
  double total = heap.front().value;
  double total_err = heap.front().error;
  // Panels that cannot be refined further (width at machine resolution).
  double frozen_value = 0.0;
  double frozen_err = 0.0;
  int segments = 1;
  while (!heap.empty()) {
    const double target = std::max(rel_tol * std::fabs(total), 1e-300);
    if (total_err <= target || segments >= kMaxSegments) break;
    std::pop_heap(heap.begin(), heap.end());
    const Segment worst = heap.back();
    heap.pop_back();
    // A panel already at its round-off floor gains nothing from splitting.
    if (!worst.splittable || worst.error <= 50.0 * kEps * std::fabs(worst.value)) {
      frozen_value += worst.value;
      frozen_err += worst.error;
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    const Segment left = panel(f, worst.a, mid);
    const Segment right = panel(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end());
    ++segments;
  }
  // Re-sum to shed the drift of incremental updates.
  double value = frozen_value;
  double error = frozen_err;
  for (const auto& s : heap) {
    value += s.value;
    error += s.error;
  }
  if (!std::isfinite(value)) throw DomainError("integrate: non-finite integral");
  return {value, error};
}

QuadratureResult integrate_pieces(const Integrand& f, const std::vector<double>& points,
                                  double rel_tol) {
  QuadratureResult total;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const auto piece = integrate(f, points[i], points[i + 1], rel_tol);
    total.value += piece.value;
    total.error += piece.error;
  }
  return total;
}

QuadratureResult integrate_half_line(const Integrand& f, double rel_tol) {
  auto mapped = [&f](double s) {
    if (s >= 1.0) return 0.0;
    const double one_minus = 1.0 - s;
    const double v = f(s / one_minus) / (one_minus * one_minus);
    return std::isfinite(v) ? v : 0.0;
  };
  return integrate(mapped, 0.0, 1.0, rel_tol);
}

double bisect(const std::function<bool(double)>& pred, double lo, double hi, int max_iter) {
  for (int i = 0; i < max_iter; ++i) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    (pred(mid) ? lo : hi) = mid;
  }
  return lo;
}

double bisect_log(const std::function<bool(double)>& pred, double lo, double hi, int max_iter) {
  if (!(lo > 0.0) || !(hi > 0.0)) throw ContractViolation("bisect_log: bracket must be positive");
  for (int i = 0; i < max_iter; ++i) {
    double mid = std::sqrt(lo) * std::sqrt(hi);
    if (hi / lo < 4.0) mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    (pred(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace rvar::numerics
