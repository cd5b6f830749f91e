#include "farkas/lncone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "farkas/error.hpp"
#include "farkas/random.hpp"

namespace farkas::lncone {

bool in_base_set(double x, double y) {
  return std::abs(x) < 1.0 && y <= std::log1p(-x * x);
}

namespace {

// Nonnegative exactly when (p_1, p_2) / lambda lies in C.
double gap(const Point& p, double lambda) {
  const double x = p[0] / lambda;
  if (std::abs(x) >= 1.0) return -std::numeric_limits<double>::infinity();
  return std::log1p(-x * x) - p[1] / lambda;
}

}  // namespace

Membership membership(const Point& p) {
  if (!std::isfinite(p[0]) || !std::isfinite(p[1]))
    throw Error(ErrorCode::NonFinite, "lncone: non-finite point");
  if (p[0] == 0.0 && p[1] == 0.0) return {true, std::nullopt};
  if (!(p[1] < 0.0)) return {false, std::nullopt};
  if (p[0] == 0.0) return {true, Witness{1.0, 0.0, p[1]}};

  // In s = 1/lambda the gap is concave with gap(0) = 0, so it is
  // nonnegative exactly for lambda beyond a single threshold.
  double lo = std::abs(p[0]);
  double hi = std::max(2.0 * lo, 1.0);
  for (int i = 0; i < 2000 && gap(p, hi) < 0; ++i) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (gap(p, mid) >= 0 ? hi : lo) = mid;
  }
  double lambda = hi;
  while (!in_base_set(p[0] / lambda, p[1] / lambda)) lambda *= 2.0;
  return {true, Witness{lambda, p[0] / lambda, p[1] / lambda}};
}

WitnessCheck check_witness(const Point& p, const Witness& w, double tol) {
  WitnessCheck c{};
  c.reconstruction_error = std::max(std::abs(w.lambda * w.x - p[0]), std::abs(w.lambda * w.y - p[1]));
  c.inequality_slack = std::abs(w.x) < 1.0 ? std::log1p(-w.x * w.x) - w.y
                                           : -std::numeric_limits<double>::infinity();
  c.valid = w.lambda > 0 && std::abs(w.x) < 1.0 && c.inequality_slack >= -tol &&
            c.reconstruction_error <= tol;
  return c;
}

DemoReport nonclosedness_demo(int k_max, double tol) {
  if (k_max < 1) throw Error(ErrorCode::InvalidArgument, "lncone demo: k_max >= 1");
  DemoReport r{};
  r.not_closed = true;
  for (int k = 1; k <= k_max; ++k) {
    DemoRow row{k, {1.0, -1.0 / k}, {}, false};
    row.result = membership(row.p);
    row.witness_ok = row.result.member && row.result.witness &&
                     check_witness(row.p, *row.result.witness, tol).valid;
    r.not_closed = r.not_closed && row.witness_ok;
    r.sequence.push_back(row);
  }
  r.limit = DemoRow{0, {1.0, 0.0}, membership({1.0, 0.0}), true};
  r.not_closed = r.not_closed && !r.limit.result.member;
  return r;
}

std::vector<Point> sample_base_set(int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    const double mag = 1.0 - std::pow(10.0, -rng.uniform(0.0, 12.0));
    const double x = rng.unit() < 0.5 ? -mag : mag;
    const double y = std::log1p(-x * x) - rng.uniform(0.0, 10.0);
    pts.push_back({x, y});
  }
  return pts;
}

}  // namespace farkas::lncone
