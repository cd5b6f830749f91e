#pragma once

// The cone generated by C = {(x, y) : |x| < 1, y <= ln(1 - x^2)}: a closed
// convex set whose generated cone {lambda z : lambda >= 0, z in C} is the
// open lower half-plane plus the origin, hence not closed.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace farkas::lncone {

using Point = std::array<double, 2>;

/// p = lambda * (x, y) with (x, y) in C.
struct Witness {
  double lambda;
  double x;
  double y;
};

struct Membership {
  bool member;
  /// Present for members other than the origin.
  std::optional<Witness> witness;
};

bool in_base_set(double x, double y);

/// Member iff p = 0 or p_2 < 0. For p_1 != 0 the scale lambda is found by
/// bisection on ln(1 - p_1^2 / lambda^2) >= p_2 / lambda.
Membership membership(const Point& p);

struct WitnessCheck {
  bool valid;
  double reconstruction_error;  // max_i |lambda * (x, y)_i - p_i|
  double inequality_slack;      // ln(1 - x^2) - y, >= 0 when valid
};

WitnessCheck check_witness(const Point& p, const Witness& w, double tol);

struct DemoRow {
  int k;  // 0 for the limit row
  Point p;
  Membership result;
  bool witness_ok;
};

struct DemoReport {
  std::vector<DemoRow> sequence;  // p_k = (1, -1/k), k = 1..k_max
  DemoRow limit;                  // (1, 0)
  /// Every p_k certified in the cone and the limit outside it.
  bool not_closed;
};

DemoReport nonclosedness_demo(int k_max, double tol = 1e-9);

/// Points of C with x = +-(1 - 10^-u), u uniform in [0, 12], and y at or
/// below the boundary. Their first coordinates fill the open interval (-1, 1).
std::vector<Point> sample_base_set(int count, std::uint64_t seed);

}  // namespace farkas::lncone
