#pragma once

// Reference implementations for validating the floating-point path on small
// instances. Nothing here calls into cone.cpp or decomposition.cpp: the exact
// routines do their own rational elimination, and the grid check only
// evaluates |Ax - b|.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "farkas/cone.hpp"
#include "farkas/execution.hpp"

namespace farkas::oracle {

/// Arbitrary-precision rational, always canonical (lowest terms, q > 0).
using Rational = mpq_class;
using RVec = std::vector<Rational>;

/// Parses "p", "p/q", or a decimal such as "-1.25e-3" exactly. Throws
/// InvalidArgument on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);
/// "p" when q = 1, else "p/q".
std::string format_rational(const Rational& r);

class RMat {
 public:
  RMat() = default;
  RMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

  friend bool operator==(const RMat&, const RMat&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;  // column-major
};

struct ExactInstance {
  RMat A;
  RVec b;

  /// Throws DimensionMismatch.
  ExactInstance(RMat A, RVec b);
  friend bool operator==(const ExactInstance&, const ExactInstance&) = default;
};

/// Exact conversion (every finite double is a dyadic rational).
ExactInstance to_exact(const ConeInstance& inst);
RVec to_exact(const Vec& v);
/// Nearest-double conversion.
ConeInstance to_double(const ExactInstance& inst);

struct ExactDecision {
  Branch branch;
  RVec x;  // membership: x >= 0, Ax = b
  RVec y;  // separation: A^T y >= 0, <b, y> < 0
};

inline constexpr std::size_t kMaxExactDecideDim = 6;
inline constexpr std::size_t kMaxExactSupportCols = 12;

/// Membership by enumerating independent column subsets S and solving
/// A_S x = b exactly. Otherwise the exact projection is found by
/// enumerating independent S, solving the normal equations, and keeping the
/// one that satisfies the optimality conditions; y = v - b.
/// Throws TooLarge when m or n exceeds 6, and InvalidArgument if neither
/// branch can be certified (which would contradict the alternative).
ExactDecision exact_farkas_decide(const ExactInstance& inst);

/// Zero-tolerance certificate checks.
bool check_exact_membership(const ExactInstance& inst, const RVec& x);
bool check_exact_separation(const ExactInstance& inst, const RVec& y);

/// Minimum number of nonzeros of z >= 0 with Az = Ax. Throws TooLarge for
/// n > 12.
std::size_t exact_min_support(const RMat& A, const RVec& x);

/// Smallest |Ag - b| over the grid g in {0, h, ..., steps*h}^n, h = R/steps.
double grid_min_distance(const ConeInstance& inst, double R, int steps, Execution exec);

/// Grid-sampled check that `result` is the nearest point: the reported data
/// must be self-consistent, no grid point may come closer than delta, and
/// the best grid point must be within the grid resolution of delta.
/// R = 2 (|b| + delta + 1) / (smallest nonzero column norm), enlarged to
/// cover the reported coefficients. Throws TooLarge for n > 4.
bool grid_projection_check(const ConeInstance& inst, const ProjectionResult& result, int steps,
                           Execution exec = Execution::Parallel);

}  // namespace farkas::oracle
