#pragma once

// Optimal vectors and minimal-support representations of points of K.
//
// A vector u is optimal when u lies in [0,1]^n, |u| = 1, and no z >= 0 with
// Az = Au has fewer nonzero components. Every v = Ax with x >= 0 can be
// written v = lambda * A u with lambda >= 0 and u optimal.

#include <cstdint>

#include "farkas/linalg.hpp"

namespace farkas {

struct ConicDecomposition {
  double lambda;  // >= 0
  Vec u;          // unit length, entries in [0, 1]
  Support support;

  Vec point(const Mat& A) const { return lambda * (A * u); }
};

enum class Minimality {
  /// No nonnegative z' with Az' = Az has a smaller support.
  Global,
  /// The support columns are linearly independent.
  IndependentColumns,
};

struct SupportWitness {
  Vec z;
  Support support;
  Minimality minimal;
};

struct MuStep {
  double mu;
  Vec z;
};

/// z = ucur - mu * udir with mu = min over supp(udir) of ucur_i / udir_i.
/// The minimizing component (smallest index on ties) is set to exactly 0.
///
/// Throws SupportMismatch unless udir >= 0, udir != 0, and ucur_i > 0
/// wherever udir_i > 0 (supports taken at `tol`).
MuStep mu_reduce(const Vec& ucur, const Vec& udir, double tol);

/// Repeatedly removes a kernel direction of the support columns until they
/// are independent. Preserves Az = Ax to within tol * (1 + |Ax|).
SupportWitness reduce_to_independent_support(const Mat& A, const Vec& x, double tol);

inline constexpr Index kDefaultMaxColumns = 16;

/// Globally minimal support by enumeration of supports in increasing size,
/// lexicographically smallest first, each tested by projecting Ax onto the
/// sub-cone. Throws TooLarge when n > nmax.
SupportWitness minimal_support_exact(const Mat& A, const Vec& x, Index nmax, double tol);

enum class OptimalizeMode { Exact, Heuristic };

/// lambda = |z|, u = z / |z| for a reduced representation z of Ax, or
/// lambda = 0, u = e_1 when Ax vanishes.
ConicDecomposition optimalize(const Mat& A, const Vec& x, OptimalizeMode mode, double tol);

/// Positive lower bound on inf |Au| over optimal u: the smallest singular
/// value over all column subsets that are linearly independent at `tol`.
/// Throws TooLarge (n > nmax) or ZeroMatrix.
double c_lower_bound(const Mat& A, Index nmax, double tol);

/// Smallest |Au| seen over `samples` heuristic optimalizations of random
/// x >= 0. Infinity if every sample maps to 0.
double c_sample_estimate(const Mat& A, int samples, std::uint64_t seed);

}  // namespace farkas
