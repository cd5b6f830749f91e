#pragma once

// Executable closedness argument for K = {Ax : x >= 0}: a convergent
// sequence v_k in K is decomposed as v_k = lambda_k A u_k with u_k optimal,
// a subsequence with a common support is extracted (finitely many supports
// stand in for compactness of [0,1]^n), its limit u is formed, and the limit
// point is recovered as lambda A u with lambda = |v| / |Au|.

#include <cstdint>
#include <vector>

#include "farkas/linalg.hpp"

namespace farkas {

struct ClosednessCase {
  Mat A;
  Vec limit;            // v = lim v_k
  Vec recovered_x;      // lambda * u
  Support subsequence_support;
  std::size_t subsequence_length = 0;
  double lambda = 0;             // |v| / |Au|
  double lambda_gap = 0;         // |lambda_k - lambda| at the last subsequence term
  double u_gap = 0;              // |u_k - u| at the last subsequence term
  double image_norm = 0;         // |Au|
  double c_bound = 0;            // c_lower_bound(A)
  bool mu_step_ok = false;       // mu-reduction leaves z >= 0 with a smaller support and Az != Au_k
  bool limit_member = false;     // verify_membership(A, v, lambda u)
  bool passed = false;
};

struct ClosednessReport {
  int count = 0;
  int passed = 0;
  int zero_limits = 0;           // sequences converging to v = 0
  double min_c_bound = 0;
  double max_lambda_gap = 0;
  std::vector<ClosednessCase> failures;
};

struct ClosednessOptions {
  Index max_rows = 4;
  Index max_cols = 6;
  int terms = 30;
  double membership_tol = 1e-7;
};

/// One random convergent sequence x_k = lambda_k (x_inf + 2^-k d) with
/// x_inf, d >= 0 and lambda_k = lambda_0 (1 + w 2^-k), pushed through the
/// argument.
ClosednessCase closedness_case(std::uint64_t seed, const ClosednessOptions& opt = {});

ClosednessReport closedness_suite(int count, std::uint64_t seed, const ClosednessOptions& opt = {});

}  // namespace farkas
