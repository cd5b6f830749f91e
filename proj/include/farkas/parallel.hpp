#pragma once

// Batch kernels over many independent instances. The OpenMP path and the
// serial reference return identical results in input order.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "farkas/cone.hpp"
#include "farkas/execution.hpp"

namespace farkas {

struct BatchOutcome {
  std::optional<FarkasResult> result;  // empty on error
  std::string error;
  /// Both verifiers applied to the projection-derived certificates
  /// (x = coeffs and y = v - b), independently of the branch taken.
  bool membership_accepts = false;
  bool separation_accepts = false;
  /// The certificate of the taken branch verifies.
  bool verified = false;
};

std::vector<BatchOutcome> decide_batch(std::span<const ConeInstance> instances, double tol,
                                       Execution exec);

struct DichotomyTally {
  std::size_t total = 0;
  std::size_t membership = 0;
  std::size_t separation = 0;
  std::size_t borderline = 0;  // excluded from the failure counts below
  std::size_t errors = 0;
  std::size_t both_accept = 0;
  std::size_t neither_accepts = 0;
  std::size_t unverified = 0;  // taken branch's certificate rejected
  std::size_t oracle_checked = 0;
  std::size_t oracle_mismatch = 0;

  DichotomyTally& operator+=(const DichotomyTally& o);
  std::size_t failures() const { return errors + both_accept + neither_accepts + unverified + oracle_mismatch; }
};

/// Decides every instance and tallies the dichotomy. With `with_oracle`, the
/// branch of each non-borderline instance is compared against the exact
/// oracle (instances with m or n above 6 are left unchecked).
DichotomyTally dichotomy_sweep(std::span<const ConeInstance> instances, double tol,
                               bool with_oracle, Execution exec);

}  // namespace farkas
