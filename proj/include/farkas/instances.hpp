#pragma once

// Instance generation, the "farkas 1" text format, and the exhaustive
// small-integer corpus.
//
// File format (line oriented, '#' starts a comment, blank lines ignored):
//
//   farkas 1
//   m n
//   <m lines of n entries: A row-major>
//   <1 line of m entries: b>
//
// Entries are decimals ("-0.25", "1e-3") or exact rationals ("p/q").

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "farkas/cone.hpp"
#include "farkas/oracle.hpp"

namespace farkas {

enum class ForcedBranch { Membership, Separation, Random };
std::string_view to_string(ForcedBranch b) noexcept;
/// "membership" | "separation" | "random"; throws InvalidArgument.
ForcedBranch parse_forced_branch(std::string_view s);

struct GenSpec {
  Index m = 2;
  Index n = 2;
  ForcedBranch branch = ForcedBranch::Random;
  double lo = -1.0;
  double hi = 1.0;
  std::uint64_t seed = 0;
  int max_attempts = 64;
};

struct GeneratedInstance {
  ConeInstance instance;
  /// Membership: the x >= 0 with b = Ax. Separation: a y0 with A^T y0 >= 0
  /// and <b, y0> < 0. Random: empty.
  Vec witness;
  int attempts;
};

/// Entries of A (and of x / the auxiliary vector) are drawn from the dyadic
/// lattice 2^-20 Z inside [lo, hi], which keeps b = Ax exact for forced
/// membership. Forced separation first confines the columns to the
/// half-space <a, h> >= 0 of a random h, then takes b = v0 - s (v0 - r) for
/// the projection v0 of a random r. Forced branches are re-checked with the verifiers and, for
/// m, n <= 4, with the exact oracle; a failed check redraws. Throws
/// GenerationFailed after max_attempts draws.
GeneratedInstance generate(const GenSpec& spec);

struct InstanceFile {
  ConeInstance instance;
  /// Present iff some entry was written as "p/q"; then it holds every entry
  /// exactly and the writer reproduces the rational form.
  std::optional<oracle::ExactInstance> exact;
};

/// Throws ParseError (with 1-based line/column) or DimensionMismatch.
InstanceFile read_instance(std::string_view text);
/// Decimal entries in shortest round-trip form, so read(write(x)) == x bit
/// for bit.
std::string write_instance(const ConeInstance& inst);
std::string write_instance(const InstanceFile& file);

/// Every instance with 1 <= m, n <= max_dim, entries in {-r..r} and A != 0,
/// reduced modulo column order and signed permutations of the coordinates
/// (which map K and b together and so preserve the branch). Delivered in
/// batches of at most `batch` instances.
void for_each_small_instance(int max_dim, int r, std::size_t batch,
                             const std::function<void(std::span<const ConeInstance>)>& visit);

}  // namespace farkas
