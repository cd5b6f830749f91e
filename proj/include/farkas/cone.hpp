#pragma once

// Projection onto K = {Ax : x >= 0}, the Farkas decision, and independent
// certificate checkers.

#include <string_view>
#include <variant>

#include "farkas/linalg.hpp"

namespace farkas {

/// The generator matrix A (columns a_1..a_n) and the query vector b.
/// A = 0 is allowed and handled by every operation.
class ConeInstance {
 public:
  /// Throws DimensionMismatch (b.size() != A.rows(), or an empty dimension)
  /// and NonFinite (NaN or infinity anywhere).
  ConeInstance(Mat A, Vec b);

  const Mat& A() const noexcept { return A_; }
  const Vec& b() const noexcept { return b_; }
  Index rows() const noexcept { return A_.rows(); }
  Index cols() const noexcept { return A_.cols(); }

  /// The same cone with a different query vector.
  ConeInstance with_b(Vec b) const { return ConeInstance(A_, std::move(b)); }

  friend bool operator==(const ConeInstance& x, const ConeInstance& y) {
    return x.A_.rows() == y.A_.rows() && x.A_.cols() == y.A_.cols() && x.A_ == y.A_ &&
           x.b_ == y.b_;
  }

 private:
  Mat A_;
  Vec b_;
};

/// 1e-9 * (1 + max(|A|_max, |b|_inf)).
double default_tol(const ConeInstance& inst);

struct ProjectionResult {
  Vec coeffs;       // x* >= 0
  Vec point;        // v = A x*, the nearest point of K to b
  double distance;  // |v - b|
  int iterations;   // active-set pivots
};

struct MembershipCertificate {
  Vec x;
  double residual;  // |Ax - b|
};

/// y = v - b, left unnormalized so that |y| = delta and -<b,y> >= delta^2.
struct SeparationCertificate {
  Vec y;
  double delta;
  Vec margins;     // A^T y
  double bmargin;  // <b, y>
};

enum class Branch { Membership, Separation };
std::string_view to_string(Branch b) noexcept;

struct FarkasResult {
  std::variant<MembershipCertificate, SeparationCertificate> certificate;
  ProjectionResult projection;
  /// tol_member < delta <= 10 * tol_member.
  bool borderline = false;

  Branch branch() const noexcept {
    return std::holds_alternative<MembershipCertificate>(certificate) ? Branch::Membership
                                                                      : Branch::Separation;
  }
  const MembershipCertificate& membership() const {
    return std::get<MembershipCertificate>(certificate);
  }
  const SeparationCertificate& separation() const {
    return std::get<SeparationCertificate>(certificate);
  }
};

/// Nearest point of K to b by a Lawson-Hanson active-set NNLS solve.
///
/// Entering and leaving variables are chosen by largest violation and
/// smallest ratio respectively, ties going to the smallest index, so the
/// pivot sequence is a function of the input alone. `tol` is the absolute
/// rank threshold used by the least-squares subproblems.
///
/// Throws IterationLimit after 10 n (n + 1) pivots.
ProjectionResult project_onto_cone(const ConeInstance& inst, double tol);
ProjectionResult project_onto_cone(const ConeInstance& inst);

/// Membership iff delta <= tol * (1 + |b|); otherwise a separation
/// certificate built from the projection.
FarkasResult farkas_decide(const ConeInstance& inst, double tol);
FarkasResult farkas_decide(const ConeInstance& inst);

enum class VerifyReason {
  Accepted,
  DimensionMismatch,
  NonFinite,
  NegativeCoefficient,  // some x_i < -tol
  Residual,             // |Ax - b| > tol * (1 + |b|)
  DualInfeasible,       // some <a_i, y> < -tol
  NotSeparating,        // <b, y> >= -tol
};
std::string_view to_string(VerifyReason r) noexcept;

struct Verdict {
  bool accepted;
  VerifyReason reason;
  explicit operator bool() const noexcept { return accepted; }
};

/// Accepts iff x >= -tol and |Ax - b| <= tol * (1 + |b|). No solving.
Verdict verify_membership(const ConeInstance& inst, const MembershipCertificate& cert, double tol);
/// Accepts iff A^T y >= -tol and <b, y> < -tol. Only cert.y is consulted.
Verdict verify_separation(const ConeInstance& inst, const SeparationCertificate& cert, double tol);

/// Fills residual from x.
MembershipCertificate make_membership(const ConeInstance& inst, Vec x);
/// Fills margins, bmargin and delta = |y| from y.
SeparationCertificate make_separation(const ConeInstance& inst, Vec y);
/// Rescales y to unit length (margins and bmargin follow).
SeparationCertificate normalized(const SeparationCertificate& cert);

/// <w, v - b>: the one-sided derivative at 0 of t -> |v - b + t w|^2 / 2.
/// Nonnegative for w in {a_1, ..., a_n, -v} when v is the projection of b.
double directional_derivative_check(const Vec& v, const Vec& b, const Vec& w);

}  // namespace farkas
