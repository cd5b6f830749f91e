#pragma once

// Small dense linear algebra used by the cone solvers. Everything here is
// double precision; exact arithmetic lives in oracle.hpp.

#include <cstdint>
#include <initializer_list>
#include <vector>

#include <Eigen/Dense>

namespace farkas {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Unscaled base tolerance. Operations that compare against zero take an
/// explicit tolerance; default_tol() scales this to the input magnitude.
inline constexpr double kBaseTol = 1e-9;

/// 1e-9 * (1 + max(|A|_max, |b|_inf)).
double default_tol(const Mat& A, const Vec& b);
double default_tol(const Mat& A);

bool all_finite(const Mat& A);
bool all_finite(const Vec& v);

Vec make_vec(std::initializer_list<double> values);
/// Builds an m x n matrix from its columns.
Mat from_columns(std::initializer_list<std::initializer_list<double>> columns);

/// Strictly increasing set of column indices (0-based).
class Support {
 public:
  Support() = default;
  /// Throws InvalidArgument unless `indices` is strictly increasing and nonnegative.
  explicit Support(std::vector<Index> indices);
  Support(std::initializer_list<Index> indices);

  /// Indices i with x_i > tol * (1 + |x|_inf).
  static Support of(const Vec& x, double tol);
  /// Bit i of `mask` selects column i.
  static Support from_mask(std::uint64_t mask, Index n);
  static Support all(Index n);

  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  Index operator[](std::size_t k) const { return indices_[k]; }
  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }
  bool contains(Index i) const;
  /// True iff every index is < n.
  bool fits(Index n) const noexcept;
  const std::vector<Index>& indices() const noexcept { return indices_; }

  friend bool operator==(const Support&, const Support&) = default;

 private:
  std::vector<Index> indices_;
};

/// Column submatrix A_S.
Mat columns(const Mat& A, const Support& S);
/// Scatters the |S| entries of `compact` into a length-n vector.
Vec scatter(const Vec& compact, const Support& S, Index n);

/// Least squares restricted to the columns in S. Returns a length-n vector
/// that is zero off S. Column-pivoted Householder QR; ties in the pivot
/// choice go to the smallest index. Throws RankDeficient when some pivot
/// |R_kk| <= tol.
Vec lstsq_on_support(const Mat& A, const Vec& b, const Support& S, double tol);
Vec lstsq_on_support(const Mat& A, const Vec& b, const Support& S);

/// Number of pivots of the column-pivoted QR with |R_kk| > tol.
std::size_t rank(const Mat& A, double tol);

/// Smallest singular value of A_S. Zero when |S| exceeds the row count.
double sigma_min_on_support(const Mat& A, const Support& S);

/// Unit vector with a positive entry such that A_S d = 0 (up to rounding),
/// expressed in compact coordinates over S. Empty when A_S has full column
/// rank at `tol`.
Vec kernel_direction(const Mat& A, const Support& S, double tol);

}  // namespace farkas
