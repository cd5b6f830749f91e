#include "farkas/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "farkas/error.hpp"

namespace farkas {

namespace {

double max_abs(const Mat& A) { return A.size() == 0 ? 0.0 : A.cwiseAbs().maxCoeff(); }

// Column-pivoted QR of A_S. Eigen picks the column of largest remaining norm
// and, on exact ties, the first one.
Eigen::ColPivHouseholderQR<Mat> factor(const Mat& As) {
  Eigen::ColPivHouseholderQR<Mat> qr(As.rows(), As.cols());
  qr.compute(As);
  return qr;
}

Index pivots_above(const Eigen::ColPivHouseholderQR<Mat>& qr, double tol) {
  const Index diag = std::min(qr.rows(), qr.cols());
  const auto& R = qr.matrixQR();
  Index r = 0;
  // Diagonal magnitudes are non-increasing under column pivoting, so the
  // first small pivot ends the count.
  while (r < diag && std::abs(R(r, r)) > tol) ++r;
  return r;
}

}  // namespace

double default_tol(const Mat& A, const Vec& b) {
  const double bmax = b.size() == 0 ? 0.0 : b.cwiseAbs().maxCoeff();
  return kBaseTol * (1.0 + std::max(max_abs(A), bmax));
}

double default_tol(const Mat& A) { return kBaseTol * (1.0 + max_abs(A)); }

bool all_finite(const Mat& A) { return A.allFinite(); }
bool all_finite(const Vec& v) { return v.allFinite(); }

Vec make_vec(std::initializer_list<double> values) {
  Vec v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

Mat from_columns(std::initializer_list<std::initializer_list<double>> cols) {
  const Index n = static_cast<Index>(cols.size());
  const Index m = n == 0 ? 0 : static_cast<Index>(cols.begin()->size());
  Mat A(m, n);
  Index j = 0;
  for (const auto& col : cols) {
    if (static_cast<Index>(col.size()) != m)
      throw Error(ErrorCode::DimensionMismatch, "columns of unequal length");
    Index i = 0;
    for (double x : col) A(i++, j) = x;
    ++j;
  }
  return A;
}

Support::Support(std::vector<Index> indices) : indices_(std::move(indices)) {
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (indices_[k] < 0 || (k > 0 && indices_[k] <= indices_[k - 1]))
      throw Error(ErrorCode::InvalidArgument, "support indices must be strictly increasing");
  }
}

Support::Support(std::initializer_list<Index> indices)
    : Support(std::vector<Index>(indices)) {}

Support Support::of(const Vec& x, double tol) {
  const double cut = tol * (1.0 + (x.size() ? x.cwiseAbs().maxCoeff() : 0.0));
  std::vector<Index> idx;
  for (Index i = 0; i < x.size(); ++i)
    if (x(i) > cut) idx.push_back(i);
  Support s;
  s.indices_ = std::move(idx);
  return s;
}

Support Support::from_mask(std::uint64_t mask, Index n) {
  Support s;
  for (Index i = 0; i < n; ++i)
    if (mask >> i & 1u) s.indices_.push_back(i);
  return s;
}

Support Support::all(Index n) {
  Support s;
  s.indices_.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) s.indices_[static_cast<std::size_t>(i)] = i;
  return s;
}

bool Support::contains(Index i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

bool Support::fits(Index n) const noexcept { return indices_.empty() || indices_.back() < n; }

Mat columns(const Mat& A, const Support& S) {
  if (!S.fits(A.cols())) throw Error(ErrorCode::InvalidArgument, "support index out of range");
  Mat As(A.rows(), static_cast<Index>(S.size()));
  for (std::size_t k = 0; k < S.size(); ++k) As.col(static_cast<Index>(k)) = A.col(S[k]);
  return As;
}

Vec scatter(const Vec& compact, const Support& S, Index n) {
  Vec x = Vec::Zero(n);
  for (std::size_t k = 0; k < S.size(); ++k) x(S[k]) = compact(static_cast<Index>(k));
  return x;
}

Vec lstsq_on_support(const Mat& A, const Vec& b, const Support& S, double tol) {
  if (b.size() != A.rows()) throw Error(ErrorCode::DimensionMismatch, "lstsq: b has wrong length");
  if (S.empty()) throw Error(ErrorCode::InvalidArgument, "lstsq: empty support");
  const Mat As = columns(A, S);
  const Index k = As.cols();
  const auto qr = factor(As);
  if (pivots_above(qr, tol) < k)
    throw Error(ErrorCode::RankDeficient, "lstsq: columns on support are dependent");

  Vec qtb = b;
  qtb.applyOnTheLeft(qr.householderQ().adjoint());
  const Vec c_perm =
      qr.matrixQR().topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(qtb.head(k));
  const Vec c = qr.colsPermutation() * c_perm;
  return scatter(c, S, A.cols());
}

Vec lstsq_on_support(const Mat& A, const Vec& b, const Support& S) {
  return lstsq_on_support(A, b, S, default_tol(A, b));
}

std::size_t rank(const Mat& A, double tol) {
  if (A.size() == 0) return 0;
  return static_cast<std::size_t>(pivots_above(factor(A), tol));
}

double sigma_min_on_support(const Mat& A, const Support& S) {
  if (S.empty()) throw Error(ErrorCode::InvalidArgument, "sigma_min: empty support");
  const Mat As = columns(A, S);
  if (As.cols() > As.rows()) return 0.0;
  Eigen::JacobiSVD<Mat> svd(As);
  return svd.singularValues().minCoeff();
}

Vec kernel_direction(const Mat& A, const Support& S, double tol) {
  const Mat As = columns(A, S);
  const Index k = As.cols();
  const auto qr = factor(As);
  const Index r = pivots_above(qr, tol);
  if (r == k) return Vec();

  // First non-pivot column p (permuted position r): R11 t = -R12 e_p.
  Vec d_perm = Vec::Zero(k);
  d_perm(r) = 1.0;
  if (r > 0) {
    const auto R = qr.matrixQR();
    d_perm.head(r) =
        R.topLeftCorner(r, r).triangularView<Eigen::Upper>().solve(-R.block(0, r, r, 1));
  }
  Vec d = qr.colsPermutation() * d_perm;
  d /= d.norm();
  return d;
}

}  // namespace farkas
