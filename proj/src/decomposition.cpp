#include "farkas/decomposition.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "farkas/cone.hpp"
#include "farkas/error.hpp"
#include "farkas/random.hpp"

namespace farkas {

namespace {

// z - mu d with mu the largest step keeping z >= 0 along the positive
// entries of d. The blocking component is zeroed exactly.
MuStep step_along(const Vec& z, const Vec& d) {
  Index arg = -1;
  double mu = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < z.size(); ++i) {
    if (d(i) <= 0) continue;
    const double ratio = z(i) / d(i);
    if (ratio < mu) {
      mu = ratio;
      arg = i;
    }
  }
  MuStep out{mu, z - mu * d};
  out.z(arg) = 0.0;
  out.z = out.z.cwiseMax(0.0);
  return out;
}

Vec clip_nonnegative(const Vec& x, double tol, const char* who) {
  if (x.size() && x.minCoeff() < -tol * (1.0 + x.cwiseAbs().maxCoeff()))
    throw Error(ErrorCode::InvalidArgument, std::string(who) + ": x must be nonnegative");
  return x.cwiseMax(0.0);
}

// Next k-subset of {0..n-1} in lexicographic order; false after the last.
bool next_combination(std::vector<Index>& idx, Index n) {
  const Index k = static_cast<Index>(idx.size());
  for (Index i = k - 1; i >= 0; --i) {
    if (idx[static_cast<std::size_t>(i)] < n - k + i) {
      ++idx[static_cast<std::size_t>(i)];
      for (Index j = i + 1; j < k; ++j)
        idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

MuStep mu_reduce(const Vec& ucur, const Vec& udir, double tol) {
  if (ucur.size() != udir.size())
    throw Error(ErrorCode::SupportMismatch, "mu_reduce: length mismatch");
  if (udir.size() == 0 || udir.minCoeff() < -tol)
    throw Error(ErrorCode::SupportMismatch, "mu_reduce: direction must be nonnegative");
  if (ucur.minCoeff() < -tol)
    throw Error(ErrorCode::SupportMismatch, "mu_reduce: current vector must be nonnegative");
  const Support dir = Support::of(udir, tol);
  if (dir.empty()) throw Error(ErrorCode::SupportMismatch, "mu_reduce: zero direction");
  for (Index i : dir)
    if (!(ucur(i) > tol))
      throw Error(ErrorCode::SupportMismatch,
                  "mu_reduce: direction support not contained in current support");

  Vec d = Vec::Zero(udir.size());
  for (Index i : dir) d(i) = udir(i);
  return step_along(ucur.cwiseMax(0.0), d);
}

SupportWitness reduce_to_independent_support(const Mat& A, const Vec& x, double tol) {
  if (x.size() != A.cols())
    throw Error(ErrorCode::DimensionMismatch, "reduce: x has wrong length");
  const Index n = A.cols();
  Vec z = clip_nonnegative(x, tol, "reduce");
  const Vec target = A * z;

  Support S = Support::of(z, tol);
  for (Index step = 0; step <= n; ++step) {
    for (Index i = 0; i < n; ++i)
      if (!S.contains(i)) z(i) = 0.0;
    if (S.empty()) break;
    const Vec dc = kernel_direction(A, S, tol);
    if (dc.size() == 0) break;
    Vec d = scatter(dc, S, n);
    if (d.maxCoeff() <= 0) d = -d;
    z = step_along(z, d).z;
    S = Support::of(z, tol);
  }

  // Re-solve on the final support; kernel steps accumulate rounding.
  if (!S.empty()) {
    try {
      const Vec polished = lstsq_on_support(A, target, S, tol);
      bool ok = true;
      for (Index i : S) ok = ok && polished(i) > 0;
      if (ok) z = polished;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RankDeficient) throw;
    }
  }
  return {z, S, Minimality::IndependentColumns};
}

SupportWitness minimal_support_exact(const Mat& A, const Vec& x, Index nmax, double tol) {
  if (x.size() != A.cols())
    throw Error(ErrorCode::DimensionMismatch, "minimal support: x has wrong length");
  const Index n = A.cols();
  if (n > nmax)
    throw Error(ErrorCode::TooLarge, "minimal support: n = " + std::to_string(n) +
                                         " exceeds nmax = " + std::to_string(nmax));
  const Vec target = A * clip_nonnegative(x, tol, "minimal support");
  const double tol_member = tol * (1.0 + target.norm());
  if (target.norm() <= tol_member) return {Vec::Zero(n), Support(), Minimality::Global};

  // A minimal support has independent columns, so dependent subsets are
  // skipped without a projection.
  const Index kmax = std::min<Index>(n, A.rows());
  for (Index k = 1; k <= kmax; ++k) {
    std::vector<Index> idx(static_cast<std::size_t>(k));
    std::iota(idx.begin(), idx.end(), Index{0});
    do {
      const Support S(idx);
      const Mat As = columns(A, S);
      if (rank(As, tol) < static_cast<std::size_t>(k)) continue;
      const ProjectionResult p = project_onto_cone(ConeInstance(As, target), tol);
      if (p.distance <= tol_member) {
        const Vec z = scatter(p.coeffs, S, n);
        return {z, Support::of(z, tol), Minimality::Global};
      }
    } while (next_combination(idx, n));
  }
  throw Error(ErrorCode::RankDeficient, "minimal support: no independent support reproduces Ax");
}

ConicDecomposition optimalize(const Mat& A, const Vec& x, OptimalizeMode mode, double tol) {
  if (x.size() != A.cols())
    throw Error(ErrorCode::DimensionMismatch, "optimalize: x has wrong length");
  const Index n = A.cols();
  const Vec xc = clip_nonnegative(x, tol, "optimalize");
  if ((A * xc).norm() <= tol) {
    Vec e1 = Vec::Zero(n);
    e1(0) = 1.0;
    return {0.0, e1, Support{0}};
  }
  const SupportWitness w = mode == OptimalizeMode::Exact
                               ? minimal_support_exact(A, xc, kDefaultMaxColumns, tol)
                               : reduce_to_independent_support(A, xc, tol);
  const double lambda = w.z.norm();
  Vec u = (w.z / lambda).cwiseMin(1.0);
  return {lambda, std::move(u), w.support};
}

double c_lower_bound(const Mat& A, Index nmax, double tol) {
  const Index n = A.cols();
  if (n > nmax)
    throw Error(ErrorCode::TooLarge, "c_lower_bound: n = " + std::to_string(n) +
                                         " exceeds nmax = " + std::to_string(nmax));
  if (A.size() == 0 || A.cwiseAbs().maxCoeff() == 0.0)
    throw Error(ErrorCode::ZeroMatrix, "c_lower_bound: A = 0");

  double best = std::numeric_limits<double>::infinity();
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t mask = 1; mask < count; ++mask) {
    const Support S = Support::from_mask(mask, n);
    if (static_cast<Index>(S.size()) > A.rows()) continue;
    if (rank(columns(A, S), tol) < S.size()) continue;
    best = std::min(best, sigma_min_on_support(A, S));
  }
  if (!std::isfinite(best))
    throw Error(ErrorCode::ZeroMatrix, "c_lower_bound: every column is zero at tolerance");
  return best;
}

double c_sample_estimate(const Mat& A, int samples, std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorCode::InvalidArgument, "c_sample_estimate: samples >= 1");
  const Index n = A.cols();
  const double tol = default_tol(A);
  Rng rng(seed);
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    // Roughly half the coordinates are switched off so that small supports
    // (where the infimum tends to sit) are sampled often.
    Vec x = Vec::Zero(n);
    for (Index i = 0; i < n; ++i)
      if (rng.unit() < 0.5) x(i) = rng.unit();
    if (x.maxCoeff() <= 0) x(static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)))) = 1.0;
    const ConicDecomposition d = optimalize(A, x, OptimalizeMode::Heuristic, tol);
    if (d.lambda > 0) best = std::min(best, (A * d.u).norm());
  }
  return best;
}

}  // namespace farkas
