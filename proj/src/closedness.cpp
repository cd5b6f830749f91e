#include "farkas/closedness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "farkas/cone.hpp"
#include "farkas/decomposition.hpp"
#include "farkas/error.hpp"
#include "farkas/random.hpp"

namespace farkas {

ClosednessCase closedness_case(std::uint64_t seed, const ClosednessOptions& opt) {
  Rng rng(seed);
  const Index m = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(opt.max_rows)));
  const Index n = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(opt.max_cols)));

  ClosednessCase c;
  c.A = Mat(m, n);
  do {
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < m; ++i) c.A(i, j) = rng.uniform(-1.0, 1.0);
  } while (c.A.cwiseAbs().maxCoeff() == 0.0);
  const Mat& A = c.A;
  const double tol = default_tol(A);

  // Half the coordinates of x_inf vanish so limits often sit on a face.
  Vec x_inf = Vec::Zero(n);
  Vec d(n);
  for (Index j = 0; j < n; ++j) {
    if (rng.unit() < 0.5) x_inf(j) = rng.uniform(0.0, 1.0);
    d(j) = rng.uniform(0.0, 1.0);
  }
  const double lambda0 = rng.uniform(0.5, 2.0);
  const double wobble = rng.uniform(-0.5, 0.5);
  c.limit = lambda0 * (A * x_inf);
  c.c_bound = c_lower_bound(A, kDefaultMaxColumns, tol);

  struct Term {
    double lambda;
    Vec u;
  };
  std::vector<Term> terms;
  std::map<std::vector<Index>, std::vector<std::size_t>> by_support;
  for (int k = 1; k <= opt.terms; ++k) {
    const double t = std::ldexp(1.0, -k);
    const double lambda_k = lambda0 * (1.0 + wobble * t);
    const Vec x_k = lambda_k * (x_inf + t * d);
    ConicDecomposition dec = optimalize(A, x_k, OptimalizeMode::Exact, tol);
    by_support[dec.support.indices()].push_back(terms.size());
    terms.push_back({dec.lambda, std::move(dec.u)});
  }

  // A support that recurs along the whole tail has a closed sub-cone
  // containing the limit. Candidates are ranked by how often they occur in
  // the second half of the sequence (then by latest occurrence) and the first
  // whose sub-cone reproduces v is taken as the subsequence.
  const std::size_t tail_start = terms.size() / 2;
  struct Candidate {
    std::vector<Index> support;
    const std::vector<std::size_t>* idx;
    std::size_t tail_hits;
  };
  std::vector<Candidate> candidates;
  for (const auto& [support, idx] : by_support) {
    const auto hits = static_cast<std::size_t>(
        std::count_if(idx.begin(), idx.end(), [&](std::size_t k) { return k >= tail_start; }));
    if (hits > 0) candidates.push_back({support, &idx, hits});
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.tail_hits != b.tail_hits) return a.tail_hits > b.tail_hits;
    return a.idx->back() > b.idx->back();
  });

  const double vnorm = c.limit.norm();
  if (vnorm <= tol) {
    // Limit 0 = 0 * A e_1.
    c.lambda = 0.0;
    c.recovered_x = Vec::Zero(n);
    c.mu_step_ok = true;
    c.subsequence_length = terms.size();
  } else {
    Vec u;
    const Candidate* chosen = nullptr;
    for (const Candidate& cand : candidates) {
      const Support S(cand.support);
      if (S.empty()) continue;
      // On a fixed independent support the coefficients of v_k depend
      // continuously on v_k, so the subsequence limit solves A_S z = v.
      const Vec z = lstsq_on_support(A, c.limit, S, tol);
      const double zscale = 1.0 + z.cwiseAbs().maxCoeff();
      if (z.minCoeff() < -1e-9 * zscale || (A * z - c.limit).norm() > 1e-9 * (1.0 + vnorm)) continue;
      const Vec zp = z.cwiseMax(0.0);
      u = zp / zp.norm();
      chosen = &cand;
      break;
    }
    if (!chosen) {
      c.passed = false;
      return c;
    }
    c.subsequence_support = Support(chosen->support);
    c.subsequence_length = chosen->idx->size();
    const Term& last = terms[chosen->idx->back()];
    c.u_gap = (last.u - u).norm();
    c.image_norm = (A * u).norm();

    try {
      const MuStep step = mu_reduce(last.u, u, tol);
      // One cutoff for both counts so that the comparison is meaningful.
      const double cut = tol * (1.0 + last.u.cwiseAbs().maxCoeff());
      const auto before = (last.u.array() > cut).count();
      const auto after = (step.z.array() > cut).count();
      const double moved = (A * step.z - A * last.u).norm();
      c.mu_step_ok = step.z.minCoeff() >= 0 && after < before && moved > 0 &&
                     c.image_norm >= c.c_bound - 1e-9;
    } catch (const Error&) {
      c.mu_step_ok = false;
    }

    c.lambda = vnorm / c.image_norm;
    c.lambda_gap = std::abs(last.lambda - c.lambda);
    c.recovered_x = c.lambda * u;
  }

  const ConeInstance at_limit(A, c.limit);
  c.limit_member = static_cast<bool>(
      verify_membership(at_limit, make_membership(at_limit, c.recovered_x), opt.membership_tol));
  c.passed = c.limit_member && c.mu_step_ok && c.c_bound > 0;
  return c;
}

ClosednessReport closedness_suite(int count, std::uint64_t seed, const ClosednessOptions& opt) {
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "closedness: count >= 1");
  ClosednessReport r;
  r.min_c_bound = std::numeric_limits<double>::infinity();
  Rng seeds(seed);
  for (int i = 0; i < count; ++i) {
    ClosednessCase c = closedness_case(seeds.next(), opt);
    ++r.count;
    if (c.passed) ++r.passed;
    if (c.lambda == 0.0) ++r.zero_limits;
    r.min_c_bound = std::min(r.min_c_bound, c.c_bound);
    r.max_lambda_gap = std::max(r.max_lambda_gap, c.lambda_gap);
    if (!c.passed) r.failures.push_back(std::move(c));
  }
  return r;
}

}  // namespace farkas
