#include <cmath>

#include <gtest/gtest.h>

#include "farkas/closedness.hpp"
#include "farkas/decomposition.hpp"
#include "farkas/error.hpp"

using namespace farkas;

namespace {
const Mat kTriple = from_columns({{1, 0}, {0, 1}, {1, 1}});
}

TEST(MuReduce, Examples) {
  auto s = mu_reduce(make_vec({2, 3}), make_vec({1, 1}), 1e-12);
  EXPECT_DOUBLE_EQ(s.mu, 2);
  EXPECT_EQ(s.z, make_vec({0, 1}));

  s = mu_reduce(make_vec({1, 0}), make_vec({1, 0}), 1e-12);
  EXPECT_DOUBLE_EQ(s.mu, 1);
  EXPECT_EQ(s.z, make_vec({0, 0}));

  s = mu_reduce(make_vec({4, 2, 5}), make_vec({0, 1, 1}), 1e-12);
  EXPECT_DOUBLE_EQ(s.mu, 2);
  EXPECT_EQ(s.z, make_vec({4, 0, 3}));
}

TEST(MuReduce, TieZeroesSmallestIndexExactly) {
  const auto s = mu_reduce(make_vec({0.3, 0.6, 1}), make_vec({0.1, 0.2, 0.1}), 1e-12);
  EXPECT_EQ(s.z(0), 0.0);
  EXPECT_GE(s.z.minCoeff(), 0);
}

TEST(MuReduce, Preconditions) {
  EXPECT_THROW(mu_reduce(make_vec({1, 1}), make_vec({0, 0}), 1e-12), Error);
  EXPECT_THROW(mu_reduce(make_vec({1, 1}), make_vec({-1, 1}), 1e-12), Error);
  try {
    mu_reduce(make_vec({1, 0}), make_vec({1, 1}), 1e-12);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SupportMismatch);
  }
}

TEST(ReduceIndependent, RedundantTriple) {
  const Vec x = make_vec({1, 1, 1});
  const auto w = reduce_to_independent_support(kTriple, x, 1e-9);
  EXPECT_EQ(w.minimal, Minimality::IndependentColumns);
  EXPECT_GE(w.z.minCoeff(), 0);
  EXPECT_LE(w.support.size(), 2u);
  EXPECT_LT((kTriple * w.z - kTriple * x).norm(), 1e-12);
  EXPECT_EQ(rank(columns(kTriple, w.support), 1e-9), w.support.size());
}

TEST(ReduceIndependent, IdentityIsFixpoint) {
  const auto w = reduce_to_independent_support(Mat::Identity(2, 2), make_vec({3, 4}), 1e-9);
  EXPECT_EQ(w.z, make_vec({3, 4}));
  EXPECT_EQ(w.support, (Support{0, 1}));
}

TEST(ReduceIndependent, ProportionalColumnsCollapse) {
  const Mat A = from_columns({{1, 0}, {2, 0}});
  const auto w = reduce_to_independent_support(A, make_vec({1, 1}), 1e-9);
  EXPECT_EQ(w.support.size(), 1u);
  EXPECT_NEAR((A * w.z - make_vec({3, 0})).norm(), 0, 1e-12);
}

TEST(MinimalSupport, Examples) {
  auto w = minimal_support_exact(kTriple, make_vec({1, 1, 0}), kDefaultMaxColumns, 1e-9);
  EXPECT_EQ(w.support, (Support{2}));
  EXPECT_NEAR((w.z - make_vec({0, 0, 1})).norm(), 0, 1e-14);
  EXPECT_EQ(w.minimal, Minimality::Global);

  w = minimal_support_exact(Mat::Identity(2, 2), make_vec({3, 4}), kDefaultMaxColumns, 1e-9);
  EXPECT_EQ(w.support.size(), 2u);
  EXPECT_NEAR((w.z - make_vec({3, 4})).norm(), 0, 1e-14);

  w = minimal_support_exact(kTriple, Vec::Zero(3), kDefaultMaxColumns, 1e-9);
  EXPECT_TRUE(w.support.empty());
  EXPECT_EQ(w.z, Vec::Zero(3));
}

TEST(MinimalSupport, TooLarge) {
  try {
    minimal_support_exact(Mat::Identity(2, 20).eval(), Vec::Ones(20), kDefaultMaxColumns, 1e-9);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooLarge);
  }
}

TEST(Optimalize, ZeroGivesFirstUnitVector) {
  const auto d = optimalize(kTriple, Vec::Zero(3), OptimalizeMode::Exact, 1e-9);
  EXPECT_EQ(d.lambda, 0);
  EXPECT_EQ(d.u, make_vec({1, 0, 0}));
}

TEST(Optimalize, Identity) {
  for (auto mode : {OptimalizeMode::Exact, OptimalizeMode::Heuristic}) {
    const auto d = optimalize(Mat::Identity(2, 2), make_vec({3, 4}), mode, 1e-9);
    EXPECT_NEAR(d.lambda, 5, 1e-14);
    EXPECT_NEAR(d.u(0), 0.6, 1e-15);
    EXPECT_NEAR(d.u(1), 0.8, 1e-15);
  }
}

TEST(Optimalize, ExactPicksSingleGenerator) {
  const auto d = optimalize(kTriple, make_vec({1, 1, 0}), OptimalizeMode::Exact, 1e-9);
  EXPECT_NEAR(d.lambda, 1, 1e-14);
  EXPECT_NEAR((d.u - make_vec({0, 0, 1})).norm(), 0, 1e-14);
  EXPECT_NEAR((d.point(kTriple) - make_vec({1, 1})).norm(), 0, 1e-14);
}

TEST(CLowerBound, Examples) {
  EXPECT_NEAR(c_lower_bound(Mat::Identity(2, 2), kDefaultMaxColumns, 1e-9), 1, 1e-14);
  EXPECT_NEAR(c_lower_bound(from_columns({{3, 0}, {0, 4}}), kDefaultMaxColumns, 1e-9), 3, 1e-14);
}

TEST(CLowerBound, NearlyParallelPair) {
  const double eps = 1e-3;
  const Mat A = from_columns({{1, 0}, {1, eps}});
  // sigma_min of [[1,1],[0,eps]] from the eigenvalues of A^T A.
  const double tr = 2 + eps * eps, det = eps * eps;
  const double smin = std::sqrt(tr / 2 - std::sqrt(tr * tr / 4 - det));
  const double c = c_lower_bound(A, kDefaultMaxColumns, 1e-9);
  EXPECT_GT(c, 0);
  EXPECT_NEAR(c, std::min(1.0, smin), 1e-9);
}

TEST(CLowerBound, ZeroMatrixThrows) {
  try {
    c_lower_bound(Mat::Zero(2, 2), kDefaultMaxColumns, 1e-9);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroMatrix);
  }
}

TEST(CSampleEstimate, Examples) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const double c = c_sample_estimate(Mat::Identity(2, 2), 32, seed);
    EXPECT_GE(c, 1 - 1e-12);
    EXPECT_LE(c, std::sqrt(2.0) + 1e-12);
  }
  EXPECT_NEAR(c_sample_estimate(from_columns({{1, 0}}), 16, 9), 1, 1e-15);
  EXPECT_EQ(c_sample_estimate(kTriple, 1, 42), c_sample_estimate(kTriple, 1, 42));
}

TEST(CSampleEstimate, BoundsSandwich) {
  const Mat A = from_columns({{1, 0.5, 0}, {0, 1, 0.25}, {1, 1, 1}, {-0.5, 0, 1}});
  EXPECT_GE(c_sample_estimate(A, 200, 5), c_lower_bound(A, kDefaultMaxColumns, 1e-9) - 1e-9);
}

TEST(Closedness, SingleCasePasses) {
  const auto c = closedness_case(3);
  EXPECT_TRUE(c.passed);
  EXPECT_TRUE(c.limit_member);
  EXPECT_GT(c.c_bound, 0);
}

TEST(Closedness, SuitePassesAndIsDeterministic) {
  const auto r = closedness_suite(100, 1);
  EXPECT_EQ(r.count, 100);
  EXPECT_EQ(r.passed, 100);
  EXPECT_GT(r.min_c_bound, 0);
  const auto again = closedness_suite(100, 1);
  EXPECT_EQ(again.max_lambda_gap, r.max_lambda_gap);
  EXPECT_EQ(again.zero_limits, r.zero_limits);
}
