#include <cmath>

#include <gtest/gtest.h>

#include "farkas/error.hpp"
#include "farkas/oracle.hpp"

using namespace farkas;
using namespace farkas::oracle;

namespace {

ExactInstance exact(std::size_t m, std::size_t n, std::initializer_list<const char*> a_rowmajor,
                    std::initializer_list<const char*> b) {
  RMat A(m, n);
  auto it = a_rowmajor.begin();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) A(i, j) = parse_rational(*it++);
  RVec bv;
  for (const char* s : b) bv.push_back(parse_rational(s));
  return ExactInstance(std::move(A), std::move(bv));
}

}  // namespace

TEST(Rational, Parse) {
  EXPECT_EQ(parse_rational("3"), Rational(3));
  EXPECT_EQ(parse_rational("-2/6"), Rational(-1, 3));
  EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
  EXPECT_EQ(parse_rational("-1.5e-2"), Rational(-3, 200));
  EXPECT_EQ(parse_rational("0.0625"), Rational(1, 16));
  EXPECT_EQ(parse_rational("089"), Rational(89));
  EXPECT_EQ(parse_rational("+.5"), Rational(1, 2));
  EXPECT_EQ(parse_rational("12E2"), Rational(1200));
  EXPECT_THROW(parse_rational(""), Error);
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("abc"), Error);
  EXPECT_THROW(parse_rational("1.2.3"), Error);
  EXPECT_THROW(parse_rational("0x10"), Error);
}

TEST(Rational, Format) {
  EXPECT_EQ(format_rational(parse_rational("4/2")), "2");
  EXPECT_EQ(format_rational(Rational(-1, 3)), "-1/3");
}

TEST(Rational, DoubleConversionIsExact) {
  const Vec v = make_vec({0.1, -3.75, 1e-300});
  const RVec r = to_exact(v);
  for (Index i = 0; i < v.size(); ++i) EXPECT_EQ(r[i].get_d(), v(i));
  EXPECT_NE(r[0], Rational(1, 10));
}

TEST(ExactDecide, IdentityMembership) {
  const auto inst = exact(2, 2, {"1", "0", "0", "1"}, {"1", "1"});
  const auto d = exact_farkas_decide(inst);
  ASSERT_EQ(d.branch, Branch::Membership);
  EXPECT_EQ(d.x, (RVec{1, 1}));
  EXPECT_TRUE(check_exact_membership(inst, d.x));
}

TEST(ExactDecide, SingleColumnSeparation) {
  const auto inst = exact(2, 1, {"1", "0"}, {"0", "1"});
  const auto d = exact_farkas_decide(inst);
  ASSERT_EQ(d.branch, Branch::Separation);
  EXPECT_EQ(d.y, (RVec{0, -1}));
  EXPECT_TRUE(check_exact_separation(inst, d.y));
  EXPECT_FALSE(check_exact_separation(inst, RVec{0, 1}));
}

TEST(ExactDecide, SkewRaySeparation) {
  const auto inst = exact(2, 1, {"1", "1"}, {"1", "-1"});
  const auto d = exact_farkas_decide(inst);
  ASSERT_EQ(d.branch, Branch::Separation);
  EXPECT_TRUE(check_exact_separation(inst, d.y));
}

TEST(ExactDecide, RationalProjection) {
  // Nearest point of cone{(1,0),(1,1)} to (0,1) is (1/2,1/2): y = (1/2,-1/2).
  const auto inst = exact(2, 2, {"1", "1", "0", "1"}, {"0", "1"});
  const auto d = exact_farkas_decide(inst);
  ASSERT_EQ(d.branch, Branch::Separation);
  EXPECT_EQ(d.y, (RVec{Rational(1, 2), Rational(-1, 2)}));
}

TEST(ExactDecide, TooLarge) {
  RMat A(7, 1);
  A(0, 0) = 1;
  try {
    exact_farkas_decide(ExactInstance(A, RVec(7)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooLarge);
  }
}

TEST(ExactInstance, DimensionCheck) { EXPECT_THROW(ExactInstance(RMat(2, 2), RVec(3)), Error); }

TEST(ExactMinSupport, Examples) {
  const auto t = exact(2, 3, {"1", "0", "1", "0", "1", "1"}, {"0", "0"});
  EXPECT_EQ(exact_min_support(t.A, RVec{1, 1, 0}), 1u);
  EXPECT_EQ(exact_min_support(t.A, RVec{0, 0, 0}), 0u);
  const auto id = exact(2, 2, {"1", "0", "0", "1"}, {"0", "0"});
  EXPECT_EQ(exact_min_support(id.A, RVec{3, 4}), 2u);
}

TEST(GridCheck, ExactResultPasses) {
  const ConeInstance I(Mat::Identity(2, 2), make_vec({1, 1}));
  const ProjectionResult r{make_vec({1, 1}), make_vec({1, 1}), 0, 0};
  EXPECT_TRUE(grid_projection_check(I, r, 64));
}

TEST(GridCheck, SingleColumn) {
  const ConeInstance I(from_columns({{1, 0}}), make_vec({0, 1}));
  const ProjectionResult r{make_vec({0}), make_vec({0, 0}), 1, 0};
  EXPECT_TRUE(grid_projection_check(I, r, 200));
}

TEST(GridCheck, TamperedDistanceFails) {
  const ConeInstance I(from_columns({{1, 0}}), make_vec({0, 1}));
  ProjectionResult r{make_vec({0}), make_vec({0, 0}), 0.5, 0};
  EXPECT_FALSE(grid_projection_check(I, r, 200));
  // Self-consistent but not optimal.
  r = {make_vec({1}), make_vec({1, 0}), std::sqrt(2.0), 0};
  EXPECT_FALSE(grid_projection_check(I, r, 200));
}

TEST(GridCheck, FaceProjection) {
  const ConeInstance I(from_columns({{1, 0}, {1, 1}}), make_vec({0, 1}));
  const ProjectionResult r{make_vec({0, 0.5}), make_vec({0.5, 0.5}), std::sqrt(0.5), 0};
  EXPECT_TRUE(grid_projection_check(I, r, 128));
  EXPECT_NEAR(grid_min_distance(I, 2, 400, Execution::Serial), std::sqrt(0.5), 1e-12);
}

TEST(GridCheck, SerialAndParallelAgree) {
  const ConeInstance I(from_columns({{1, 0.5, 0}, {0.2, 1, -0.3}, {-1, 0.1, 1}}), make_vec({-0.4, 0.7, 0.9}));
  EXPECT_EQ(grid_min_distance(I, 3, 60, Execution::Serial), grid_min_distance(I, 3, 60, Execution::Parallel));
}

TEST(GridCheck, TooManyColumns) {
  const ConeInstance I(Mat::Identity(2, 5), make_vec({1, 1}));
  const ProjectionResult r{Vec::Zero(5), Vec::Zero(2), std::sqrt(2.0), 0};
  EXPECT_THROW(grid_projection_check(I, r, 8), Error);
}
