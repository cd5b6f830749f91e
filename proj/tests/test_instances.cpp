#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "farkas/error.hpp"
#include "farkas/instances.hpp"
#include "farkas/lncone.hpp"

using namespace farkas;

namespace {

using Key = std::vector<int>;

// Orbit representative under column permutations and signed coordinate
// permutations, by brute force over the whole group.
Key canonical(const ConeInstance& inst) {
  const int m = static_cast<int>(inst.rows()), n = static_cast<int>(inst.cols());
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  Key best;
  do {
    for (int signs = 0; signs < (1 << m); ++signs) {
      auto coord = [&](const Vec& v, int i) {
        const double s = (signs >> i) & 1 ? -1 : 1;
        return static_cast<int>(s * v(perm[i]));
      };
      std::vector<Key> cols;
      for (int j = 0; j < n; ++j) {
        Key c;
        for (int i = 0; i < m; ++i) c.push_back(coord(inst.A().col(j), i));
        cols.push_back(c);
      }
      std::sort(cols.begin(), cols.end());
      Key k{m, n};
      for (int i = 0; i < m; ++i) k.push_back(coord(inst.b(), i));
      for (const auto& c : cols) k.insert(k.end(), c.begin(), c.end());
      if (best.empty() || k < best) best = k;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::set<Key> brute_force_orbits(int max_dim, int r) {
  std::set<Key> out;
  const int base = 2 * r + 1;
  for (int m = 1; m <= max_dim; ++m)
    for (int n = 1; n <= max_dim; ++n) {
      const int cells = m * n + m;
      long total = 1;
      for (int c = 0; c < cells; ++c) total *= base;
      for (long code = 0; code < total; ++code) {
        long t = code;
        Mat A(m, n);
        Vec b(m);
        for (int j = 0; j < n; ++j)
          for (int i = 0; i < m; ++i) A(i, j) = static_cast<double>(t % base - r), t /= base;
        for (int i = 0; i < m; ++i) b(i) = static_cast<double>(t % base - r), t /= base;
        if (A.isZero()) continue;
        out.insert(canonical(ConeInstance(A, b)));
      }
    }
  return out;
}

}  // namespace

TEST(Generate, ForcedMembership) {
  const auto g = generate({.m = 2, .n = 2, .branch = ForcedBranch::Membership, .seed = 7});
  ASSERT_EQ(g.witness.size(), 2);
  EXPECT_EQ(g.attempts, 1);
  EXPECT_TRUE(verify_membership(g.instance, make_membership(g.instance, g.witness), 1e-9));
  EXPECT_EQ(farkas_decide(g.instance).branch(), Branch::Membership);
  // b = Ax holds without rounding on the dyadic lattice.
  EXPECT_EQ(g.instance.A() * g.witness, g.instance.b());
}

TEST(Generate, ForcedSeparation) {
  const auto g = generate({.m = 2, .n = 1, .branch = ForcedBranch::Separation, .seed = 7});
  EXPECT_TRUE(verify_separation(g.instance, make_separation(g.instance, g.witness), 1e-9));
  const auto r = farkas_decide(g.instance);
  ASSERT_EQ(r.branch(), Branch::Separation);
  EXPECT_TRUE(verify_separation(g.instance, r.separation(), 1e-9));
}

TEST(Generate, DeterministicBytes) {
  const GenSpec spec{.m = 3, .n = 4, .branch = ForcedBranch::Random, .seed = 11};
  EXPECT_EQ(write_instance(generate(spec).instance), write_instance(generate(spec).instance));
  GenSpec other = spec;
  other.seed = 12;
  EXPECT_NE(write_instance(generate(spec).instance), write_instance(generate(other).instance));
}

TEST(Generate, EntriesInRange) {
  const auto g = generate({.m = 4, .n = 5, .lo = -3, .hi = 2, .seed = 3});
  EXPECT_GE(g.instance.A().minCoeff(), -3);
  EXPECT_LE(g.instance.A().maxCoeff(), 2);
}

TEST(Generate, ForcedMembershipNeverRetries) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto g = generate({.m = 1 + Index(s % 6), .n = 1 + Index(s % 5), .branch = ForcedBranch::Membership, .seed = s});
    EXPECT_EQ(g.attempts, 1) << "seed " << s;
  }
}

TEST(Generate, BadSpec) {
  EXPECT_THROW(generate({.m = 0}), Error);
  EXPECT_THROW(generate({.lo = 1, .hi = -1}), Error);
  EXPECT_THROW(parse_forced_branch("sometimes"), Error);
  EXPECT_EQ(parse_forced_branch("separation"), ForcedBranch::Separation);
}

TEST(Format, ReadIdentity) {
  const auto f = read_instance("farkas 1\n2 2\n1 0\n0 1\n1 1\n");
  EXPECT_EQ(f.instance.A(), Mat::Identity(2, 2));
  EXPECT_EQ(f.instance.b(), make_vec({1, 1}));
  EXPECT_FALSE(f.exact.has_value());
}

TEST(Format, CommentsAndBlankLines) {
  const auto f = read_instance("# header\nfarkas 1\n\n1 2 # dims\n  -0.5 2e-1\n# b:\n3\n");
  EXPECT_EQ(f.instance.A(), from_columns({{-0.5}, {0.2}}));
  EXPECT_EQ(f.instance.b(), make_vec({3}));
}

TEST(Format, MissingBRow) {
  try {
    read_instance("farkas 1\n2 2\n1 0\n0 1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
  }
}

TEST(Format, ErrorPositions) {
  try {
    read_instance("farkas 1\n1 2\n1 x\n0\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 3u);
  }
  EXPECT_THROW(read_instance("farkas 2\n1 1\n1\n1\n"), ParseError);
  EXPECT_THROW(read_instance(""), ParseError);
  EXPECT_THROW(read_instance("farkas 1\n1 1\n1\n1\n7\n"), ParseError);
  try {
    read_instance("farkas 1\n2 2\n1 0 5\n0 1\n1 1\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(Format, RationalPreserved) {
  const auto f = read_instance("farkas 1\n1 1\n1/3\n2\n");
  ASSERT_TRUE(f.exact.has_value());
  EXPECT_EQ(f.exact->A(0, 0), oracle::Rational(1, 3));
  EXPECT_DOUBLE_EQ(f.instance.A()(0, 0), 1.0 / 3);
  const std::string text = write_instance(f);
  EXPECT_NE(text.find("1/3"), std::string::npos);
  EXPECT_EQ(read_instance(text).exact, f.exact);
}

TEST(Format, DecimalRoundTripIsBitExact) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto inst = generate({.m = 3, .n = 3, .lo = -1e3, .hi = 1e3, .seed = s}).instance;
    const Mat A = inst.A() * (1.0 / 3.0);  // leave the lattice
    const ConeInstance odd(A, inst.b() * std::acos(-1.0));
    EXPECT_EQ(read_instance(write_instance(odd)).instance, odd);
  }
}

TEST(Corpus, MatchesBruteForceOrbits) {
  std::set<Key> seen;
  std::size_t emitted = 0;
  for_each_small_instance(2, 1, 37, [&](std::span<const ConeInstance> batch) {
    EXPECT_LE(batch.size(), 37u);
    for (const auto& inst : batch) {
      ++emitted;
      EXPECT_FALSE(inst.A().isZero());
      EXPECT_LE(inst.A().cwiseAbs().maxCoeff(), 1);
      seen.insert(canonical(inst));
    }
  });
  EXPECT_EQ(seen.size(), emitted) << "two emitted instances share an orbit";
  EXPECT_EQ(seen, brute_force_orbits(2, 1));
}

TEST(Corpus, LargerRangeOrbits) {
  std::set<Key> seen;
  std::size_t emitted = 0;
  for_each_small_instance(2, 2, 1000, [&](std::span<const ConeInstance> batch) {
    for (const auto& inst : batch) ++emitted, seen.insert(canonical(inst));
  });
  EXPECT_EQ(seen.size(), emitted);
  EXPECT_EQ(seen.size(), brute_force_orbits(2, 2).size());
}

TEST(LnCone, Origin) {
  const auto r = lncone::membership({0, 0});
  EXPECT_TRUE(r.member);
  EXPECT_FALSE(r.witness.has_value());
}

TEST(LnCone, NearBoundaryHasWitness) {
  const lncone::Point p{1, -0.01};
  const auto r = lncone::membership(p);
  ASSERT_TRUE(r.member);
  ASSERT_TRUE(r.witness.has_value());
  const auto& w = *r.witness;
  EXPECT_LT(std::abs(w.x), 1);
  EXPECT_LE(w.y, std::log(1 - w.x * w.x) + 1e-9);
  EXPECT_NEAR(w.lambda * w.x, 1, 1e-9);
  EXPECT_NEAR(w.lambda * w.y, -0.01, 1e-9);
  EXPECT_TRUE(lncone::check_witness(p, w, 1e-9).valid);
}

TEST(LnCone, AxisPointsAreNotMembers) {
  EXPECT_FALSE(lncone::membership({1, 0}).member);
  EXPECT_FALSE(lncone::membership({-2, 0}).member);
  EXPECT_FALSE(lncone::membership({0, 1}).member);
  EXPECT_TRUE(lncone::membership({0, -1}).member);
  EXPECT_TRUE(lncone::membership({-5, -1e-6}).member);
}

TEST(LnCone, Demo) {
  for (int k_max : {1, 3, 5}) {
    const auto d = lncone::nonclosedness_demo(k_max);
    ASSERT_EQ(d.sequence.size(), static_cast<std::size_t>(k_max));
    for (const auto& row : d.sequence) {
      EXPECT_TRUE(row.result.member);
      EXPECT_TRUE(row.witness_ok);
    }
    EXPECT_FALSE(d.limit.result.member);
    EXPECT_TRUE(d.not_closed);
  }
}

TEST(LnCone, WitnessCheckRejectsTampering) {
  const lncone::Point p{1, -0.5};
  auto w = *lncone::membership(p).witness;
  w.lambda *= 1.001;
  EXPECT_FALSE(lncone::check_witness(p, w, 1e-9).valid);
}

TEST(LnCone, ImageIsOpenInterval) {
  const auto pts = lncone::sample_base_set(5000, 17);
  double sup = 0;
  for (const auto& p : pts) {
    EXPECT_LT(std::abs(p[0]), 1);
    EXPECT_TRUE(lncone::in_base_set(p[0], p[1]));
    sup = std::max(sup, std::abs(p[0]));
  }
  EXPECT_GT(sup, 1 - 1e-3);
}
