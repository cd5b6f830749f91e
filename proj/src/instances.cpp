#include "farkas/instances.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <vector>

#include "farkas/error.hpp"
#include "farkas/random.hpp"

namespace farkas {

std::string_view to_string(ForcedBranch b) noexcept {
  switch (b) {
    case ForcedBranch::Membership: return "membership";
    case ForcedBranch::Separation: return "separation";
    case ForcedBranch::Random: return "random";
  }
  return "random";
}

ForcedBranch parse_forced_branch(std::string_view s) {
  if (s == "membership") return ForcedBranch::Membership;
  if (s == "separation") return ForcedBranch::Separation;
  if (s == "random") return ForcedBranch::Random;
  throw Error(ErrorCode::InvalidArgument, "unknown branch '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Generation

namespace {

constexpr double kLattice = 0x1.0p20;
constexpr std::size_t kOracleRecheckDim = 4;
constexpr int kColumnRedraws = 64;

double lattice_uniform(Rng& rng, double lo, double hi) {
  const double v = std::round(rng.uniform(lo, hi) * kLattice) / kLattice;
  return std::clamp(v, lo, hi);
}

Mat random_matrix(Rng& rng, Index m, Index n, double lo, double hi) {
  Mat A(m, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m; ++i) A(i, j) = lattice_uniform(rng, lo, hi);
  return A;
}

bool oracle_agrees(const ConeInstance& inst, Branch expected) {
  if (static_cast<std::size_t>(inst.rows()) > kOracleRecheckDim ||
      static_cast<std::size_t>(inst.cols()) > kOracleRecheckDim)
    return true;
  return oracle::exact_farkas_decide(oracle::to_exact(inst)).branch == expected;
}

}  // namespace

GeneratedInstance generate(const GenSpec& spec) {
  if (spec.m < 1 || spec.n < 1) throw Error(ErrorCode::InvalidArgument, "generate: m, n >= 1");
  if (!(spec.lo <= spec.hi) || !std::isfinite(spec.lo) || !std::isfinite(spec.hi))
    throw Error(ErrorCode::InvalidArgument, "generate: bad entry range");
  if (spec.branch != ForcedBranch::Random && !(spec.hi > 0 || spec.lo < 0))
    throw Error(ErrorCode::InvalidArgument, "generate: entry range is {0}");

  Rng rng(spec.seed);
  for (int attempt = 1; attempt <= spec.max_attempts; ++attempt) {
    Mat A = random_matrix(rng, spec.m, spec.n, spec.lo, spec.hi);
    switch (spec.branch) {
      case ForcedBranch::Random: {
        Vec b(spec.m);
        for (Index i = 0; i < spec.m; ++i) b(i) = lattice_uniform(rng, spec.lo, spec.hi);
        return {ConeInstance(std::move(A), std::move(b)), Vec(), attempt};
      }
      case ForcedBranch::Membership: {
        Vec x(spec.n);
        for (Index j = 0; j < spec.n; ++j) x(j) = lattice_uniform(rng, 0.0, 1.0);
        ConeInstance inst(A, A * x);
        if (!verify_membership(inst, make_membership(inst, x), kBaseTol)) continue;
        if (!oracle_agrees(inst, Branch::Membership)) continue;
        return {std::move(inst), std::move(x), attempt};
      }
      case ForcedBranch::Separation: {
        // Moreau split of a random r: with v0 the projection of r onto K,
        // y0 = v0 - r satisfies A^T y0 >= 0 and <v0, y0> = 0, so
        // b = v0 - s y0 has <b, y0> = -s |y0|^2 < 0.
        // K must miss some direction, so every column is first confined to
        // the half-space <a, h> >= 0 of a random h (redrawing offenders).
        Vec h(spec.m);
        for (Index i = 0; i < spec.m; ++i) h(i) = lattice_uniform(rng, spec.lo, spec.hi);
        if (h.isZero()) continue;
        bool confined = true;
        for (Index j = 0; j < spec.n && confined; ++j) {
          int tries = 0;
          while (A.col(j).dot(h) < 0 && (confined = ++tries <= kColumnRedraws))
            for (Index i = 0; i < spec.m; ++i) A(i, j) = lattice_uniform(rng, spec.lo, spec.hi);
        }
        if (!confined) continue;
        Vec r(spec.m);
        for (Index i = 0; i < spec.m; ++i) r(i) = lattice_uniform(rng, spec.lo, spec.hi);
        const double s = rng.uniform(0.5, 2.0);
        if (A.cwiseAbs().maxCoeff() == 0.0) continue;
        const ProjectionResult p = project_onto_cone(ConeInstance(A, r));
        Vec y0 = p.point - r;
        if (y0.norm() <= 1e-3 * (1.0 + r.norm())) continue;  // r (nearly) in K
        ConeInstance inst(A, p.point - s * y0);
        if (!verify_separation(inst, make_separation(inst, y0), kBaseTol)) continue;
        if (!oracle_agrees(inst, Branch::Separation)) continue;
        return {std::move(inst), std::move(y0), attempt};
      }
    }
  }
  throw Error(ErrorCode::GenerationFailed,
              "could not certify a " + std::string(to_string(spec.branch)) + " instance after " +
                  std::to_string(spec.max_attempts) + " attempts");
}

// ---------------------------------------------------------------------------
// Text format

namespace {

struct Token {
  std::string_view text;
  std::size_t line;
  std::size_t column;
};

struct Line {
  std::vector<Token> tokens;
  std::size_t number;
};

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view raw = text.substr(pos, eol - pos);
    ++number;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    Line line{{}, number};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t' || raw[i] == '\r')) ++i;
      if (i >= raw.size()) break;
      const std::size_t start = i;
      while (i < raw.size() && raw[i] != ' ' && raw[i] != '\t' && raw[i] != '\r') ++i;
      line.tokens.push_back({raw.substr(start, i - start), number, start + 1});
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    if (eol == text.size()) break;
    pos = eol + 1;
  }
  return lines;
}

Index parse_count(const Token& t) {
  long v = 0;
  const auto* end = t.text.data() + t.text.size();
  const auto res = std::from_chars(t.text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end || v < 1)
    throw ParseError(t.line, t.column, "expected a positive integer, got '" + std::string(t.text) + "'");
  return static_cast<Index>(v);
}

struct Entry {
  double value;
  oracle::Rational exact;
  bool rational_form;
};

Entry parse_entry(const Token& t) {
  std::string_view s = t.text;
  const bool rational = s.find('/') != std::string_view::npos;
  Entry e{};
  e.rational_form = rational;
  try {
    e.exact = oracle::parse_rational(s);
  } catch (const Error&) {
    throw ParseError(t.line, t.column, "malformed number '" + std::string(s) + "'");
  }
  if (rational) {
    const auto& num = e.exact.get_num();
    const auto& den = e.exact.get_den();
    // Correctly rounded when both parts are exact doubles.
    if (mpz_sizeinbase(num.get_mpz_t(), 2) <= 53 && mpz_sizeinbase(den.get_mpz_t(), 2) <= 53)
      e.value = num.get_d() / den.get_d();
    else
      e.value = e.exact.get_d();
  } else {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto* end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, e.value);
    if (res.ec != std::errc() || res.ptr != end)
      throw ParseError(t.line, t.column, "malformed number '" + std::string(t.text) + "'");
  }
  return e;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

InstanceFile read_instance(std::string_view text) {
  const auto lines = tokenize(text);
  if (lines.empty()) throw ParseError(1, 1, "empty input");
  const Line& header = lines[0];
  if (header.tokens.size() != 2 || header.tokens[0].text != "farkas")
    throw ParseError(header.number, 1, "expected header 'farkas 1'");
  if (header.tokens[1].text != "1")
    throw ParseError(header.number, header.tokens[1].column,
                     "unsupported format version '" + std::string(header.tokens[1].text) + "'");
  if (lines.size() < 2) throw ParseError(header.number + 1, 1, "missing dimension line 'm n'");
  const Line& dims = lines[1];
  if (dims.tokens.size() != 2) throw ParseError(dims.number, 1, "expected 'm n'");
  const Index m = parse_count(dims.tokens[0]);
  const Index n = parse_count(dims.tokens[1]);

  const std::size_t need = 2 + static_cast<std::size_t>(m) + 1;
  if (lines.size() < need) {
    const std::size_t next = lines.back().number + 1;
    throw ParseError(next, 1,
                     lines.size() < need - 1 ? "missing rows of A" : "missing b row");
  }
  if (lines.size() > need)
    throw ParseError(lines[need].number, 1, "unexpected content after the b row");

  Mat A(m, n);
  Vec b(m);
  oracle::RMat Aq(static_cast<std::size_t>(m), static_cast<std::size_t>(n));
  oracle::RVec bq(static_cast<std::size_t>(m));
  bool any_rational = false;

  auto check_width = [](const Line& line, Index want, const char* what) {
    if (static_cast<Index>(line.tokens.size()) != want)
      throw Error(ErrorCode::DimensionMismatch,
                  "line " + std::to_string(line.number) + ": " + what + " has " +
                      std::to_string(line.tokens.size()) + " entries, expected " +
                      std::to_string(want));
  };

  for (Index i = 0; i < m; ++i) {
    const Line& row = lines[2 + static_cast<std::size_t>(i)];
    check_width(row, n, "row of A");
    for (Index j = 0; j < n; ++j) {
      Entry e = parse_entry(row.tokens[static_cast<std::size_t>(j)]);
      A(i, j) = e.value;
      Aq(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = std::move(e.exact);
      any_rational = any_rational || e.rational_form;
    }
  }
  const Line& brow = lines[need - 1];
  check_width(brow, m, "b row");
  for (Index i = 0; i < m; ++i) {
    Entry e = parse_entry(brow.tokens[static_cast<std::size_t>(i)]);
    b(i) = e.value;
    bq[static_cast<std::size_t>(i)] = std::move(e.exact);
    any_rational = any_rational || e.rational_form;
  }

  InstanceFile out{ConeInstance(std::move(A), std::move(b)), std::nullopt};
  if (any_rational) out.exact.emplace(std::move(Aq), std::move(bq));
  return out;
}

std::string write_instance(const ConeInstance& inst) {
  std::string s = "farkas 1\n";
  s += std::to_string(inst.rows()) + " " + std::to_string(inst.cols()) + "\n";
  for (Index i = 0; i < inst.rows(); ++i) {
    for (Index j = 0; j < inst.cols(); ++j) {
      if (j) s += ' ';
      s += format_double(inst.A()(i, j));
    }
    s += '\n';
  }
  for (Index i = 0; i < inst.rows(); ++i) {
    if (i) s += ' ';
    s += format_double(inst.b()(i));
  }
  s += '\n';
  return s;
}

std::string write_instance(const InstanceFile& file) {
  if (!file.exact) return write_instance(file.instance);
  const auto& q = *file.exact;
  std::string s = "farkas 1\n";
  s += std::to_string(q.A.rows()) + " " + std::to_string(q.A.cols()) + "\n";
  for (std::size_t i = 0; i < q.A.rows(); ++i) {
    for (std::size_t j = 0; j < q.A.cols(); ++j) {
      if (j) s += ' ';
      s += oracle::format_rational(q.A(i, j));
    }
    s += '\n';
  }
  for (std::size_t i = 0; i < q.b.size(); ++i) {
    if (i) s += ' ';
    s += oracle::format_rational(q.b[i]);
  }
  s += '\n';
  return s;
}

// ---------------------------------------------------------------------------
// Exhaustive corpus

namespace {

struct SignedPerm {
  std::vector<int> perm;  // (g v)_i = sign_i * v_perm[i]
  std::vector<int> sign;
};

std::vector<SignedPerm> signed_perms(int m) {
  std::vector<SignedPerm> out;
  std::vector<int> perm(static_cast<std::size_t>(m));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    for (int s = 0; s < (1 << m); ++s) {
      SignedPerm g{perm, std::vector<int>(static_cast<std::size_t>(m))};
      for (int i = 0; i < m; ++i) g.sign[static_cast<std::size_t>(i)] = (s >> i & 1) ? -1 : 1;
      out.push_back(std::move(g));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

// Columns are coded in base (2r + 1) with digit d meaning entry d - r.
std::vector<int> decode(int code, int m, int r) {
  std::vector<int> v(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    v[static_cast<std::size_t>(i)] = code % (2 * r + 1) - r;
    code /= 2 * r + 1;
  }
  return v;
}

int encode(const std::vector<int>& v, int r) {
  int code = 0;
  for (int i = static_cast<int>(v.size()) - 1; i >= 0; --i)
    code = code * (2 * r + 1) + v[static_cast<std::size_t>(i)] + r;
  return code;
}

std::vector<int> act(const SignedPerm& g, const std::vector<int>& v) {
  std::vector<int> w(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    w[i] = g.sign[i] * v[static_cast<std::size_t>(g.perm[i])];
  return w;
}

// Next nondecreasing tuple over {0..k-1}; false after the last.
bool next_multiset(std::vector<int>& t, int k) {
  for (int i = static_cast<int>(t.size()) - 1; i >= 0; --i) {
    if (t[static_cast<std::size_t>(i)] < k - 1) {
      const int v = ++t[static_cast<std::size_t>(i)];
      for (std::size_t j = static_cast<std::size_t>(i) + 1; j < t.size(); ++j) t[j] = v;
      return true;
    }
  }
  return false;
}

}  // namespace

void for_each_small_instance(int max_dim, int r, std::size_t batch,
                             const std::function<void(std::span<const ConeInstance>)>& visit) {
  if (max_dim < 1 || r < 1 || batch < 1)
    throw Error(ErrorCode::InvalidArgument, "corpus: max_dim, r, batch must be positive");
  std::vector<ConeInstance> pending;
  pending.reserve(batch);
  auto flush = [&] {
    if (!pending.empty()) visit(pending);
    pending.clear();
  };

  for (int m = 1; m <= max_dim; ++m) {
    const int ncols = [&] {
      int c = 1;
      for (int i = 0; i < m; ++i) c *= 2 * r + 1;
      return c;
    }();
    const int zero_col = encode(std::vector<int>(static_cast<std::size_t>(m), 0), r);
    const auto group = signed_perms(m);
    // image[g][c] = code of g applied to column c
    std::vector<std::vector<int>> image(group.size(), std::vector<int>(static_cast<std::size_t>(ncols)));
    for (std::size_t g = 0; g < group.size(); ++g)
      for (int c = 0; c < ncols; ++c)
        image[g][static_cast<std::size_t>(c)] = encode(act(group[g], decode(c, m, r)), r);

    // b in canonical form 0 <= b_1 <= ... <= b_m <= r.
    std::vector<int> b(static_cast<std::size_t>(m), 0);
    for (;;) {
      std::vector<std::size_t> stabilizer;
      for (std::size_t g = 0; g < group.size(); ++g)
        if (act(group[g], b) == b) stabilizer.push_back(g);

      for (int n = 1; n <= max_dim; ++n) {
        std::vector<int> cols(static_cast<std::size_t>(n), 0);
        std::vector<int> moved(static_cast<std::size_t>(n));
        do {
          if (std::all_of(cols.begin(), cols.end(), [&](int c) { return c == zero_col; })) continue;
          bool canonical = true;
          for (std::size_t g : stabilizer) {
            for (int j = 0; j < n; ++j)
              moved[static_cast<std::size_t>(j)] = image[g][static_cast<std::size_t>(cols[static_cast<std::size_t>(j)])];
            std::sort(moved.begin(), moved.end());
            if (moved < cols) {
              canonical = false;
              break;
            }
          }
          if (!canonical) continue;

          Mat A(m, n);
          for (int j = 0; j < n; ++j) {
            const auto col = decode(cols[static_cast<std::size_t>(j)], m, r);
            for (int i = 0; i < m; ++i) A(i, j) = col[static_cast<std::size_t>(i)];
          }
          Vec bv(m);
          for (int i = 0; i < m; ++i) bv(i) = b[static_cast<std::size_t>(i)];
          pending.emplace_back(std::move(A), std::move(bv));
          if (pending.size() == batch) flush();
        } while (next_multiset(cols, ncols));
      }
      if (!next_multiset(b, r + 1)) break;
    }
  }
  flush();
}

}  // namespace farkas
