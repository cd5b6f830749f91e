#include "farkas/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>

#include "farkas/error.hpp"

namespace farkas::oracle {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

[[noreturn]] void bad_number(std::string_view text) {
  throw Error(ErrorCode::InvalidArgument, "not a number: '" + std::string(text) + "'");
}

Rational pow10(long e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? Rational(mpz_class(1), p) : Rational(p);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (text.empty()) bad_number(text);
  std::string_view s = text;
  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  Rational r;
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const auto num = s.substr(0, slash);
    const auto den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) bad_number(text);
    const mpz_class q{std::string(den), 10};
    if (q == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator in '" + std::string(text) + "'");
    r = Rational(mpz_class(std::string(num), 10), q);
    r.canonicalize();
  } else {
    long exponent = 0;
    if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
      std::string_view es = s.substr(e + 1);
      bool eneg = false;
      if (!es.empty() && (es.front() == '+' || es.front() == '-')) {
        eneg = es.front() == '-';
        es.remove_prefix(1);
      }
      if (!all_digits(es) || es.size() > 6) bad_number(text);
      exponent = std::stol(std::string(es));
      if (eneg) exponent = -exponent;
      s = s.substr(0, e);
    }
    std::string digits;
    const auto dot = s.find('.');
    if (dot == std::string_view::npos) {
      if (!all_digits(s)) bad_number(text);
      digits = s;
    } else {
      const auto ip = s.substr(0, dot);
      const auto fp = s.substr(dot + 1);
      if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) ||
          (!fp.empty() && !all_digits(fp)))
        bad_number(text);
      digits = std::string(ip) + std::string(fp);
      exponent -= static_cast<long>(fp.size());
    }
    r = Rational(mpz_class(digits, 10)) * pow10(exponent);
  }
  return negative ? Rational(-r) : r;
}

std::string format_rational(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

ExactInstance::ExactInstance(RMat A_, RVec b_) : A(std::move(A_)), b(std::move(b_)) {
  if (A.rows() < 1 || A.cols() < 1 || b.size() != A.rows())
    throw Error(ErrorCode::DimensionMismatch, "exact instance: dimensions disagree");
}

RVec to_exact(const Vec& v) {
  RVec out(static_cast<std::size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = Rational(v(i));
  return out;
}

ExactInstance to_exact(const ConeInstance& inst) {
  const auto m = static_cast<std::size_t>(inst.rows());
  const auto n = static_cast<std::size_t>(inst.cols());
  RMat A(m, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i)
      A(i, j) = Rational(inst.A()(static_cast<Index>(i), static_cast<Index>(j)));
  return ExactInstance(std::move(A), to_exact(inst.b()));
}

ConeInstance to_double(const ExactInstance& inst) {
  const auto m = inst.A.rows();
  const auto n = inst.A.cols();
  Mat A(static_cast<Index>(m), static_cast<Index>(n));
  Vec b(static_cast<Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      A(static_cast<Index>(i), static_cast<Index>(j)) = inst.A(i, j).get_d();
    b(static_cast<Index>(i)) = inst.b[i].get_d();
  }
  return ConeInstance(std::move(A), std::move(b));
}

namespace {

struct Solved {
  bool independent = false;
  bool consistent = false;
  RVec x;
};

// Gauss-Jordan on an augmented system [M | rhs] given row-wise, where the
// last entry of each row is the right-hand side. Stops early once the
// coefficient columns are found to be dependent.
Solved gauss_jordan(std::vector<RVec>& rows, std::size_t k) {
  Solved out;
  const std::size_t m = rows.size();
  if (k > m) return out;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t p = c;
    while (p < m && sgn(rows[p][c]) == 0) ++p;
    if (p == m) return out;
    std::swap(rows[p], rows[c]);
    const Rational inv = 1 / rows[c][c];
    for (std::size_t j = c; j <= k; ++j) rows[c][j] *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == c || sgn(rows[i][c]) == 0) continue;
      const Rational f = rows[i][c];
      for (std::size_t j = c; j <= k; ++j) rows[i][j] -= f * rows[c][j];
    }
  }
  out.independent = true;
  out.consistent = true;
  for (std::size_t i = k; i < m; ++i)
    if (sgn(rows[i][k]) != 0) out.consistent = false;
  if (out.consistent) {
    out.x.resize(k);
    for (std::size_t c = 0; c < k; ++c) out.x[c] = rows[c][k];
  }
  return out;
}

std::vector<std::size_t> mask_indices(std::uint64_t mask) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; mask; ++i, mask >>= 1)
    if (mask & 1u) idx.push_back(i);
  return idx;
}

// Solves A_S z = t.
Solved solve_on(const RMat& A, const std::vector<std::size_t>& S, const RVec& t) {
  std::vector<RVec> rows(A.rows(), RVec(S.size() + 1));
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t c = 0; c < S.size(); ++c) rows[i][c] = A(i, S[c]);
    rows[i][S.size()] = t[i];
  }
  return gauss_jordan(rows, S.size());
}

// Subset masks of {0..n-1} with at most kmax elements, by size then value.
std::vector<std::uint64_t> masks_by_size(std::size_t n, std::size_t kmax) {
  std::vector<std::uint64_t> masks;
  for (std::uint64_t mk = 0; mk < (std::uint64_t{1} << n); ++mk)
    if (static_cast<std::size_t>(std::popcount(mk)) <= kmax) masks.push_back(mk);
  std::stable_sort(masks.begin(), masks.end(), [](std::uint64_t a, std::uint64_t b) {
    return std::popcount(a) < std::popcount(b);
  });
  return masks;
}

bool all_nonnegative(const RVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& r) { return sgn(r) >= 0; });
}

RVec mat_vec(const RMat& A, const RVec& x) {
  RVec out(A.rows());
  for (std::size_t j = 0; j < A.cols(); ++j) {
    if (sgn(x[j]) == 0) continue;
    for (std::size_t i = 0; i < A.rows(); ++i) out[i] += A(i, j) * x[j];
  }
  return out;
}

}  // namespace

ExactDecision exact_farkas_decide(const ExactInstance& inst) {
  const RMat& A = inst.A;
  const RVec& b = inst.b;
  const std::size_t m = A.rows();
  const std::size_t n = A.cols();
  if (m > kMaxExactDecideDim || n > kMaxExactDecideDim)
    throw Error(ErrorCode::TooLarge, "exact oracle is limited to m, n <= 6");

  const auto masks = masks_by_size(n, std::min(m, n));

  for (const std::uint64_t mask : masks) {
    const auto S = mask_indices(mask);
    if (S.empty()) {
      if (std::all_of(b.begin(), b.end(), [](const Rational& r) { return sgn(r) == 0; }))
        return {Branch::Membership, RVec(n), {}};
      continue;
    }
    const Solved s = solve_on(A, S, b);
    if (!s.independent || !s.consistent || !all_nonnegative(s.x)) continue;
    RVec x(n);
    for (std::size_t c = 0; c < S.size(); ++c) x[S[c]] = s.x[c];
    return {Branch::Membership, std::move(x), {}};
  }

  // Gram data: G = A^T A, g = A^T b. For a subset S the optimality
  // conditions of min |A_S z - b| over z >= 0 extended to all columns read
  // z >= 0 and (G z - g)_j >= 0 for every j.
  RMat G(n, n);
  RVec g(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) g[j] += A(i, j) * b[i];
    for (std::size_t k = j; k < n; ++k) {
      Rational s;
      for (std::size_t i = 0; i < m; ++i) s += A(i, j) * A(i, k);
      G(j, k) = s;
      G(k, j) = s;
    }
  }

  for (const std::uint64_t mask : masks) {
    const auto S = mask_indices(mask);
    RVec z(n);
    if (!S.empty()) {
      std::vector<RVec> rows(S.size(), RVec(S.size() + 1));
      for (std::size_t r = 0; r < S.size(); ++r) {
        for (std::size_t c = 0; c < S.size(); ++c) rows[r][c] = G(S[r], S[c]);
        rows[r][S.size()] = g[S[r]];
      }
      const Solved s = gauss_jordan(rows, S.size());
      if (!s.independent || !all_nonnegative(s.x)) continue;
      for (std::size_t c = 0; c < S.size(); ++c) z[S[c]] = s.x[c];
    }
    bool dual_feasible = true;
    for (std::size_t j = 0; j < n && dual_feasible; ++j) {
      Rational gj = -g[j];
      for (std::size_t c : S) gj += G(j, c) * z[c];
      dual_feasible = sgn(gj) >= 0;
    }
    if (!dual_feasible) continue;

    RVec y = mat_vec(A, z);
    for (std::size_t i = 0; i < m; ++i) y[i] -= b[i];
    if (!check_exact_separation(inst, y))
      throw Error(ErrorCode::InvalidArgument, "exact oracle: projection does not separate");
    return {Branch::Separation, {}, std::move(y)};
  }
  throw Error(ErrorCode::InvalidArgument, "exact oracle: neither branch certified");
}

bool check_exact_membership(const ExactInstance& inst, const RVec& x) {
  if (x.size() != inst.A.cols() || !all_nonnegative(x)) return false;
  return mat_vec(inst.A, x) == inst.b;
}

bool check_exact_separation(const ExactInstance& inst, const RVec& y) {
  if (y.size() != inst.A.rows()) return false;
  for (std::size_t j = 0; j < inst.A.cols(); ++j) {
    Rational s;
    for (std::size_t i = 0; i < inst.A.rows(); ++i) s += inst.A(i, j) * y[i];
    if (sgn(s) < 0) return false;
  }
  Rational by;
  for (std::size_t i = 0; i < y.size(); ++i) by += inst.b[i] * y[i];
  return sgn(by) < 0;
}

std::size_t exact_min_support(const RMat& A, const RVec& x) {
  const std::size_t n = A.cols();
  if (n > kMaxExactSupportCols)
    throw Error(ErrorCode::TooLarge, "exact_min_support is limited to n <= 12");
  if (x.size() != n) throw Error(ErrorCode::DimensionMismatch, "exact_min_support: x length");
  if (!all_nonnegative(x)) throw Error(ErrorCode::InvalidArgument, "exact_min_support: x < 0");

  const RVec t = mat_vec(A, x);
  if (std::all_of(t.begin(), t.end(), [](const Rational& r) { return sgn(r) == 0; })) return 0;
  for (const std::uint64_t mask : masks_by_size(n, std::min(n, A.rows()))) {
    const auto S = mask_indices(mask);
    if (S.empty()) continue;
    const Solved s = solve_on(A, S, t);
    if (s.independent && s.consistent && all_nonnegative(s.x)) return S.size();
  }
  throw Error(ErrorCode::InvalidArgument, "exact_min_support: no representation found");
}

double grid_min_distance(const ConeInstance& inst, double R, int steps, Execution exec) {
  const Mat& A = inst.A();
  const Vec& b = inst.b();
  const Index m = A.rows();
  const Index n = A.cols();
  const double h = R / steps;
  const long per_axis = steps + 1;
  long total = 1;
  for (Index j = 0; j < n; ++j) total *= per_axis;

  auto distance_sq = [&](long flat) {
    double acc = 0.0;
    // Decode the mixed-radix grid index one axis at a time.
    long code = flat;
    double r[8];
    for (Index i = 0; i < m; ++i) r[i] = -b(i);
    for (Index j = 0; j < n; ++j) {
      const double t = h * static_cast<double>(code % per_axis);
      code /= per_axis;
      for (Index i = 0; i < m; ++i) r[i] += t * A(i, j);
    }
    for (Index i = 0; i < m; ++i) acc += r[i] * r[i];
    return acc;
  };

  double best = std::numeric_limits<double>::infinity();
  if (exec == Execution::Parallel) {
#pragma omp parallel for reduction(min : best) schedule(static)
    for (long k = 0; k < total; ++k) best = std::min(best, distance_sq(k));
  } else {
    for (long k = 0; k < total; ++k) best = std::min(best, distance_sq(k));
  }
  return std::sqrt(best);
}

bool grid_projection_check(const ConeInstance& inst, const ProjectionResult& result, int steps,
                           Execution exec) {
  const Mat& A = inst.A();
  const Vec& b = inst.b();
  const Index n = A.cols();
  if (n > 4) throw Error(ErrorCode::TooLarge, "grid check is limited to n <= 4");
  if (inst.rows() > 8) throw Error(ErrorCode::TooLarge, "grid check is limited to m <= 8");
  if (steps < 1) throw Error(ErrorCode::InvalidArgument, "grid check needs steps >= 1");
  if (result.coeffs.size() != n || result.point.size() != inst.rows()) return false;

  const double delta = result.distance;
  const double slack = 1e-9 * (1.0 + b.norm() + result.point.norm());
  if (!(delta >= 0) || result.coeffs.minCoeff() < -slack) return false;
  if ((A * result.coeffs - result.point).norm() > slack) return false;
  if (std::abs((result.point - b).norm() - delta) > slack) return false;

  double min_col = std::numeric_limits<double>::infinity();
  double col_sum = 0.0;
  for (Index j = 0; j < n; ++j) {
    const double c = A.col(j).norm();
    col_sum += c;
    if (c > 0) min_col = std::min(min_col, c);
  }
  if (!std::isfinite(min_col)) return std::abs(delta - b.norm()) <= slack;  // K = {0}

  const double R = std::max(2.0 * (b.norm() + delta + 1.0) / min_col, result.coeffs.maxCoeff());
  const double resolution = 0.5 * (R / steps) * col_sum;
  const double gmin = grid_min_distance(inst, R, steps, exec);
  return gmin >= delta - slack && gmin <= delta + resolution + slack;
}

}  // namespace farkas::oracle
