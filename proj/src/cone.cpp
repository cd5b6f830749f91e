#include "farkas/cone.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "farkas/error.hpp"

namespace farkas {

ConeInstance::ConeInstance(Mat A, Vec b) : A_(std::move(A)), b_(std::move(b)) {
  if (A_.rows() < 1 || A_.cols() < 1)
    throw Error(ErrorCode::DimensionMismatch, "A must have at least one row and one column");
  if (b_.size() != A_.rows())
    throw Error(ErrorCode::DimensionMismatch,
                "b has length " + std::to_string(b_.size()) + ", A has " +
                    std::to_string(A_.rows()) + " rows");
  if (!all_finite(A_) || !all_finite(b_))
    throw Error(ErrorCode::NonFinite, "instance contains NaN or infinity");
}

double default_tol(const ConeInstance& inst) { return default_tol(inst.A(), inst.b()); }

std::string_view to_string(Branch b) noexcept {
  return b == Branch::Membership ? "membership" : "separation";
}

std::string_view to_string(VerifyReason r) noexcept {
  switch (r) {
    case VerifyReason::Accepted: return "accepted";
    case VerifyReason::DimensionMismatch: return "dimension-mismatch";
    case VerifyReason::NonFinite: return "non-finite";
    case VerifyReason::NegativeCoefficient: return "negative-coefficient";
    case VerifyReason::Residual: return "residual";
    case VerifyReason::DualInfeasible: return "dual-infeasible";
    case VerifyReason::NotSeparating: return "not-separating";
  }
  return "unknown";
}

namespace {

std::vector<Index> passive_indices(const std::vector<char>& passive) {
  std::vector<Index> idx;
  for (std::size_t i = 0; i < passive.size(); ++i)
    if (passive[i]) idx.push_back(static_cast<Index>(i));
  return idx;
}

}  // namespace

ProjectionResult project_onto_cone(const ConeInstance& inst, double tol) {
  if (!(tol > 0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  const Mat& A = inst.A();
  const Vec& b = inst.b();
  const Index m = A.rows();
  const Index n = A.cols();

  // Dual-feasibility threshold for entering variables: a few ulps of the
  // largest term that can appear in A^T (b - Ax).
  const double eps = std::numeric_limits<double>::epsilon();
  const double kkt = 64.0 * eps * static_cast<double>(m) * (1.0 + A.cwiseAbs().maxCoeff()) *
                     (1.0 + b.norm());
  const long max_pivots = 10L * n * (n + 1);

  Vec x = Vec::Zero(n);
  std::vector<char> passive(static_cast<std::size_t>(n), 0);
  std::vector<char> blocked(static_cast<std::size_t>(n), 0);
  Vec w = A.transpose() * b;
  long pivots = 0;

  auto bump = [&] {
    if (++pivots > max_pivots)
      throw Error(ErrorCode::IterationLimit,
                  "active set exceeded " + std::to_string(max_pivots) + " pivots");
  };

  for (;;) {
    Index enter = -1;
    double best = kkt;
    for (Index j = 0; j < n; ++j) {
      if (passive[j] || blocked[j]) continue;
      if (w(j) > best) {
        best = w(j);
        enter = j;
      }
    }
    if (enter < 0) break;
    bump();

    passive[enter] = 1;
    Vec z;
    try {
      z = lstsq_on_support(A, b, Support(passive_indices(passive)), tol);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RankDeficient) throw;
      z = Vec();
    }
    // The entering column must come in with a positive coefficient; if
    // rounding says otherwise it stays out until the active set changes.
    if (z.size() == 0 || z(enter) <= 0) {
      passive[enter] = 0;
      blocked[enter] = 1;
      continue;
    }

    for (;;) {
      Index leave = -1;
      double alpha = std::numeric_limits<double>::infinity();
      for (Index i = 0; i < n; ++i) {
        if (!passive[i] || z(i) > 0) continue;
        const double ratio = x(i) / (x(i) - z(i));
        if (ratio < alpha) {
          alpha = ratio;
          leave = i;
        }
      }
      if (leave < 0) break;
      bump();

      x += alpha * (z - x);
      x(leave) = 0.0;
      for (Index i = 0; i < n; ++i) {
        if (passive[i] && x(i) <= 0.0) {
          passive[i] = 0;
          x(i) = 0.0;
        }
      }
      const auto idx = passive_indices(passive);
      if (idx.empty()) {
        z = Vec::Zero(n);
        break;
      }
      z = lstsq_on_support(A, b, Support(idx), tol);
    }

    x = z;
    for (Index i = 0; i < n; ++i)
      if (!passive[i]) x(i) = 0.0;
    w = A.transpose() * (b - A * x);
    std::fill(blocked.begin(), blocked.end(), 0);
  }

  ProjectionResult out;
  out.coeffs = x.cwiseMax(0.0);
  out.point = A * out.coeffs;
  out.distance = (out.point - b).norm();
  out.iterations = static_cast<int>(pivots);
  return out;
}

ProjectionResult project_onto_cone(const ConeInstance& inst) {
  return project_onto_cone(inst, default_tol(inst));
}

MembershipCertificate make_membership(const ConeInstance& inst, Vec x) {
  if (x.size() != inst.cols())
    throw Error(ErrorCode::DimensionMismatch, "membership x has wrong length");
  const double residual = (inst.A() * x - inst.b()).norm();
  return {std::move(x), residual};
}

SeparationCertificate make_separation(const ConeInstance& inst, Vec y) {
  if (y.size() != inst.rows())
    throw Error(ErrorCode::DimensionMismatch, "separation y has wrong length");
  SeparationCertificate c;
  c.delta = y.norm();
  c.margins = inst.A().transpose() * y;
  c.bmargin = inst.b().dot(y);
  c.y = std::move(y);
  return c;
}

SeparationCertificate normalized(const SeparationCertificate& cert) {
  SeparationCertificate c = cert;
  const double s = cert.y.norm();
  if (s > 0) {
    c.y /= s;
    c.margins /= s;
    c.bmargin /= s;
  }
  return c;
}

FarkasResult farkas_decide(const ConeInstance& inst, double tol) {
  ProjectionResult proj = project_onto_cone(inst, tol);
  const double tol_member = tol * (1.0 + inst.b().norm());
  const double delta = proj.distance;

  FarkasResult out{MembershipCertificate{}, {}, false};
  if (delta <= tol_member) {
    out.certificate = make_membership(inst, proj.coeffs);
  } else {
    out.certificate = make_separation(inst, proj.point - inst.b());
    out.borderline = delta <= 10.0 * tol_member;
  }
  out.projection = std::move(proj);
  return out;
}

FarkasResult farkas_decide(const ConeInstance& inst) {
  return farkas_decide(inst, default_tol(inst));
}

Verdict verify_membership(const ConeInstance& inst, const MembershipCertificate& cert,
                          double tol) {
  if (cert.x.size() != inst.cols()) return {false, VerifyReason::DimensionMismatch};
  if (!all_finite(cert.x)) return {false, VerifyReason::NonFinite};
  if (cert.x.minCoeff() < -tol) return {false, VerifyReason::NegativeCoefficient};
  const double residual = (inst.A() * cert.x - inst.b()).norm();
  if (!(residual <= tol * (1.0 + inst.b().norm()))) return {false, VerifyReason::Residual};
  return {true, VerifyReason::Accepted};
}

Verdict verify_separation(const ConeInstance& inst, const SeparationCertificate& cert,
                          double tol) {
  if (cert.y.size() != inst.rows()) return {false, VerifyReason::DimensionMismatch};
  if (!all_finite(cert.y)) return {false, VerifyReason::NonFinite};
  const Vec margins = inst.A().transpose() * cert.y;
  if (margins.minCoeff() < -tol) return {false, VerifyReason::DualInfeasible};
  if (!(inst.b().dot(cert.y) < -tol)) return {false, VerifyReason::NotSeparating};
  return {true, VerifyReason::Accepted};
}

double directional_derivative_check(const Vec& v, const Vec& b, const Vec& w) {
  if (v.size() != b.size() || w.size() != b.size())
    throw Error(ErrorCode::DimensionMismatch, "directional derivative: length mismatch");
  return w.dot(v - b);
}

}  // namespace farkas
