#include "farkas/parallel.hpp"

#include "farkas/error.hpp"
#include "farkas/oracle.hpp"

namespace farkas {

namespace {

BatchOutcome decide_one(const ConeInstance& inst, double tol) {
  BatchOutcome out;
  try {
    FarkasResult r = farkas_decide(inst, tol);
    const auto& p = r.projection;
    out.membership_accepts =
        static_cast<bool>(verify_membership(inst, make_membership(inst, p.coeffs), tol));
    out.separation_accepts =
        static_cast<bool>(verify_separation(inst, make_separation(inst, p.point - inst.b()), tol));
    out.verified = r.branch() == Branch::Membership
                       ? static_cast<bool>(verify_membership(inst, r.membership(), tol))
                       : static_cast<bool>(verify_separation(inst, r.separation(), tol));
    out.result = std::move(r);
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

DichotomyTally tally_one(const ConeInstance& inst, const BatchOutcome& o, bool with_oracle) {
  DichotomyTally t;
  t.total = 1;
  if (!o.result) {
    t.errors = 1;
    return t;
  }
  const Branch branch = o.result->branch();
  (branch == Branch::Membership ? t.membership : t.separation) = 1;
  if (o.result->borderline) {
    t.borderline = 1;
    return t;
  }
  if (o.membership_accepts && o.separation_accepts) t.both_accept = 1;
  if (!o.membership_accepts && !o.separation_accepts) t.neither_accepts = 1;
  if (!o.verified) t.unverified = 1;
  const auto small = [](Index d) { return d <= static_cast<Index>(oracle::kMaxExactDecideDim); };
  if (with_oracle && small(inst.rows()) && small(inst.cols())) {
    t.oracle_checked = 1;
    try {
      if (oracle::exact_farkas_decide(oracle::to_exact(inst)).branch != branch) t.oracle_mismatch = 1;
    } catch (const Error&) {
      t.oracle_mismatch = 1;
    }
  }
  return t;
}

}  // namespace

DichotomyTally& DichotomyTally::operator+=(const DichotomyTally& o) {
  total += o.total;
  membership += o.membership;
  separation += o.separation;
  borderline += o.borderline;
  errors += o.errors;
  both_accept += o.both_accept;
  neither_accepts += o.neither_accepts;
  unverified += o.unverified;
  oracle_checked += o.oracle_checked;
  oracle_mismatch += o.oracle_mismatch;
  return *this;
}

std::vector<BatchOutcome> decide_batch(std::span<const ConeInstance> instances, double tol,
                                       Execution exec) {
  const long count = static_cast<long>(instances.size());
  std::vector<BatchOutcome> out(instances.size());
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (long k = 0; k < count; ++k) out[static_cast<std::size_t>(k)] = decide_one(instances[static_cast<std::size_t>(k)], tol);
  } else {
    for (long k = 0; k < count; ++k) out[static_cast<std::size_t>(k)] = decide_one(instances[static_cast<std::size_t>(k)], tol);
  }
  return out;
}

DichotomyTally dichotomy_sweep(std::span<const ConeInstance> instances, double tol,
                               bool with_oracle, Execution exec) {
  const long count = static_cast<long>(instances.size());
  std::vector<DichotomyTally> per(instances.size());
  auto body = [&](long k) {
    const auto& inst = instances[static_cast<std::size_t>(k)];
    per[static_cast<std::size_t>(k)] = tally_one(inst, decide_one(inst, tol), with_oracle);
  };
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (long k = 0; k < count; ++k) body(k);
  } else {
    for (long k = 0; k < count; ++k) body(k);
  }
  DichotomyTally total;
  for (const auto& t : per) total += t;
  return total;
}

}  // namespace farkas
