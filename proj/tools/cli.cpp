#include "cli.hpp"

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <utility>

#include <CLI11.hpp>

#include "farkas/closedness.hpp"
#include "farkas/cone.hpp"
#include "farkas/decomposition.hpp"
#include "farkas/error.hpp"
#include "farkas/instances.hpp"
#include "farkas/lncone.hpp"
#include "farkas/oracle.hpp"
#include "farkas/parallel.hpp"

namespace farkas::cli {

namespace {

// ---------------------------------------------------------------------------
// Report records
//
// Text format (default):
//
//   farkas-report 1
//   command <name>
//   record
//   <key> <value tokens...>
//   ...
//   end
//
// TSV format: one header row (the union of keys in first-seen order) and one
// row per record; vector values are comma-joined, missing cells are "-".

struct Field {
  std::string key;
  std::vector<std::string> value;
};

using Record = std::vector<Field>;

std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> nums(const Vec& v) {
  std::vector<std::string> out;
  for (Index i = 0; i < v.size(); ++i) out.push_back(num(v(i)));
  return out;
}

std::vector<std::string> indices(const Support& s) {
  std::vector<std::string> out;
  for (Index i : s) out.push_back(std::to_string(i));
  return out;
}

class Report {
 public:
  explicit Report(std::string command) : command_(std::move(command)) {}

  Record& add() { return records_.emplace_back(); }

  void render(std::ostream& os, const std::string& format) const {
    if (format == "tsv") {
      std::vector<std::string> keys;
      for (const auto& r : records_)
        for (const auto& f : r)
          if (std::find(keys.begin(), keys.end(), f.key) == keys.end()) keys.push_back(f.key);
      for (std::size_t k = 0; k < keys.size(); ++k) os << (k ? "\t" : "") << keys[k];
      os << '\n';
      for (const auto& r : records_) {
        for (std::size_t k = 0; k < keys.size(); ++k) {
          os << (k ? "\t" : "");
          const auto it = std::find_if(r.begin(), r.end(), [&](const Field& f) { return f.key == keys[k]; });
          if (it == r.end()) {
            os << '-';
            continue;
          }
          for (std::size_t i = 0; i < it->value.size(); ++i) os << (i ? "," : "") << it->value[i];
        }
        os << '\n';
      }
      return;
    }
    os << "farkas-report 1\ncommand " << command_ << '\n';
    for (const auto& r : records_) {
      os << "record\n";
      for (const auto& f : r) {
        os << f.key;
        for (const auto& v : f.value) os << ' ' << v;
        os << '\n';
      }
      os << "end\n";
    }
  }

 private:
  std::string command_;
  std::vector<Record> records_;
};

void put(Record& r, std::string key, std::string value) { r.push_back({std::move(key), {std::move(value)}}); }
void put(Record& r, std::string key, std::vector<std::string> value) { r.push_back({std::move(key), std::move(value)}); }

// ---------------------------------------------------------------------------
// Shared plumbing

struct Common {
  std::optional<double> tol;
  std::uint64_t seed = 1;
  std::string format = "text";
  std::string output;
  bool timing = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--tol", c.tol, "Absolute tolerance (default: $FARKAS_TOL, else 1e-9 scaled to the input)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", c.seed, "Seed for randomized commands");
  cmd->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"text", "tsv"}));
  cmd->add_option("--output", c.output, "Write the report to this file instead of stdout");
  cmd->add_flag("--timing", c.timing, "Print wall-clock time to stderr");
}

std::optional<double> env_tol() {
  const char* s = std::getenv("FARKAS_TOL");
  if (!s || !*s) return std::nullopt;
  double v = 0;
  const auto* end = s + std::char_traits<char>::length(s);
  const auto res = std::from_chars(s, end, v);
  if (res.ec != std::errc() || res.ptr != end || !(v > 0))
    throw Error(ErrorCode::InvalidArgument, "FARKAS_TOL must be a positive number");
  return v;
}

double resolve_tol(const Common& c, const ConeInstance& inst) {
  if (c.tol) return *c.tol;
  if (auto e = env_tol()) return *e;
  return default_tol(inst);
}

double resolve_tol(const Common& c, const Mat& A) {
  if (c.tol) return *c.tol;
  if (auto e = env_tol()) return *e;
  return default_tol(A);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

InstanceFile load(const std::string& path) { return read_instance(slurp(path)); }

Vec parse_list(const std::string& text, Index expect, const char* what) {
  std::vector<double> vals;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = std::min(text.find(',', pos), text.size());
    const std::string tok = text.substr(pos, comma - pos);
    double v = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || res.ec != std::errc() || res.ptr != tok.data() + tok.size())
      throw Error(ErrorCode::InvalidArgument, std::string(what) + ": bad number '" + tok + "'");
    vals.push_back(v);
    if (comma == text.size()) break;
    pos = comma + 1;
  }
  if (static_cast<Index>(vals.size()) != expect)
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": expected " +
                                                  std::to_string(expect) + " entries");
  return Eigen::Map<Vec>(vals.data(), static_cast<Index>(vals.size()));
}

// Emits the report to --output or `out`.
void emit(const Report& report, const Common& c, std::ostream& out) {
  if (c.output.empty()) {
    report.render(out, c.format);
    return;
  }
  std::ofstream f(c.output, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write '" + c.output + "'");
  report.render(f, c.format);
}

void emit_text(const std::string& text, const Common& c, std::ostream& out) {
  if (c.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.output, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write '" + c.output + "'");
  f << text;
}

void put_certificate(Record& r, const FarkasResult& res) {
  if (res.branch() == Branch::Membership) {
    const auto& m = res.membership();
    put(r, "certificate", "membership");
    put(r, "x", nums(m.x));
    put(r, "residual", num(m.residual));
  } else {
    const auto& s = res.separation();
    put(r, "certificate", "separation");
    put(r, "y", nums(s.y));
    put(r, "margins", nums(s.margins));
    put(r, "bmargin", num(s.bmargin));
  }
}

// ---------------------------------------------------------------------------
// Commands

int cmd_decide(const std::vector<std::string>& paths, bool exact_check, const Common& c,
               std::ostream& out) {
  // Files are parsed in order; the decisions run as one parallel batch and
  // are reported in input order.
  std::vector<std::optional<ConeInstance>> parsed;
  std::vector<std::string> parse_errors(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    try {
      parsed.emplace_back(load(paths[i]).instance);
    } catch (const std::exception& e) {
      parsed.emplace_back(std::nullopt);
      parse_errors[i] = e.what();
    }
  }

  std::vector<ConeInstance> ok;
  std::vector<double> tols;
  for (const auto& p : parsed)
    if (p) {
      ok.push_back(*p);
      tols.push_back(resolve_tol(c, *p));
    }
  // One tolerance per instance: decide them individually through the
  // batch kernel when they agree, otherwise one by one.
  std::vector<BatchOutcome> outcomes;
  const bool uniform = std::adjacent_find(tols.begin(), tols.end(), std::not_equal_to<>()) == tols.end();
  if (uniform && !ok.empty()) {
    outcomes = decide_batch(ok, tols.front(), Execution::Parallel);
  } else {
    for (std::size_t i = 0; i < ok.size(); ++i) {
      auto one = decide_batch(std::span<const ConeInstance>(&ok[i], 1), tols[i], Execution::Serial);
      outcomes.push_back(std::move(one.front()));
    }
  }

  Report report("decide");
  bool any_error = false;
  bool all_membership = true;
  std::size_t k = 0;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    Record& r = report.add();
    put(r, "instance", paths[i]);
    if (!parsed[i]) {
      put(r, "error", parse_errors[i]);
      any_error = true;
      continue;
    }
    const ConeInstance& inst = ok[k];
    const BatchOutcome& o = outcomes[k];
    ++k;
    put(r, "m", std::to_string(inst.rows()));
    put(r, "n", std::to_string(inst.cols()));
    if (!o.result) {
      put(r, "error", o.error);
      any_error = true;
      continue;
    }
    const FarkasResult& res = *o.result;
    put(r, "branch", std::string(to_string(res.branch())));
    put(r, "delta", num(res.projection.distance));
    put(r, "borderline", res.borderline ? "1" : "0");
    put(r, "verified", o.verified ? "1" : "0");
    if (exact_check) {
      std::string verdict = "skipped";
      if (inst.rows() <= static_cast<Index>(oracle::kMaxExactDecideDim) &&
          inst.cols() <= static_cast<Index>(oracle::kMaxExactDecideDim)) {
        try {
          verdict = oracle::exact_farkas_decide(oracle::to_exact(inst)).branch == res.branch()
                        ? "agree"
                        : "disagree";
        } catch (const Error&) {
          verdict = "error";
        }
      }
      put(r, "exact-check", verdict);
      if (verdict == "disagree" || verdict == "error") any_error = true;
    }
    put_certificate(r, res);
    if (!o.verified) any_error = true;
    if (res.branch() != Branch::Membership) all_membership = false;
  }
  emit(report, c, out);
  if (any_error) return kError;
  return all_membership ? kOk : kNegative;
}

int cmd_project(const std::string& path, const Common& c, std::ostream& out) {
  const ConeInstance inst = load(path).instance;
  const ProjectionResult p = project_onto_cone(inst, resolve_tol(c, inst));
  Report report("project");
  Record& r = report.add();
  put(r, "instance", path);
  put(r, "coeffs", nums(p.coeffs));
  put(r, "point", nums(p.point));
  put(r, "distance", num(p.distance));
  put(r, "iterations", std::to_string(p.iterations));
  emit(report, c, out);
  return kOk;
}

Vec x_or_projection(const ConeInstance& inst, const std::string& xs, double tol) {
  if (!xs.empty()) return parse_list(xs, inst.cols(), "--x");
  return project_onto_cone(inst, tol).coeffs;
}

int cmd_reduce(const std::string& path, const std::string& xs, bool exact, const Common& c,
               std::ostream& out) {
  const ConeInstance inst = load(path).instance;
  const double tol = resolve_tol(c, inst);
  const Vec x = x_or_projection(inst, xs, tol);
  const SupportWitness w = exact ? minimal_support_exact(inst.A(), x, kDefaultMaxColumns, tol)
                                 : reduce_to_independent_support(inst.A(), x, tol);
  Report report("reduce");
  Record& r = report.add();
  put(r, "instance", path);
  put(r, "x", nums(x));
  put(r, "z", nums(w.z));
  put(r, "support", indices(w.support));
  put(r, "cardinality", std::to_string(w.support.size()));
  put(r, "minimality", w.minimal == Minimality::Global ? "global" : "independent-columns");
  put(r, "image-error", num((inst.A() * (w.z - x)).norm()));
  emit(report, c, out);
  return kOk;
}

int cmd_optimal(const std::string& path, const std::string& xs, const std::string& mode,
                const Common& c, std::ostream& out) {
  const ConeInstance inst = load(path).instance;
  const double tol = resolve_tol(c, inst);
  const Vec x = x_or_projection(inst, xs, tol);
  const ConicDecomposition d = optimalize(
      inst.A(), x, mode == "exact" ? OptimalizeMode::Exact : OptimalizeMode::Heuristic, tol);
  Report report("optimal");
  Record& r = report.add();
  put(r, "instance", path);
  put(r, "mode", mode);
  put(r, "x", nums(x));
  put(r, "lambda", num(d.lambda));
  put(r, "u", nums(d.u));
  put(r, "support", indices(d.support));
  put(r, "image-norm", num((inst.A() * d.u).norm()));
  emit(report, c, out);
  return kOk;
}

// Reads the first certificate section ("certificate <kind>" followed by an
// "x ..." or "y ..." line) from a decide report or a hand-written file.
std::pair<Branch, Vec> read_certificate(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::optional<Branch> kind;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "certificate") {
      std::string k;
      ls >> k;
      if (k == "membership") kind = Branch::Membership;
      else if (k == "separation") kind = Branch::Separation;
      else throw Error(ErrorCode::InvalidArgument, "unknown certificate kind '" + k + "'");
    } else if (kind && ((key == "x" && *kind == Branch::Membership) ||
                        (key == "y" && *kind == Branch::Separation))) {
      std::vector<double> vals;
      std::string tok;
      while (ls >> tok) {
        double v = 0;
        const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
          throw Error(ErrorCode::InvalidArgument, "bad certificate entry '" + tok + "'");
        vals.push_back(v);
      }
      return {*kind, Eigen::Map<Vec>(vals.data(), static_cast<Index>(vals.size()))};
    }
  }
  throw Error(ErrorCode::InvalidArgument, "no certificate section found");
}

int cmd_verify(const std::string& path, const std::string& cert_path, const Common& c,
               std::ostream& out) {
  const ConeInstance inst = load(path).instance;
  const double tol = resolve_tol(c, inst);
  const auto [kind, vec] = read_certificate(slurp(cert_path));
  Verdict v{false, VerifyReason::DimensionMismatch};
  if (kind == Branch::Membership) {
    if (vec.size() == inst.cols()) v = verify_membership(inst, make_membership(inst, vec), tol);
  } else {
    if (vec.size() == inst.rows()) v = verify_separation(inst, make_separation(inst, vec), tol);
  }
  Report report("verify");
  Record& r = report.add();
  put(r, "instance", path);
  put(r, "certificate", std::string(to_string(kind)));
  put(r, "accepted", v.accepted ? "1" : "0");
  put(r, "reason", std::string(to_string(v.reason)));
  emit(report, c, out);
  return v.accepted ? kOk : kNegative;
}

int cmd_gen(const GenSpec& spec, const Common& c, std::ostream& out) {
  const GeneratedInstance g = generate(spec);
  std::string text = "# generated m=" + std::to_string(spec.m) + " n=" + std::to_string(spec.n) +
                     " branch=" + std::string(to_string(spec.branch)) +
                     " seed=" + std::to_string(spec.seed) + " attempts=" + std::to_string(g.attempts) + "\n";
  text += write_instance(g.instance);
  emit_text(text, c, out);
  return kOk;
}

int cmd_cbound(const std::string& path, int samples, const Common& c, std::ostream& out) {
  const ConeInstance inst = load(path).instance;
  const double tol = resolve_tol(c, inst.A());
  const double lower = c_lower_bound(inst.A(), kDefaultMaxColumns, tol);
  const double sampled = c_sample_estimate(inst.A(), samples, c.seed);
  Report report("cbound");
  Record& r = report.add();
  put(r, "instance", path);
  put(r, "c-lower-bound", num(lower));
  put(r, "c-sample-estimate", num(sampled));
  put(r, "samples", std::to_string(samples));
  put(r, "seed", std::to_string(c.seed));
  emit(report, c, out);
  return kOk;
}

void put_lncone_row(Record& r, const lncone::DemoRow& row) {
  put(r, "k", row.k == 0 ? std::string("limit") : std::to_string(row.k));
  put(r, "p", std::vector<std::string>{num(row.p[0]), num(row.p[1])});
  put(r, "member", row.result.member ? "1" : "0");
  if (row.result.witness) {
    const auto& w = *row.result.witness;
    put(r, "lambda", num(w.lambda));
    put(r, "base-point", std::vector<std::string>{num(w.x), num(w.y)});
  }
  put(r, "witness-ok", row.witness_ok ? "1" : "0");
}

int cmd_demo_lncone(int k_max, const Common& c, std::ostream& out) {
  const double tol = c.tol.value_or(env_tol().value_or(1e-9));
  const lncone::DemoReport d = lncone::nonclosedness_demo(k_max, tol);
  Report report("demo-lncone");
  for (const auto& row : d.sequence) put_lncone_row(report.add(), row);
  put_lncone_row(report.add(), d.limit);
  Record& s = report.add();
  put(s, "not-closed", d.not_closed ? "1" : "0");
  emit(report, c, out);
  return d.not_closed ? kOk : kNegative;
}

int cmd_closedness(int count, const ClosednessOptions& opt, const Common& c, std::ostream& out) {
  const ClosednessReport rep = closedness_suite(count, c.seed, opt);
  Report report("closedness");
  Record& s = report.add();
  put(s, "count", std::to_string(rep.count));
  put(s, "passed", std::to_string(rep.passed));
  put(s, "zero-limits", std::to_string(rep.zero_limits));
  put(s, "min-c-bound", num(rep.min_c_bound));
  put(s, "max-lambda-gap", num(rep.max_lambda_gap));
  for (const auto& f : rep.failures) {
    Record& r = report.add();
    put(r, "failed-m", std::to_string(f.A.rows()));
    put(r, "failed-n", std::to_string(f.A.cols()));
    put(r, "limit", nums(f.limit));
    put(r, "limit-member", f.limit_member ? "1" : "0");
    put(r, "mu-step", f.mu_step_ok ? "1" : "0");
  }
  emit(report, c, out);
  return rep.passed == rep.count ? kOk : kNegative;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certified Farkas alternative for finitely generated cones"};
  app.require_subcommand(1);

  Common common;
  std::vector<std::string> paths;
  std::string path, cert_path, xs, mode = "exact";
  bool exact_check = false, exact = false;
  int samples = 256, k_max = 100, count = 100;
  GenSpec gen;
  std::string branch = "random";
  ClosednessOptions copt;

  auto* decide = app.add_subcommand("decide", "Decide b in K or separate, with a certificate");
  decide->add_option("instances", paths, "Instance files")->required();
  decide->add_flag("--exact-check", exact_check, "Cross-check the branch with the exact oracle");
  add_common(decide, common);

  auto* project = app.add_subcommand("project", "Nearest point of K to b");
  project->add_option("instance", path)->required();
  add_common(project, common);

  auto* reduce = app.add_subcommand("reduce", "Reduce a representation to independent support columns");
  reduce->add_option("instance", path)->required();
  reduce->add_option("--x", xs, "Comma-separated x >= 0 (default: projection coefficients)");
  reduce->add_flag("--exact", exact, "Globally minimal support by enumeration");
  add_common(reduce, common);

  auto* optimal = app.add_subcommand("optimal", "lambda * A u decomposition with u optimal");
  optimal->add_option("instance", path)->required();
  optimal->add_option("--x", xs, "Comma-separated x >= 0 (default: projection coefficients)");
  optimal->add_option("--mode", mode)->check(CLI::IsMember({"exact", "heuristic"}));
  add_common(optimal, common);

  auto* verify = app.add_subcommand("verify", "Check a certificate against an instance");
  verify->add_option("instance", path)->required();
  verify->add_option("certificate", cert_path, "File with a 'certificate' section")->required();
  add_common(verify, common);

  auto* genc = app.add_subcommand("gen", "Generate a random instance");
  genc->add_option("--m", gen.m)->check(CLI::PositiveNumber);
  genc->add_option("--n", gen.n)->check(CLI::PositiveNumber);
  genc->add_option("--branch", branch)->check(CLI::IsMember({"membership", "separation", "random"}));
  genc->add_option("--lo", gen.lo);
  genc->add_option("--hi", gen.hi);
  add_common(genc, common);

  auto* cbound = app.add_subcommand("cbound", "Bounds on inf |Au| over optimal u");
  cbound->add_option("instance", path)->required();
  cbound->add_option("--samples", samples)->check(CLI::PositiveNumber);
  add_common(cbound, common);

  auto* lnc = app.add_subcommand("demo-lncone", "Non-closed cone generated by a closed convex set");
  lnc->add_option("--kmax", k_max)->check(CLI::PositiveNumber);
  add_common(lnc, common);

  auto* clos = app.add_subcommand("closedness", "Limits of convergent sequences in K stay in K");
  clos->add_option("--count", count)->check(CLI::PositiveNumber);
  clos->add_option("--max-rows", copt.max_rows)->check(CLI::PositiveNumber);
  clos->add_option("--max-cols", copt.max_cols)->check(CLI::Range(1, 16));
  add_common(clos, common);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kError;
  }

  const auto start = std::chrono::steady_clock::now();
  int code = kError;
  try {
    if (*decide) code = cmd_decide(paths, exact_check, common, out);
    else if (*project) code = cmd_project(path, common, out);
    else if (*reduce) code = cmd_reduce(path, xs, exact, common, out);
    else if (*optimal) code = cmd_optimal(path, xs, mode, common, out);
    else if (*verify) code = cmd_verify(path, cert_path, common, out);
    else if (*genc) {
      gen.branch = parse_forced_branch(branch);
      gen.seed = common.seed;
      code = cmd_gen(gen, common, out);
    } else if (*cbound) code = cmd_cbound(path, samples, common, out);
    else if (*lnc) code = cmd_demo_lncone(k_max, common, out);
    else if (*clos) code = cmd_closedness(count, copt, common, out);
  } catch (const std::exception& e) {
    err << "farkas: " << e.what() << '\n';
    return kError;
  }
  if (common.timing) {
    const auto us = std::chrono::duration_cast<std::chrono::microseconds>(
        std::chrono::steady_clock::now() - start);
    err << "time_us " << us.count() << '\n';
  }
  return code;
}

}  // namespace farkas::cli
