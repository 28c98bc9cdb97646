// perm2: higher-order rewriting with proof terms and permutation equivalence.
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "perm2/cells.hpp"
#include "perm2/generate.hpp"
#include "perm2/laws.hpp"
#include "perm2/monad.hpp"
#include "perm2/oracle.hpp"
#include "perm2/parse.hpp"
#include "perm2/permeq.hpp"
#include "perm2/rewrite.hpp"
#include "perm2/sigops.hpp"

using namespace perm2;
using nlohmann::json;

namespace {

bool use_color() {
  const char* env = std::getenv("PERM2_COLOR");
  std::string mode = env ? env : "auto";
  if (mode == "always") return true;
  if (mode == "never") return false;
  return isatty(fileno(stdout));
}

std::string paint(const std::string& s, const char* code) {
  if (!use_color()) return s;
  return std::string("\033[") + code + "m" + s + "\033[0m";
}

std::string green(const std::string& s) { return paint(s, "32"); }
std::string red(const std::string& s) { return paint(s, "31"); }

Signature2 load_signature(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_signature(ss.str());
}

json violations_json(const std::vector<Violation>& vs) {
  json arr = json::array();
  for (auto& v : vs)
    arr.push_back({{"kind", v.kind}, {"where", v.where}, {"detail", v.detail}});
  return arr;
}

int cmd_check(const std::string& file, bool as_json) {
  Signature2 sig = load_signature(file);
  ValidationReport rep = validate_signature(sig);
  HrsResult hrs = rep.ok() ? is_hrs(sig) : HrsResult{false, {}};
  if (as_json) {
    json out = {{"valid", rep.ok()},
                {"hrs", rep.ok() && hrs.ok},
                {"violations", violations_json(rep.violations)},
                {"hrs_violations", violations_json(hrs.violations)}};
    std::cout << out.dump(2) << "\n";
  } else if (rep.ok()) {
    std::cout << (hrs.ok ? green("valid HRS") : green("valid") + " (not an HRS)")
              << "\n";
    for (auto& v : hrs.violations)
      std::cout << "  " << v.kind << " in " << v.where
                << (v.detail.empty() ? "" : ": " + v.detail) << "\n";
  } else {
    std::cout << red("invalid") << "\n";
    for (auto& v : rep.violations)
      std::cout << "  " << v.kind << " in " << v.where
                << (v.detail.empty() ? "" : ": " + v.detail) << "\n";
  }
  return rep.ok() ? 0 : 1;
}

int cmd_normalize(const std::string& file, const std::string& ctx_s,
                  const std::string& term_s, bool as_json) {
  Signature2 sig = load_signature(file);
  Context ctx = parse_context(ctx_s, sig.base);
  TermPtr m = parse_term(term_s, sig.base, ctx);
  TypePtr ty = typecheck_term(ctx, m, sig);
  TermPtr nf = beta_eta_normalize(sig, ctx, m, ty);
  if (as_json) {
    json out = {{"term", print_term(nf, sig.base, ctx)},
                {"type", print_type(ty, sig.base)}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << print_term(nf, sig.base, ctx) << " : " << print_type(ty, sig.base)
              << "\n";
  }
  return 0;
}

int cmd_typecheck_proof(const std::string& file, const std::string& ctx_s,
                        const std::string& proof_s, bool as_json) {
  Signature2 sig = load_signature(file);
  Context ctx = parse_context(ctx_s, sig.base);
  RedPtr p = parse_reduction(proof_s, sig, ctx);
  Triple t = typecheck_reduction(ctx, p, sig);
  if (as_json) {
    json out = {{"source", print_term(t.source, sig.base, ctx)},
                {"target", print_term(t.target, sig.base, ctx)},
                {"type", print_type(t.type, sig.base)}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << print_term(t.source, sig.base, ctx) << " -> "
              << print_term(t.target, sig.base, ctx) << " : "
              << print_type(t.type, sig.base) << "\n";
  }
  return 0;
}

json canonical_json(const Signature2& sig, const Context& ctx,
                    const CanonicalForm& cf) {
  json steps = json::array();
  for (auto& s : cf.steps) {
    json args = json::array();
    Context local = context_at(ctx, s.context, s.position);
    for (auto& a : s.args) args.push_back(print_term(a, sig.base, local));
    steps.push_back({{"rule", sig.rule(s.rule).name},
                     {"position", path_str(s.position)},
                     {"args", args},
                     {"source", print_term(s.source, sig.base, ctx)},
                     {"target", print_term(s.target, sig.base, ctx)}});
  }
  return steps;
}

int cmd_equiv(const std::string& file, const std::string& ctx_s,
              const std::string& p_s, const std::string& q_s, int oracle_budget,
              bool as_json) {
  Signature2 sig = load_signature(file);
  Context ctx = parse_context(ctx_s, sig.base);
  ReductionJudgment p = make_judgment(sig, ctx, parse_reduction(p_s, sig, ctx));
  ReductionJudgment q = make_judgment(sig, ctx, parse_reduction(q_s, sig, ctx));
  EquivCertificate cert = perm_equiv(sig, p, q);
  std::string oracle;
  std::vector<OracleTraceEntry> trace;
  if (oracle_budget > 0 && alpha_equal(p.source, q.source) &&
      alpha_equal(p.target, q.target) && type_equal(p.type, q.type)) {
    OracleResult r = oracle_equiv(sig, p, q, oracle_budget);
    oracle = oracle_verdict_name(r.verdict);
    trace = r.trace;
  }
  if (as_json) {
    json out = {{"equivalent", cert.verdict},
                {"reason", cert.reason},
                {"left_canonical", canonical_json(sig, ctx, cert.left)},
                {"right_canonical", canonical_json(sig, ctx, cert.right)}};
    if (!oracle.empty()) {
      out["oracle"] = oracle;
      json tr = json::array();
      for (auto& e : trace) tr.push_back(e.equation);
      out["oracle_trace"] = tr;
    }
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << (cert.verdict ? green("equivalent") : red("not equivalent"));
    if (!cert.reason.empty()) std::cout << " (" << cert.reason << ")";
    std::cout << "\n";
    std::cout << "left canonical form: " << cert.left.steps.size() << " step(s)\n";
    for (auto& s : cert.left.steps)
      std::cout << "  " << sig.rule(s.rule).name << " @ " << path_str(s.position)
                << " : " << print_term(s.source, sig.base, ctx) << " => "
                << print_term(s.target, sig.base, ctx) << "\n";
    std::cout << "right canonical form: " << cert.right.steps.size()
              << " step(s)\n";
    for (auto& s : cert.right.steps)
      std::cout << "  " << sig.rule(s.rule).name << " @ " << path_str(s.position)
                << " : " << print_term(s.source, sig.base, ctx) << " => "
                << print_term(s.target, sig.base, ctx) << "\n";
    if (!oracle.empty()) {
      std::cout << "oracle: " << oracle;
      if (!trace.empty()) {
        std::cout << " via";
        for (auto& e : trace) std::cout << " " << e.equation;
      }
      std::cout << "\n";
    }
  }
  return 0;
}

int cmd_rewrite(const std::string& file, const std::string& ctx_s,
                const std::string& term_s, const std::string& strategy, int fuel,
                bool as_json) {
  Signature2 sig = load_signature(file);
  Context ctx = parse_context(ctx_s, sig.base);
  TermPtr m = parse_term(term_s, sig.base, ctx);
  Strategy st = strategy == "parallel-outermost" ? Strategy::ParallelOutermost
                                                 : Strategy::LeftmostOutermost;
  RewriteResult res = normalize_by_rules(sig, ctx, m, st, fuel);
  if (as_json) {
    json steps = json::array();
    for (auto& s : res.trace.steps)
      steps.push_back({{"rule", sig.rule(s.rule).name},
                       {"position", path_str(s.position)},
                       {"before", print_term(s.before, sig.base, ctx)},
                       {"after", print_term(s.after, sig.base, ctx)}});
    json out = {{"start", print_term(res.trace.start, sig.base, ctx)},
                {"steps", steps},
                {"terminated", res.terminated}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << print_trace(res.trace, sig, ctx);
    TermPtr last = res.trace.steps.empty() ? res.trace.start
                                           : res.trace.steps.back().after;
    std::cout << "result: " << print_term(last, sig.base, ctx) << "\n";
    if (!res.terminated) std::cout << red("fuel exhausted") << "\n";
  }
  return 0;
}

int cmd_flatten(const std::string& file, const std::string& ctx_s,
                const std::string& proof_s, bool as_json) {
  Signature2 sig = load_signature(file);
  Context ctx = parse_context(ctx_s, sig.base);
  ReductionJudgment j =
      make_judgment(sig, ctx, parse_reduction(proof_s, sig, ctx));
  Trace tr = flatten_proof(sig, j);
  if (as_json) {
    json steps = json::array();
    for (auto& s : tr.steps)
      steps.push_back({{"rule", sig.rule(s.rule).name},
                       {"position", path_str(s.position)},
                       {"before", print_term(s.before, sig.base, ctx)},
                       {"after", print_term(s.after, sig.base, ctx)}});
    json out = {{"start", print_term(tr.start, sig.base, ctx)}, {"steps", steps}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << print_trace(tr, sig, ctx);
    std::cout << "steps: " << tr.steps.size() << "\n";
  }
  return 0;
}

int cmd_laws(const std::string& file, int samples, uint64_t seed, bool as_json) {
  Signature2 sig = load_signature(file);
  ValidationReport v = validate_signature(sig);
  if (!v.ok()) {
    std::cout << red("invalid signature") << "\n";
    return 1;
  }
  std::vector<LawReport> reports;
  reports.push_back(crucial_proposition_suite(sig, samples, seed));
  reports.push_back(interchange_suite(sig, samples, seed + 1));
  reports.push_back(whisker_functoriality_suite(sig, samples / 2, seed + 2));
  reports.push_back(product_iso_suite(sig, samples / 2, seed + 3));
  reports.push_back(monad_law_suite(sig, samples / 2, seed + 4));
  bool all_ok = true;
  json jout = json::array();
  for (auto& r : reports) {
    all_ok = all_ok && r.ok();
    if (as_json) {
      jout.push_back({{"law", r.name},
                      {"checked", r.checked},
                      {"failed", r.failed},
                      {"failures", r.failures}});
    } else {
      std::cout << (r.ok() ? green("PASS") : red("FAIL")) << " " << r.name << " ("
                << r.checked << " instances";
      if (r.failed) std::cout << ", " << r.failed << " failures";
      std::cout << ")\n";
      for (auto& f : r.failures) std::cout << "    " << f << "\n";
    }
  }
  if (as_json) std::cout << jout.dump(2) << "\n";
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"higher-order rewriting with proof terms and permutation equivalence"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "machine-readable output");

  std::string file, ctx_s, term_s, proof_s, proof2_s;
  int fuel = 100, oracle_budget = 0, samples = 100;
  uint64_t seed = 1;
  std::string strategy = "leftmost-outermost";

  auto* check = app.add_subcommand("check", "validate a signature file");
  check->add_option("file", file)->required();

  auto* normalize = app.add_subcommand("normalize", "beta-eta-normalize a term");
  normalize->add_option("file", file)->required();
  normalize->add_option("ctx", ctx_s)->required();
  normalize->add_option("term", term_s)->required();

  auto* tcp = app.add_subcommand("typecheck-proof", "type a proof term");
  tcp->add_option("file", file)->required();
  tcp->add_option("ctx", ctx_s)->required();
  tcp->add_option("proof", proof_s)->required();

  auto* equiv = app.add_subcommand("equiv", "decide permutation equivalence");
  equiv->add_option("file", file)->required();
  equiv->add_option("ctx", ctx_s)->required();
  equiv->add_option("proof1", proof_s)->required();
  equiv->add_option("proof2", proof2_s)->required();
  equiv->add_option("--oracle-budget", oracle_budget,
                    "cross-check with the brute-force oracle");

  auto* rewrite = app.add_subcommand("rewrite", "rewrite a term by the rules");
  rewrite->add_option("file", file)->required();
  rewrite->add_option("ctx", ctx_s)->required();
  rewrite->add_option("term", term_s)->required();
  rewrite->add_option("--strategy", strategy,
                      "leftmost-outermost | parallel-outermost");
  rewrite->add_option("--fuel", fuel, "maximum number of steps/rounds");

  auto* flatten = app.add_subcommand("flatten", "flatten a proof to a trace");
  flatten->add_option("file", file)->required();
  flatten->add_option("ctx", ctx_s)->required();
  flatten->add_option("proof", proof_s)->required();

  auto* laws = app.add_subcommand("laws", "run the categorical law suites");
  laws->add_option("file", file)->required();
  laws->add_option("--samples", samples, "instances per suite");
  laws->add_option("--seed", seed, "PRNG seed");

  // top-level flags (--json) remain usable after a subcommand name
  for (auto* sc : app.get_subcommands({})) sc->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(file, as_json);
    if (normalize->parsed()) return cmd_normalize(file, ctx_s, term_s, as_json);
    if (tcp->parsed()) return cmd_typecheck_proof(file, ctx_s, proof_s, as_json);
    if (equiv->parsed())
      return cmd_equiv(file, ctx_s, proof_s, proof2_s, oracle_budget, as_json);
    if (rewrite->parsed())
      return cmd_rewrite(file, ctx_s, term_s, strategy, fuel, as_json);
    if (flatten->parsed()) return cmd_flatten(file, ctx_s, proof_s, as_json);
    if (laws->parsed()) return cmd_laws(file, samples, seed, as_json);
  } catch (const Error& e) {
    std::cerr << red(std::string(errc_name(e.code)) + ": " + e.what()) << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << red(std::string("error: ") + e.what()) << "\n";
    return 2;
  }
  return 0;
}
