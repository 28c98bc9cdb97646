// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Run from the repository root (fixtures are loaded by relative
// path), as ctest does.
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <vector>

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
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int n, const std::string& what, bool ok, Clock::time_point t0,
            const std::string& detail = "") {
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0)
                .count();
  std::cout << "CRITERION " << n << " " << (ok ? "PASS" : "FAIL") << " - " << what
            << " (" << ms << " ms)";
  if (!detail.empty()) std::cout << " [" << detail << "]";
  std::cout << "\n";
  if (!ok) ++failures;
}

Signature2 load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_signature(ss.str());
}

bool check_judgment(const Signature2& sig, const ReductionJudgment& j) {
  try {
    Triple t = typecheck_reduction(j.ctx, j.proof, sig);
    return alpha_equal(t.source, j.source) && alpha_equal(t.target, j.target) &&
           type_equal(t.type, j.type);
  } catch (const Error&) {
    return false;
  }
}

// --------------------------------------------------------------------------
// 1. Fig.-1 typing: generated derivations typecheck; premise mutations are
// rejected.
// --------------------------------------------------------------------------
// Mutate the first vertical composition found anywhere in the proof: its
// explicit middle is replaced by a different term of the same type.
RedPtr mutate_middle(const Signature2& sig, const Context& ctx, const RedPtr& p,
                     bool& done) {
  if (done) return p;
  if (p->kind == Reduction::Kind::VComp) {
    try {
      TypePtr ty = typecheck_reduction(ctx, p->a, sig).type;
      for (auto& cand : enumerate_terms(sig, ctx, ty, 5)) {
        if (!alpha_equal(cand, p->mid)) {
          auto m = std::make_shared<Reduction>(*p);
          m->mid = cand;
          done = true;
          return m;
        }
      }
    } catch (const Error&) {
    }
  }
  auto m = std::make_shared<Reduction>(*p);
  bool changed = false;
  Context child_ctx = ctx;
  if (p->kind == Reduction::Kind::LambdaCong)
    child_ctx = ctx.extended(fresh_name(ctx, p->hint), p->binder);
  if (p->a) {
    m->a = mutate_middle(sig, child_ctx, p->a, done);
    changed = done;
  }
  if (!done && p->b) {
    m->b = mutate_middle(sig, ctx, p->b, done);
    changed = done;
  }
  if (!done)
    for (size_t i = 0; i < p->args.size(); ++i) {
      m->args[i] = mutate_middle(sig, ctx, p->args[i], done);
      if (done) {
        changed = true;
        break;
      }
    }
  return changed ? RedPtr(m) : p;
}

// Swap two rule-application arguments of different types somewhere in the
// proof (an arity/type premise violation).
RedPtr mutate_rule_args(const Signature2& sig, const RedPtr& p, bool& done) {
  if (done) return p;
  if (p->kind == Reduction::Kind::RuleApp && p->args.size() >= 2) {
    const RewriteRule& r = sig.rule(p->rule);
    for (size_t i = 0; i + 1 < r.ctx.size(); ++i)
      if (!type_equal(r.ctx.vars[i].second, r.ctx.vars[i + 1].second)) {
        auto m = std::make_shared<Reduction>(*p);
        std::swap(m->args[i], m->args[i + 1]);
        done = true;
        return m;
      }
  }
  auto m = std::make_shared<Reduction>(*p);
  bool changed = false;
  if (p->a) {
    m->a = mutate_rule_args(sig, p->a, done);
    changed = done;
  }
  if (!done && p->b) {
    m->b = mutate_rule_args(sig, p->b, done);
    changed = done;
  }
  if (!done)
    for (size_t i = 0; i < p->args.size(); ++i) {
      m->args[i] = mutate_rule_args(sig, p->args[i], done);
      if (done) {
        changed = true;
        break;
      }
    }
  return changed ? RedPtr(m) : p;
}

void criterion1(const Signature2& sig) {
  auto t0 = Clock::now();
  Rng rng(101);
  Context ctx = laws_detail::sampling_context(sig);
  int accepted = 0, nontrivial = 0, mutations = 0, bad = 0;
  int guard = 500 * 400;
  while (accepted < 500 && guard-- > 0) {
    ReductionJudgment j;
    try {
      j = gen_judgment(rng, sig, ctx, 1, 6, 5);
    } catch (const Error&) {
      continue;
    }
    if (reduction_size(j.proof) > 8) continue;
    // keep the corpus dominated by derivations with real rule steps
    bool trivial = !has_rule_app(j.proof);
    if (trivial && nontrivial < (accepted * 2) / 3) continue;
    if (!check_judgment(sig, j)) {
      ++bad;
      continue;
    }
    ++accepted;
    if (!trivial) ++nontrivial;
    // mutation: swap the claimed source and target when they differ
    if (!alpha_equal(j.source, j.target)) {
      ReductionJudgment m = j;
      std::swap(m.source, m.target);
      ++mutations;
      if (check_judgment(sig, m)) ++bad;
    }
    // mutation: claim a different type
    {
      ReductionJudgment m = j;
      m.type = Type::mk_product(j.type, j.type);
      ++mutations;
      if (check_judgment(sig, m)) ++bad;
    }
    // mutation: perturb an explicit middle term
    {
      bool done = false;
      RedPtr m = mutate_middle(sig, j.ctx, j.proof, done);
      if (done) {
        ++mutations;
        try {
          typecheck_reduction(j.ctx, m, sig);
          ++bad;
        } catch (const Error&) {
        }
      }
    }
    // mutation: swap differently-typed rule arguments
    {
      bool done = false;
      RedPtr m = mutate_rule_args(sig, j.proof, done);
      if (done) {
        ++mutations;
        try {
          typecheck_reduction(j.ctx, m, sig);
          ++bad;
        } catch (const Error&) {
        }
      }
    }
  }
  report(1, "Fig.-1 typing on generated derivations with premise mutations",
         accepted >= 500 && mutations >= 500 && bad == 0, t0,
         std::to_string(accepted) + " derivations, " + std::to_string(mutations) +
             " mutations rejected");
}

// --------------------------------------------------------------------------
// 2. Crucial proposition.
// --------------------------------------------------------------------------
void criterion2(const Signature2& sig) {
  auto t0 = Clock::now();
  LawReport rep = crucial_proposition_suite(sig, 200, 202);
  report(2, "crucial proposition P[Q] == (M[Q] ; P[N'])",
         rep.ok() && rep.checked >= 200, t0,
         std::to_string(rep.checked) + " pairs");
}

// --------------------------------------------------------------------------
// 3. Exhaustive oracle agreement up to size 5.
// --------------------------------------------------------------------------
void criterion3(const Signature2& sig) {
  auto t0 = Clock::now();
  TypePtr T = Type::mk_sort(sig.base.sort_id("t"));
  Context ctx;
  ctx.vars.emplace_back("x", Type::mk_exp(T, T));
  ctx.vars.emplace_back("y", T);
  auto proofs = enumerate_reductions(sig, ctx, 5);
  std::map<std::string, std::vector<size_t>> groups;
  for (size_t i = 0; i < proofs.size(); ++i) {
    std::ostringstream os;
    os << term_key(proofs[i].triple.source) << "->"
       << term_key(proofs[i].triple.target) << ":";
    type_key_rec(os, proofs[i].triple.type);
    groups[os.str()].push_back(i);
  }
  size_t pairs = 0, disagreements = 0;
  for (auto& [k, g] : groups) {
    if (g.size() < 2) continue;
    std::vector<ReductionJudgment> js;
    std::vector<CanonicalForm> cfs;
    for (size_t i : g) {
      js.push_back(make_judgment(sig, ctx, proofs[i].proof));
      cfs.push_back(canonicalize(sig, js.back()));
    }
    for (size_t a = 0; a < g.size(); ++a)
      for (size_t b = a + 1; b < g.size(); ++b) {
        ++pairs;
        bool pv = canonical_equal(cfs[a], cfs[b]);
        OracleResult ov = oracle_equiv(sig, js[a], js[b], 10000);
        if (pv != (ov.verdict == OracleVerdict::Yes)) ++disagreements;
      }
  }
  report(3, "oracle agreement on the exhaustive size-5 corpus",
         disagreements == 0 && pairs > 1000, t0,
         std::to_string(proofs.size()) + " proofs, " + std::to_string(pairs) +
             " pairs, " + std::to_string(disagreements) + " disagreements");
}

// --------------------------------------------------------------------------
// 4. Monad laws.
// --------------------------------------------------------------------------
void criterion4(const Signature2& sig) {
  auto t0 = Clock::now();
  LawReport rep = monad_law_suite(sig, 100, 404);
  report(4, "monad associativity and unit laws", rep.ok() && rep.checked >= 100,
         t0, std::to_string(rep.checked) + " instances");
}

// --------------------------------------------------------------------------
// 5. Interchange and middle-four agreement.
// --------------------------------------------------------------------------
void criterion5(const Signature2& sig) {
  auto t0 = Clock::now();
  LawReport rep = interchange_suite(sig, 200, 505);
  LawReport wf = whisker_functoriality_suite(sig, 100, 506);
  report(5, "interchange law and middle-four agreement",
         rep.ok() && rep.checked >= 200 && wf.ok(), t0,
         std::to_string(rep.checked) + "+" + std::to_string(wf.checked) +
             " quadruples");
}

// --------------------------------------------------------------------------
// 6. Product isomorphism and terminal object.
// --------------------------------------------------------------------------
void criterion6(const Signature2& sig) {
  auto t0 = Clock::now();
  LawReport rep = product_iso_suite(sig, 100, 606);
  report(6, "product isomorphism (u, v) and unit-typed collapse",
         rep.ok() && rep.checked >= 100, t0,
         std::to_string(rep.checked) + " cells");
}

// --------------------------------------------------------------------------
// 7. Soundness/completeness round trip with standard rewriting.
// --------------------------------------------------------------------------
void criterion7(const Signature2& sig) {
  auto t0 = Clock::now();
  TypePtr T = Type::mk_sort(sig.base.sort_id("t"));
  TypePtr TT = Type::mk_exp(T, T);
  Context ctx;
  ctx.vars.emplace_back("f", TT);
  ctx.vars.emplace_back("u", T);
  size_t terms = 0, steps = 0, bad = 0;
  for (const TypePtr& ty : {T, TT, Type::mk_product(T, T)}) {
    for (auto& m : enumerate_terms(sig, ctx, ty, 7)) {
      ++terms;
      for (auto& s : rewrite_once(sig, ctx, m)) {
        ++steps;
        RedPtr p = embed_step(sig, ctx, s);
        Trace tr = flatten_proof(sig, make_judgment(sig, ctx, p));
        bool ok = tr.steps.size() == 1 && tr.steps[0].rule == s.rule &&
                  tr.steps[0].position == s.position &&
                  alpha_equal(tr.steps[0].before, s.before) &&
                  alpha_equal(tr.steps[0].after, s.after);
        if (!ok) ++bad;
      }
    }
  }
  // soundness: generated proofs flatten to rewrite-valid traces
  Rng rng(707);
  int proofs_done = 0, guard = 300 * 200;
  while (proofs_done < 300 && guard-- > 0) {
    ReductionJudgment j;
    try {
      j = gen_judgment(rng, sig, ctx, 1, 6, 5);
    } catch (const Error&) {
      continue;
    }
    if (reduction_size(j.proof) > 8) continue;
    Trace tr = flatten_proof(sig, j);
    TermPtr cur = tr.start;
    for (auto& s : tr.steps) {
      bool found = false;
      for (auto& cand : rewrite_once(sig, ctx, cur))
        if (cand.rule == s.rule && cand.position == s.position &&
            alpha_equal(cand.after, s.after))
          found = true;
      if (!found) ++bad;
      cur = s.after;
    }
    if (!alpha_equal(cur, j.target)) ++bad;
    ++proofs_done;
  }
  report(7, "rewrite/proof round trip (embed+flatten, flatten validity)",
         bad == 0 && terms > 200 && proofs_done >= 300, t0,
         std::to_string(terms) + " terms, " + std::to_string(steps) +
             " steps, " + std::to_string(proofs_done) + " proofs");
}

// --------------------------------------------------------------------------
// 8. Normalizer properties and golden normal forms.
// --------------------------------------------------------------------------
void criterion8(const Signature2& sig) {
  auto t0 = Clock::now();
  TypePtr T = Type::mk_sort(sig.base.sort_id("t"));
  TypePtr TT = Type::mk_exp(T, T);
  Context ctx;
  ctx.vars.emplace_back("f", TT);
  ctx.vars.emplace_back("u", T);
  Rng rng(808);
  int done = 0, bad = 0, guard = 1000 * 50;
  while (done < 1000 && guard-- > 0) {
    try {
      TypePtr ty = gen_type(rng, sig.base, 2);
      TermPtr m = gen_term(rng, sig, ctx, ty, 7);
      TermPtr n1 = beta_eta_normalize(sig, ctx, m, ty);
      if (!alpha_equal(n1, beta_eta_normalize(sig, ctx, n1, ty))) ++bad;
      // substitution lemma against a random context image
      Context delta;
      delta.vars.emplace_back("w", T);
      TermPtr host = gen_term(rng, sig, delta, ty, 5);
      TermPtr img = gen_term(rng, sig, ctx, T, 5);
      TermPtr a = beta_eta_normalize(sig, ctx, subst_term(host, {img}), ty);
      TermPtr hostn = beta_eta_normalize(sig, delta, host, ty);
      TermPtr imgn = beta_eta_normalize(sig, ctx, img, T);
      TermPtr b = beta_eta_normalize(sig, ctx, subst_term(hostn, {imgn}), ty);
      if (!alpha_equal(a, b)) ++bad;
      ++done;
    } catch (const Error&) {
    }
  }
  // goldens
  Context cx;
  cx.vars.emplace_back("x", T);
  bool g1 = alpha_equal(
      beta_eta_normalize(sig, cx,
                         Term::app(Term::lam(T, Term::var(0), "y"), Term::var(0)),
                         T),
      Term::var(0));
  bool g2 = alpha_equal(
      beta_eta_normalize(sig, cx,
                         Term::proj1(Term::pair(Term::var(0), Term::unit())), T),
      Term::var(0));
  bool g3 = beta_eta_normalize(sig, cx,
                               Term::proj2(Term::pair(Term::var(0), Term::unit())),
                               Type::mk_unit())
                ->kind == Term::Kind::Unit;
  report(8, "normalizer idempotence, substitution lemma and goldens",
         bad == 0 && done >= 1000 && g1 && g2 && g3, t0,
         std::to_string(done) + " terms");
}

// --------------------------------------------------------------------------
// 9. CCS divergence.
// --------------------------------------------------------------------------
void criterion9() {
  auto t0 = Clock::now();
  bool ok = false;
  std::string detail;
  try {
    Signature2 ccs = load("fixtures/ccs.hrs");
    Context empty;
    TermPtr aa = parse_term("par(act(), act())", ccs.base, empty);
    RewriteResult res =
        normalize_by_rules(ccs, empty, aa, Strategy::LeftmostOutermost, 50);
    ok = !res.terminated && res.trace.steps.size() == 50;
    detail = std::to_string(res.trace.steps.size()) + " steps, fuel exhausted";
  } catch (const Error& e) {
    detail = e.what();
  }
  report(9, "CCS fixture diverges within fuel 50", ok, t0, detail);
}

// --------------------------------------------------------------------------
// 10. CLI round trip: parse . print identity on fixtures and generated data.
// --------------------------------------------------------------------------
void criterion10(const Signature2& sig) {
  auto t0 = Clock::now();
  int bad = 0, count = 0;
  // fixtures
  for (const char* f : {"fixtures/lambda.hrs", "fixtures/ccs.hrs"}) {
    Signature2 s = load(f);
    std::string printed = print_signature(s);
    if (print_signature(parse_signature(printed)) != printed) ++bad;
    ++count;
  }
  // generated signatures
  Rng rng(1010);
  for (int i = 0; i < 100; ++i) {
    Signature2 s;
    int nsorts = 1 + rng.pick(3);
    for (int k = 0; k < nsorts; ++k) s.base.add_sort("s" + std::to_string(k));
    int nops = 1 + rng.pick(4);
    for (int k = 0; k < nops; ++k) {
      Sequent sq;
      int ar = rng.pick(3);
      for (int j = 0; j < ar; ++j) sq.premises.push_back(gen_type(rng, s.base, 2));
      sq.conclusion = gen_type(rng, s.base, 2);
      s.base.add_op("c" + std::to_string(k), sq);
    }
    std::string printed = print_signature(s);
    if (print_signature(parse_signature(printed)) != printed) ++bad;
    ++count;
  }
  // generated terms and proofs over the lambda fixture
  TypePtr T = Type::mk_sort(sig.base.sort_id("t"));
  Context ctx;
  ctx.vars.emplace_back("f", Type::mk_exp(T, T));
  ctx.vars.emplace_back("u", T);
  int made = 0, guard = 100 * 60;
  while (made < 100 && guard-- > 0) {
    try {
      TypePtr ty = gen_type(rng, sig.base, 2);
      TermPtr m = gen_term(rng, sig, ctx, ty, 7);
      if (!alpha_equal(parse_term(print_term(m, sig.base, ctx), sig.base, ctx), m))
        ++bad;
      RedPtr p = gen_proof_from(rng, sig, ctx, m, 4);
      if (!red_equal(parse_reduction(print_reduction(p, sig, ctx), sig, ctx), p))
        ++bad;
      ++made;
      ++count;
    } catch (const Error&) {
    }
  }
  report(10, "parse/print round trip on fixtures and generated data",
         bad == 0 && made >= 100, t0, std::to_string(count) + " artifacts");
}

}  // namespace

int main() {
  try {
    Signature2 sig = load("fixtures/lambda.hrs");
    {
      ValidationReport rep = validate_signature(sig);
      HrsResult h = is_hrs(sig);
      if (!rep.ok() || !h.ok) {
        std::cout << "CRITERION 0 FAIL - lambda fixture invalid\n";
        return 1;
      }
    }
    criterion1(sig);
    criterion2(sig);
    criterion3(sig);
    criterion4(sig);
    criterion5(sig);
    criterion6(sig);
    criterion7(sig);
    criterion8(sig);
    criterion9();
    criterion10(sig);
  } catch (const std::exception& e) {
    std::cout << "acceptance harness error: " << e.what() << "\n";
    return 1;
  }
  std::cout << (failures == 0 ? "ALL CRITERIA PASS" : "FAILURES: ")
            << (failures == 0 ? "" : std::to_string(failures)) << "\n";
  return failures == 0 ? 0 : 1;
}
