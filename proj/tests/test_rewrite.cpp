#include <catch2/catch_amalgamated.hpp>

#include "perm2/generate.hpp"
#include "perm2/parse.hpp"
#include "perm2/permeq.hpp"
#include "perm2/rewrite.hpp"
#include "perm2/sigops.hpp"

using namespace perm2;

namespace {
Signature2 sig = make_lambda_signature();
const TypePtr T = Type::mk_sort(0);
const TypePtr TT = Type::mk_exp(T, T);
}  // namespace

TEST_CASE("match_rule: beta lhs against spec examples") {
  Context ctx;
  ctx.vars.emplace_back("x", T);
  const RewriteRule& beta = sig.rule(0);
  TermPtr subj = beta_eta_normalize(
      sig, ctx, parse_term("a(l(\\y:t. y), x)", sig.base, ctx), T);
  auto ms = match_rule(sig, beta, subj, ctx);
  REQUIRE(ms.size() == 1);
  CHECK(alpha_equal(ms[0][0], Term::lam(T, Term::var(0), "y")));
  CHECK(alpha_equal(ms[0][1], Term::var(0)));

  // a variable does not match
  CHECK(match_rule(sig, beta, Term::var(0), ctx).empty());
  // head l absent
  TermPtr other = beta_eta_normalize(
      sig, ctx, parse_term("a(x, x)", sig.base, ctx), T);
  CHECK(match_rule(sig, beta, other, ctx).empty());
}

TEST_CASE("rewrite_once finds redexes in deterministic order") {
  Context ctx;
  ctx.vars.emplace_back("x", T);
  TermPtr m = parse_term("a(l(\\y:t. y), x)", sig.base, ctx);
  auto steps = rewrite_once(sig, ctx, m);
  REQUIRE(steps.size() == 1);
  CHECK(alpha_equal(steps[0].after, Term::var(0)));
  CHECK(steps[0].position.empty());

  CHECK(rewrite_once(sig, ctx, Term::var(0)).empty());

  TermPtr two = parse_term("a(a(l(\\y:t. y), x), a(l(\\y:t. y), x))",
                           sig.base, ctx);
  auto steps2 = rewrite_once(sig, ctx, two);
  REQUIRE(steps2.size() == 2);
  CHECK(path_less(steps2[0].position, steps2[1].position));
}

TEST_CASE("matching under binders finds deep redexes") {
  Context ctx;
  ctx.vars.emplace_back("x", T);
  TermPtr m = parse_term("l(\\z:t. a(l(\\y:t. y), z))", sig.base, ctx);
  auto steps = rewrite_once(sig, ctx, m);
  REQUIRE(steps.size() == 1);
  CHECK(steps[0].position == Path{0, 0});
}

TEST_CASE("embed_step reproduces a single-step trace") {
  Context ctx;
  ctx.vars.emplace_back("x", T);
  TermPtr m = parse_term("a(x, a(l(\\y:t. y), x))", sig.base, ctx);
  auto steps = rewrite_once(sig, ctx, m);
  REQUIRE(steps.size() == 1);
  RedPtr p = embed_step(sig, ctx, steps[0]);
  Triple t = typecheck_reduction(ctx, p, sig);
  CHECK(alpha_equal(t.source, steps[0].before));
  CHECK(alpha_equal(t.target, steps[0].after));
  Trace tr = flatten_proof(sig, make_judgment(sig, ctx, p));
  REQUIRE(tr.steps.size() == 1);
  CHECK(tr.steps[0].position == steps[0].position);
  CHECK(tr.steps[0].rule == steps[0].rule);

  // stale before-term
  RewriteStep stale = steps[0];
  stale.before = Term::var(0);
  CHECK_THROWS_MATCHES(embed_step(sig, ctx, stale), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code == Errc::InvalidStep;
                       }));
}

TEST_CASE("normalize_by_rules: termination and fuel") {
  Context ctx;
  ctx.vars.emplace_back("x", T);
  TermPtr m = parse_term("a(l(\\y:t. y), x)", sig.base, ctx);
  auto res = normalize_by_rules(sig, ctx, m, Strategy::LeftmostOutermost, 10);
  CHECK(res.terminated);
  REQUIRE(res.trace.steps.size() == 1);
  CHECK(alpha_equal(res.trace.steps.back().after, Term::var(0)));

  // normal term, zero fuel
  auto res0 = normalize_by_rules(sig, ctx, Term::var(0),
                                 Strategy::LeftmostOutermost, 0);
  CHECK(res0.terminated);
  CHECK(res0.trace.steps.empty());

  // CCS divergence: a | a loops by commutativity
  Signature2 ccs = make_ccs_signature();
  Context empty;
  TermPtr aa = parse_term("par(act(), act())", ccs.base, empty);
  auto div = normalize_by_rules(ccs, empty, aa, Strategy::LeftmostOutermost, 5);
  CHECK_FALSE(div.terminated);
  auto div2 = normalize_by_rules(ccs, empty, aa, Strategy::ParallelOutermost, 5);
  CHECK_FALSE(div2.terminated);
}

TEST_CASE("parallel-outermost fires disjoint redexes in one round") {
  Context ctx;
  ctx.vars.emplace_back("x", T);
  TermPtr two = parse_term("a(a(l(\\y:t. y), x), a(l(\\y:t. y), x))",
                           sig.base, ctx);
  auto res = normalize_by_rules(sig, ctx, two, Strategy::ParallelOutermost, 1);
  CHECK(res.terminated);
  CHECK(res.trace.steps.size() == 2);
}

TEST_CASE("non-pattern rules are rejected by the rewrite engine") {
  Signature2 s = make_lambda_signature();
  // lhs applies a rule variable to a non-variable: x (a(y, y))
  Context ctx;
  ctx.vars.emplace_back("x", TT);
  ctx.vars.emplace_back("y", T);
  TermPtr lhs = Term::app(Term::var(1), Term::cst(0, {Term::var(0), Term::var(0)}));
  TermPtr rhs = Term::var(0);
  s.add_rule({"nonpat", ctx,
              beta_eta_normalize(s, ctx, lhs, T),
              beta_eta_normalize(s, ctx, rhs, T), T});
  REQUIRE(validate_signature(s).ok());
  CHECK_FALSE(is_pattern_lhs(s.rule(1)));
  CHECK_THROWS_MATCHES(rewrite_once(s, ctx, Term::var(0)), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code == Errc::NonPatternLhs;
                       }));
}

TEST_CASE("local fullness: reachability yields a composite proof term") {
  Context ctx;
  ctx.vars.emplace_back("x", T);
  // two steps apart: a(l(\y.y), a(l(\y.y), x)) ->* x by inner then root
  TermPtr m = parse_term("a(l(\\y:t. y), a(l(\\y:t. y), x))", sig.base, ctx);
  TermPtr goal = Term::var(0);
  // greedy path search composing embed_step proofs
  TermPtr cur = beta_eta_normalize(sig, ctx, m, T);
  RedPtr proof;
  TermPtr proof_tgt;
  int fuel = 10;
  while (!alpha_equal(cur, goal) && fuel-- > 0) {
    auto steps = rewrite_once(sig, ctx, cur);
    REQUIRE_FALSE(steps.empty());
    RedPtr one = embed_step(sig, ctx, steps[0]);
    proof = proof ? Reduction::vcomp(proof, cur, one) : one;
    cur = steps[0].after;
    proof_tgt = cur;
  }
  REQUIRE(alpha_equal(cur, goal));
  Triple t = typecheck_reduction(ctx, proof, sig);
  CHECK(alpha_equal(t.source, beta_eta_normalize(sig, ctx, m, T)));
  CHECK(alpha_equal(t.target, goal));
}

TEST_CASE("has_cell: bounded reachability") {
  Context ctx;
  ctx.vars.emplace_back("x", T);
  TermPtr m = parse_term("a(l(\\y:t. y), x)", sig.base, ctx);
  CHECK(has_cell(sig, ctx, m, Term::var(0), 50));
  CHECK_FALSE(has_cell(sig, ctx, Term::var(0), m, 50));
}

TEST_CASE("trace serialization format") {
  Context ctx;
  ctx.vars.emplace_back("x", T);
  TermPtr m = parse_term("a(x, a(l(\\y:t. y), x))", sig.base, ctx);
  auto res = normalize_by_rules(sig, ctx, m, Strategy::LeftmostOutermost, 10);
  std::string line = print_trace(res.trace, sig, ctx);
  CHECK(line == "beta @ /1 : a(x, a(l(\\y:t. y), x)) => a(x, x)\n");
}
