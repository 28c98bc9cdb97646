#include <catch2/catch_amalgamated.hpp>

#include "perm2/generate.hpp"
#include "perm2/parse.hpp"
#include "perm2/reduction.hpp"
#include "perm2/sigops.hpp"

using namespace perm2;

namespace {
Signature2 sig = make_lambda_signature();
const TypePtr T = Type::mk_sort(0);
const TypePtr TT = Type::mk_exp(T, T);
}  // namespace

TEST_CASE("Fig.1 rule application typing") {
  Context ctx;
  ctx.vars.emplace_back("x", T);
  // beta<\y:t. y, x> : a(l(\y.y), x) -> x : t
  RedPtr idlam = identity_reduction(Term::lam(T, Term::var(0), "y"));
  RedPtr p = Reduction::rule_app(0, {idlam, Reduction::var(0)});
  Triple t = typecheck_reduction(ctx, p, sig);
  CHECK(type_equal(t.type, T));
  CHECK(alpha_equal(t.target, Term::var(0)));
  TermPtr expect_src = parse_term("a(l(\\y:t. y), x)", sig.base, ctx);
  CHECK(alpha_equal(t.source, beta_eta_normalize(sig, ctx, expect_src, T)));
}

TEST_CASE("variable reflexivity types as x -> x") {
  Context ctx;
  ctx.vars.emplace_back("x", T);
  Triple t = typecheck_reduction(ctx, Reduction::var(0), sig);
  CHECK(alpha_equal(t.source, Term::var(0)));
  CHECK(alpha_equal(t.target, Term::var(0)));
  CHECK(type_equal(t.type, T));
}

TEST_CASE("vertical composition demands a matching middle") {
  Context ctx;
  ctx.vars.emplace_back("x", T);
  RedPtr idlam = identity_reduction(Term::lam(T, Term::var(0), "y"));
  RedPtr beta = Reduction::rule_app(0, {idlam, Reduction::var(0)});
  // correct middle: x
  RedPtr good = Reduction::vcomp(beta, Term::var(0), Reduction::var(0));
  CHECK_NOTHROW(typecheck_reduction(ctx, good, sig));
  // wrong middle
  RedPtr bad = Reduction::vcomp(beta, Term::cst(1, {Term::lam(T, Term::var(0))}),
                                Reduction::var(0));
  CHECK_THROWS_MATCHES(typecheck_reduction(ctx, bad, sig), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code == Errc::MiddleMismatch;
                       }));
}

TEST_CASE("identity_reduction mirrors the term structure") {
  Context ctx;
  ctx.vars.emplace_back("x", T);
  TermPtr m = parse_term("a(l(\\y:t. y), x)", sig.base, ctx);
  RedPtr p = identity_reduction(m);
  REQUIRE(p->kind == Reduction::Kind::ConstCong);
  REQUIRE(p->args.size() == 2);
  CHECK(p->args[0]->kind == Reduction::Kind::ConstCong);
  CHECK(p->args[1]->kind == Reduction::Kind::VarRefl);
  Triple t = typecheck_reduction(ctx, p, sig);
  CHECK(alpha_equal(t.source, t.target));

  CHECK(identity_reduction(Term::unit())->kind == Reduction::Kind::UnitRefl);
}

TEST_CASE("identity_reduction typechecks to (m, m) for generated terms") {
  Context ctx;
  ctx.vars.emplace_back("f", TT);
  ctx.vars.emplace_back("x", T);
  std::vector<std::string> terms = {
      "f x",
      "a(x, f x)",
      "\\z:t. f z",
      "(x, f x)",
      "fst (x, f x)",
      "l(\\z:t. a(z, x))",
  };
  for (auto& s : terms) {
    TermPtr m = parse_term(s, sig.base, ctx);
    TypePtr ty = typecheck_term(ctx, m, sig);
    Triple t = typecheck_reduction(ctx, identity_reduction(m), sig);
    TermPtr nf = beta_eta_normalize(sig, ctx, m, ty);
    CHECK(alpha_equal(t.source, nf));
    CHECK(alpha_equal(t.target, nf));
  }
}

TEST_CASE("identity_reduction on all enumerated terms up to size 8") {
  Context ctx;
  ctx.vars.emplace_back("f", TT);
  ctx.vars.emplace_back("x", T);
  int checked = 0;
  for (const TypePtr& ty : {T, TT, Type::mk_product(T, Type::mk_unit())}) {
    for (auto& m : enumerate_terms(sig, ctx, ty, 8)) {
      Triple t = typecheck_reduction(ctx, identity_reduction(m), sig);
      // enumerated terms are already beta-eta-normal
      CHECK(alpha_equal(t.source, m));
      CHECK(alpha_equal(t.target, m));
      CHECK(type_equal(t.type, ty));
      ++checked;
    }
  }
  CHECK(checked > 300);
}

TEST_CASE("weaken preserves the triple and rejects duplicates") {
  Context ctx;
  ctx.vars.emplace_back("x", T);
  RedPtr idlam = identity_reduction(Term::lam(T, Term::var(0), "y"));
  RedPtr beta = Reduction::rule_app(0, {idlam, Reduction::var(0)});
  ReductionJudgment j = make_judgment(sig, ctx, beta);
  ReductionJudgment w = weaken(j, "z", T);
  CHECK(w.ctx.size() == 2);
  Triple t = typecheck_reduction(w.ctx, w.proof, sig);
  CHECK(alpha_equal(t.source, w.source));
  CHECK(alpha_equal(t.target, w.target));
  CHECK(alpha_equal(t.source, term_shift(j.source, 1)));
  CHECK_THROWS_MATCHES(weaken(j, "x", T), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code == Errc::DuplicateVariable;
                       }));
}

TEST_CASE("weaken commutes with typechecking on samples") {
  Context ctx;
  ctx.vars.emplace_back("x", T);
  std::vector<std::string> proofs = {"beta<\\y:t. y, x>", "x",
                                     "a(beta<\\y:t. y, x>, x)"};
  for (auto& s : proofs) {
    RedPtr p = parse_reduction(s, sig, ctx);
    ReductionJudgment j = make_judgment(sig, ctx, p);
    ReductionJudgment w = weaken(j, "w", TT);
    Triple t = typecheck_reduction(w.ctx, w.proof, sig);
    CHECK(alpha_equal(t.source, term_shift(j.source, 1)));
    CHECK(alpha_equal(t.target, term_shift(j.target, 1)));
    CHECK(type_equal(t.type, j.type));
  }
}

TEST_CASE("rule application arity and unknown rules are rejected") {
  Context ctx;
  ctx.vars.emplace_back("x", T);
  RedPtr bad = Reduction::rule_app(0, {Reduction::var(0)});
  CHECK_THROWS_MATCHES(typecheck_reduction(ctx, bad, sig), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code == Errc::ArityMismatch;
                       }));
  RedPtr unk = Reduction::rule_app(7, {});
  CHECK_THROWS_MATCHES(typecheck_reduction(ctx, unk, sig), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code == Errc::UnknownRule;
                       }));
}
