#include <catch2/catch_amalgamated.hpp>

#include "perm2/generate.hpp"
#include "perm2/parse.hpp"
#include "perm2/sigops.hpp"

using namespace perm2;

namespace {
Signature2 sig = make_lambda_signature();
const TypePtr T = Type::mk_sort(0);
const TypePtr TT = Type::mk_exp(T, T);
}  // namespace

TEST_CASE("type parsing and printing round trip") {
  for (auto s : {"t", "1", "t * t", "t ^ t", "(t * t) ^ t", "t * t ^ t",
                 "t * (t ^ t)", "(t ^ t) ^ (t * 1)"}) {
    TypePtr ty = parse_type(s, sig.base);
    TypePtr again = parse_type(print_type(ty, sig.base), sig.base);
    INFO(s);
    CHECK(type_equal(ty, again));
  }
  // B ^ A has domain A
  TypePtr e = parse_type("t ^ (t * t)", sig.base);
  REQUIRE(e->kind == Type::Kind::Exponential);
  CHECK(e->domain()->kind == Type::Kind::Product);
}

TEST_CASE("term parsing: constants vs applied variables") {
  Context ctx;
  ctx.vars.emplace_back("x", TT);
  ctx.vars.emplace_back("y", T);
  TermPtr c = parse_term("a(l(\\z:t. z), y)", sig.base, ctx);
  CHECK(c->kind == Term::Kind::Const);
  TermPtr v = parse_term("x(y)", sig.base, ctx);
  CHECK(v->kind == Term::Kind::App);
  TermPtr v2 = parse_term("x y", sig.base, ctx);
  CHECK(alpha_equal(v, v2));
  CHECK(parse_term("()", sig.base, ctx)->kind == Term::Kind::Unit);
  CHECK(parse_term("(y, y)", sig.base, ctx)->kind == Term::Kind::Pair);
  CHECK(parse_term("fst (y, y)", sig.base, ctx)->kind == Term::Kind::Proj1);
}

TEST_CASE("term print/parse preserves alpha class") {
  Context ctx;
  ctx.vars.emplace_back("x", TT);
  ctx.vars.emplace_back("y", T);
  for (auto s : {"\\z:t. x z", "a(x y, y)", "\\z:t. \\w:t. a(z, w)",
                 "(fst (y, ()), snd (y, ()))", "l(\\z:t. x (x z))"}) {
    TermPtr m = parse_term(s, sig.base, ctx);
    TermPtr again = parse_term(print_term(m, sig.base, ctx), sig.base, ctx);
    INFO(s);
    CHECK(alpha_equal(m, again));
  }
}

TEST_CASE("proof parsing: rules, composition, bare terms") {
  Context ctx;
  ctx.vars.emplace_back("y", T);
  RedPtr p = parse_reduction("beta<\\z:t. z, y>", sig, ctx);
  CHECK(p->kind == Reduction::Kind::RuleApp);
  RedPtr q = parse_reduction("beta<\\z:t. z, y> ; y", sig, ctx);
  REQUIRE(q->kind == Reduction::Kind::VComp);
  CHECK(alpha_equal(q->mid, Term::var(0)));
  // bare term is the identity reduction
  RedPtr idp = parse_reduction("a(y, y)", sig, ctx);
  CHECK(is_identity_reduction(idp));
}

TEST_CASE("proof print/parse round trip") {
  Context ctx;
  ctx.vars.emplace_back("y", T);
  for (auto s :
       {"beta<\\z:t. z, y>", "beta<\\z:t. z, y> ; y",
        "a(beta<\\z:t. z, y>, y)", "\\w:t. beta<\\z:t. z, w>",
        "(beta<\\z:t. z, y>, y)", "fst (beta<\\z:t. z, y>, y)"}) {
    RedPtr p = parse_reduction(s, sig, ctx);
    RedPtr again = parse_reduction(print_reduction(p, sig, ctx), sig, ctx);
    INFO(s);
    CHECK(red_equal(p, again));
  }
}

TEST_CASE("signature file parse/print round trip") {
  std::string text =
      "# the lambda calculus\n"
      "sort t\n"
      "op a : (t, t) -> t\n"
      "op l : (t ^ t) -> t\n"
      "rule beta : [x:t ^ t, y:t] a(l(x), y) => x y : t\n";
  Signature2 s1 = parse_signature(text);
  CHECK(validate_signature(s1).ok());
  std::string printed = print_signature(s1);
  Signature2 s2 = parse_signature(printed);
  CHECK(validate_signature(s2).ok());
  CHECK(print_signature(s2) == printed);
  auto id = [](int i) { return i; };
  CHECK(apply_morphism(id, id, id, s1, s2).ok());
  CHECK(apply_morphism(id, id, id, s1, make_lambda_signature()).ok());
}

TEST_CASE("signature files demand sorts before use") {
  CHECK_THROWS(parse_signature("op c : (u) -> u\nsort u\n"));
  CHECK_NOTHROW(parse_signature("sort u\nop c : (u) -> u\n"));
  // rules may precede the ops they use
  std::string rule_first =
      "sort t\n"
      "rule r : [x:t] c(x) => x : t\n"
      "op c : (t) -> t\n";
  Signature2 s = parse_signature(rule_first);
  CHECK(validate_signature(s).ok());
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_signature("sort t\nop broken\n"), Error);
  Context ctx;
  CHECK_THROWS_AS(parse_term("a(", sig.base, ctx), Error);
  CHECK_THROWS_AS(parse_term("unknown", sig.base, ctx), Error);
}

TEST_CASE("generated signatures round trip through print/parse") {
  Rng rng(2024);
  for (int i = 0; i < 25; ++i) {
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
    Signature2 back = parse_signature(printed);
    CHECK(print_signature(back) == printed);
  }
}
