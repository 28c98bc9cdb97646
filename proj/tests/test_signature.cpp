#include <catch2/catch_amalgamated.hpp>

#include "perm2/parse.hpp"
#include "perm2/sigops.hpp"

using namespace perm2;

TEST_CASE("lambda-calculus signature is valid and an HRS") {
  Signature2 sig = make_lambda_signature();
  CHECK(validate_signature(sig).ok());
  HrsResult h = is_hrs(sig);
  CHECK(h.ok);
  CHECK(h.violations.empty());
}

TEST_CASE("parallelism violations are reported") {
  Signature2 sig = make_lambda_signature();
  TypePtr T = Type::mk_sort(0);
  Context ctx;
  ctx.vars.emplace_back("x", T);
  // lhs : t, rhs : t*t
  RewriteRule bad{"bad", ctx, Term::var(0), Term::pair(Term::var(0), Term::var(0)),
                  T};
  sig.add_rule(bad);
  ValidationReport rep = validate_signature(sig);
  REQUIRE_FALSE(rep.ok());
  bool found = false;
  for (auto& v : rep.violations)
    if (v.kind == "ParallelismViolation") found = true;
  CHECK(found);
}

TEST_CASE("unknown sorts are reported") {
  Signature2 sig;
  sig.base.add_sort("t");
  TypePtr bogus = Type::mk_sort(7);
  sig.base.add_op("c", Sequent{{bogus}, Type::mk_sort(0)});
  ValidationReport rep = validate_signature(sig);
  REQUIRE_FALSE(rep.ok());
  CHECK(rep.violations[0].kind == "UnknownSort");
}

TEST_CASE("HRS violations: variable lhs and non-sort result") {
  Signature2 sig = make_lambda_signature();
  TypePtr T = Type::mk_sort(0);
  TypePtr TT = Type::mk_exp(T, T);
  {
    Context ctx;
    ctx.vars.emplace_back("x", T);
    sig.add_rule({"varlhs", ctx, Term::var(0), Term::var(0), T});
  }
  {
    Context ctx;
    ctx.vars.emplace_back("f", TT);
    TermPtr eta = beta_eta_normalize(sig, ctx, Term::var(0), TT);
    sig.add_rule({"exp", ctx, eta, eta, TT});
  }
  HrsResult h = is_hrs(sig);
  CHECK_FALSE(h.ok);
  bool var_lhs = false, not_sort = false;
  for (auto& v : h.violations) {
    if (v.kind == "LhsIsVariable") var_lhs = true;
    if (v.kind == "ResultNotASort") not_sort = true;
  }
  CHECK(var_lhs);
  CHECK(not_sort);
}

TEST_CASE("HRS violation: unused context variable") {
  Signature2 sig = make_lambda_signature();
  TypePtr T = Type::mk_sort(0);
  Context ctx;
  ctx.vars.emplace_back("x", T);
  ctx.vars.emplace_back("y", T);
  // lhs mentions x only
  sig.add_rule({"drop", ctx, Term::cst(0, {Term::var(1), Term::var(1)}),
                Term::var(1), T});
  HrsResult h = is_hrs(sig);
  CHECK_FALSE(h.ok);
  bool unused = false;
  for (auto& v : h.violations)
    if (v.kind == "ContextVariableUnused") unused = true;
  CHECK(unused);
}

TEST_CASE("identity morphism commutes") {
  Signature2 sig = make_lambda_signature();
  auto id = [](int i) { return i; };
  ValidationReport rep = apply_morphism(id, id, id, sig, sig);
  CHECK(rep.ok());
}

TEST_CASE("morphism with wrong op image fails the sequent square") {
  Signature2 sig = make_lambda_signature();
  auto id = [](int i) { return i; };
  // send a (arity 2) to l (arity 1)
  auto swap = [](int i) { return i == 0 ? 1 : 0; };
  ValidationReport rep = apply_morphism(id, swap, id, sig, sig);
  REQUIRE_FALSE(rep.ok());
  CHECK(rep.violations[0].kind == "SequentSquare");
}

TEST_CASE("relabelling into an isomorphic copy commutes") {
  Signature2 x = make_lambda_signature();
  // an isomorphic copy with renamed sort and operations
  std::string text =
      "sort s\n"
      "op app2 : (s, s) -> s\n"
      "op lam1 : (s ^ s) -> s\n"
      "rule b : [x:s ^ s, y:s] app2(lam1(x), y) => x y : s\n";
  Signature2 y = parse_signature(text);
  REQUIRE(validate_signature(y).ok());
  auto id = [](int i) { return i; };
  ValidationReport rep = apply_morphism(id, id, id, x, y);
  CHECK(rep.ok());
}

TEST_CASE("ccs fixture validates and diverges by design") {
  Signature2 ccs = make_ccs_signature();
  CHECK(validate_signature(ccs).ok());
  CHECK(is_hrs(ccs).ok);
}
