#include <catch2/catch_amalgamated.hpp>

#include "perm2/cells.hpp"
#include "perm2/generate.hpp"
#include "perm2/parse.hpp"
#include "perm2/sigops.hpp"

using namespace perm2;

namespace {
Signature2 sig = make_lambda_signature();
const TypePtr T = Type::mk_sort(0);
const TypePtr TT = Type::mk_exp(T, T);

Cell2 beta_cell() {
  // over [x : t^t * t], the beta rule applied to the projections
  return unit_component(sig, "beta").cell2;
}
}  // namespace

TEST_CASE("compose1: units and associativity") {
  Cell1 f = make_cell1(sig, T, T, parse_term("a(x, x)", sig.base, cell_context(T)));
  Cell1 idt = identity_cell1(sig, T);
  CHECK(cell1_equal(compose1(sig, idt, f), f));
  CHECK(cell1_equal(compose1(sig, f, idt), f));

  Cell1 g = make_cell1(sig, T, T, parse_term("l(\\z:t. x)", sig.base, cell_context(T)));
  Cell1 h = make_cell1(sig, T, T, parse_term("a(x, a(x, x))", sig.base, cell_context(T)));
  Cell1 left = compose1(sig, compose1(sig, f, g), h);
  Cell1 right = compose1(sig, f, compose1(sig, g, h));
  CHECK(cell1_equal(left, right));
}

TEST_CASE("vcompose: unit and associativity modulo permutation equivalence") {
  Cell2 b = beta_cell();
  Cell2 idsrc = identity_cell2(sig, b.src);
  Cell2 idtgt = identity_cell2(sig, b.tgt);
  CHECK(cell2_equal(sig, vcompose(sig, idsrc, b), b));
  CHECK(cell2_equal(sig, vcompose(sig, b, idtgt), b));
  Cell2 l = vcompose(sig, vcompose(sig, idsrc, b), idtgt);
  Cell2 r = vcompose(sig, idsrc, vcompose(sig, b, idtgt));
  CHECK(cell2_equal(sig, l, r));

  CHECK_THROWS_MATCHES(vcompose(sig, b, b), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code == Errc::MiddleMismatch;
                       }));
}

TEST_CASE("hcompose of identities is the identity of the composite") {
  Cell1 f = make_cell1(sig, T, T, parse_term("a(x, x)", sig.base, cell_context(T)));
  Cell1 g = make_cell1(sig, T, T, parse_term("l(\\z:t. a(z, x))", sig.base,
                                             cell_context(T)));
  Cell2 hid = hcompose(sig, identity_cell2(sig, f), identity_cell2(sig, g));
  Cell2 idc = identity_cell2(sig, compose1(sig, f, g));
  CHECK(cell2_equal(sig, hid, idc));
}

TEST_CASE("middle-four agreement: both whiskered composites equal hcompose") {
  Cell2 b = beta_cell();
  // a second cell to compose with: a beta step inside a context over t
  Context cx = cell_context(T);
  Cell2 c = make_cell2(sig, T, parse_reduction("a(x, beta<\\y:t. y, x>)", sig, cx));
  // boundaries: b : (t^t * t) -> t, c : t -> t
  Cell2 direct = hcompose(sig, b, c);
  Cell2 w1 = vcompose(sig, whisker_right_cell(sig, b.src, c),
                      whisker_left_cell(sig, b, c.tgt));
  Cell2 w2 = vcompose(sig, whisker_left_cell(sig, b, c.src),
                      whisker_right_cell(sig, b.tgt, c));
  CHECK(cell2_equal(sig, direct, w1));
  CHECK(cell2_equal(sig, direct, w2));
}

TEST_CASE("interchange on a concrete quadruple") {
  Cell2 b = beta_cell();
  Cell2 idb = identity_cell2(sig, b.tgt);
  Context cx = cell_context(T);
  Cell2 c = make_cell2(sig, T, parse_reduction("a(x, beta<\\y:t. y, x>)", sig, cx));
  Cell2 idc = identity_cell2(sig, c.tgt);
  // (c . idc) o (b . idb) == (c o b) . (idc o idb)
  Cell2 lhs = hcompose(sig, vcompose(sig, b, idb), vcompose(sig, c, idc));
  Cell2 rhs = vcompose(sig, hcompose(sig, b, c), hcompose(sig, idb, idc));
  CHECK(cell2_equal(sig, lhs, rhs));
}

TEST_CASE("product isomorphism round trips") {
  Context cx = cell_context(T);
  Cell2 r = make_cell2(sig, T, parse_reduction("beta<\\y:t. y, x>", sig, cx));
  Cell2 s = make_cell2(sig, T, parse_reduction("a(x, beta<\\y:t. y, x>)", sig, cx));
  Cell2 p = pair2(sig, r, s);
  auto [r2, s2] = split2(sig, p);
  CHECK(cell2_equal(sig, r, r2));
  CHECK(cell2_equal(sig, s, s2));
  Cell2 p2 = pair2(sig, r2, s2);
  CHECK(cell2_equal(sig, p, p2));
}

TEST_CASE("terminal object: every 2-cell into 1 is the unit identity") {
  Context cx = cell_context(T);
  // a 2-cell at unit type built from a pair projection over a real step
  RedPtr q = parse_reduction("snd (beta<\\y:t. y, x>, ())", sig, cx);
  Cell2 c = make_cell2(sig, T, q);
  Cell2 u = make_cell2(sig, T, Reduction::unit());
  CHECK(cell2_equal(sig, c, u));
  CHECK(c.proof->kind == Reduction::Kind::UnitRefl);
}

TEST_CASE("exponential: curry and uncurry are mutually inverse") {
  // gamma : 2-cell at type t^t over [x:t]; curry = lambda congruence,
  // uncurry = application to a fresh variable
  Context cx = cell_context(T);
  RedPtr g = parse_reduction("\\z:t. beta<\\y:t. y, z>", sig, cx);
  ReductionJudgment j = make_judgment(sig, cx, g);
  // uncurry then curry
  Context cz = cx.extended("w", T);
  RedPtr unc = Reduction::app(red_shift(g, 1), Reduction::var(0));
  RedPtr cur = Reduction::lam(T, unc, "w");
  CHECK(perm_equiv(sig, j, make_judgment(sig, cx, cur)).verdict);
  (void)cz;
}

TEST_CASE("unit components of the lambda signature") {
  UnitComponent st = unit_component(sig, "t");
  REQUIRE(st.kind == UnitComponent::Kind::SortImage);
  CHECK(type_equal(st.type, T));

  UnitComponent op = unit_component(sig, "a");
  REQUIRE(op.kind == UnitComponent::Kind::OpImage);
  CHECK(type_equal(op.cell1.dom, Type::mk_product(T, T)));
  CHECK(type_equal(op.cell1.cod, T));
  // body is a(fst x, snd x)
  Context pc = cell_context(Type::mk_product(T, T));
  TermPtr expect = beta_eta_normalize(
      sig, pc, parse_term("a(fst x, snd x)", sig.base, pc), T);
  CHECK(alpha_equal(op.cell1.body, expect));

  UnitComponent ru = unit_component(sig, "beta");
  REQUIRE(ru.kind == UnitComponent::Kind::RuleImage);
  CHECK(type_equal(ru.cell2.src.dom, Type::mk_product(TT, T)));
  // source: a(l(fst x), snd x); target: (fst x) (snd x)
  Context rc = cell_context(Type::mk_product(TT, T));
  TermPtr src = beta_eta_normalize(
      sig, rc, parse_term("a(l(fst x), snd x)", sig.base, rc), T);
  TermPtr tgt = beta_eta_normalize(
      sig, rc, parse_term("(fst x) (snd x)", sig.base, rc), T);
  CHECK(alpha_equal(ru.cell2.src.body, src));
  CHECK(alpha_equal(ru.cell2.tgt.body, tgt));

  CHECK_THROWS_MATCHES(unit_component(sig, "nope"), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code == Errc::UnknownItem;
                       }));
}

TEST_CASE("whisker by identity 1-cell leaves the cell unchanged") {
  Context cx = cell_context(T);
  Cell2 c = make_cell2(sig, T, parse_reduction("beta<\\y:t. y, x>", sig, cx));
  Cell2 l = whisker_left_cell(sig, c, identity_cell1(sig, T));
  CHECK(cell2_equal(sig, c, l));
  Cell2 r = whisker_right_cell(sig, identity_cell1(sig, T), c);
  CHECK(cell2_equal(sig, c, r));
}
