#pragma once

#include <string>
#include <vector>

#include "perm2/monad.hpp"
#include "perm2/permeq.hpp"
#include "perm2/whisker.hpp"

namespace perm2 {

// ---------------------------------------------------------------------------
// The syntactic cartesian closed 2-category of a 2-signature (the free
// L-algebra case): objects are types, 1-cells are terms with one free
// variable modulo beta-eta, 2-cells are reductions modulo permutation
// equivalence, stored as canonical representatives.
// ---------------------------------------------------------------------------

struct Cell1 {
  TypePtr dom, cod;
  TermPtr body;  // over [x:dom], beta-eta-normal
};

struct Cell2 {
  Cell1 src, tgt;
  RedPtr proof;  // over [x:dom], canonical representative
};

inline Context cell_context(const TypePtr& dom) {
  Context ctx;
  ctx.vars.emplace_back("x", dom);
  return ctx;
}

inline Cell1 make_cell1(const Signature2& sig, const TypePtr& dom,
                        const TypePtr& cod, const TermPtr& body) {
  Context ctx = cell_context(dom);
  TypePtr ty = typecheck_term(ctx, body, sig);
  if (!type_equal(ty, cod))
    throw Error(Errc::TypeMismatch, "cell body type mismatch");
  return {dom, cod, beta_eta_normalize(sig, ctx, body, cod)};
}

inline Cell1 identity_cell1(const Signature2& sig, const TypePtr& a) {
  return make_cell1(sig, a, a, Term::var(0));
}

inline bool cell1_equal(const Cell1& f, const Cell1& g) {
  return type_equal(f.dom, g.dom) && type_equal(f.cod, g.cod) &&
         alpha_equal(f.body, g.body);
}

// h for the free algebra: canonicalize and resequentialize (mu followed by
// the normal representative).
inline RedPtr canonical_representative(const Signature2& sig, const Context& ctx,
                                       const RedPtr& p) {
  CanonicalForm cf = canonicalize(sig, make_judgment(sig, ctx, p));
  return resequentialize(sig, cf);
}

inline Cell2 make_cell2(const Signature2& sig, const TypePtr& dom,
                        const RedPtr& proof) {
  Context ctx = cell_context(dom);
  Triple t = typecheck_reduction(ctx, proof, sig);
  Cell2 c;
  c.src = Cell1{dom, t.type, t.source};
  c.tgt = Cell1{dom, t.type, t.target};
  c.proof = canonical_representative(sig, ctx, proof);
  return c;
}

inline Cell2 identity_cell2(const Signature2& sig, const Cell1& f) {
  return make_cell2(sig, f.dom, identity_reduction(f.body));
}

inline bool cell2_equal(const Signature2& sig, const Cell2& a, const Cell2& b) {
  if (!type_equal(a.src.dom, b.src.dom)) return false;
  Context ctx = cell_context(a.src.dom);
  return perm_equiv(sig, make_judgment(sig, ctx, a.proof),
                    make_judgment(sig, ctx, b.proof))
      .verdict;
}

// Composition of 1-cells A --M--> B --N--> C is N[M].
inline Cell1 compose1(const Signature2& sig, const Cell1& f, const Cell1& g) {
  if (!type_equal(f.cod, g.dom))
    throw Error(Errc::TypeMismatch, "compose1: boundary mismatch");
  Context ctx = cell_context(f.dom);
  TermPtr body = beta_eta_normalize(sig, ctx, subst_term(g.body, {f.body}), g.cod);
  return {f.dom, g.cod, body};
}

// Vertical composition of 2-cells.
inline Cell2 vcompose(const Signature2& sig, const Cell2& a, const Cell2& b) {
  if (!type_equal(a.src.dom, b.src.dom) || !alpha_equal(a.tgt.body, b.src.body))
    throw Error(Errc::MiddleMismatch, "vcompose: boundary mismatch");
  Context ctx = cell_context(a.src.dom);
  RedPtr comp = Reduction::vcomp(a.proof, a.tgt.body, b.proof);
  Cell2 c;
  c.src = a.src;
  c.tgt = b.tgt;
  c.proof = canonical_representative(sig, ctx, comp);
  return c;
}

// Horizontal composition: substitution of the left cell into the right.
inline Cell2 hcompose(const Signature2& sig, const Cell2& a, const Cell2& b) {
  if (!type_equal(a.src.cod, b.src.dom))
    throw Error(Errc::TypeMismatch, "hcompose: boundary mismatch");
  Context gamma = cell_context(a.src.dom);
  Context delta = cell_context(b.src.dom);
  RedPtr comp = subst_reduction(sig, gamma, delta, b.proof, {a.proof});
  Cell2 c;
  c.src = compose1(sig, a.src, b.src);
  c.tgt = compose1(sig, a.tgt, b.tgt);
  c.proof = canonical_representative(sig, gamma, comp);
  return c;
}

// Left whiskering of a 2-cell by a following 1-cell: N[alpha].
inline Cell2 whisker_left_cell(const Signature2& sig, const Cell2& a,
                               const Cell1& n) {
  if (!type_equal(a.src.cod, n.dom))
    throw Error(Errc::TypeMismatch, "whisker_left_cell: boundary mismatch");
  Context gamma = cell_context(a.src.dom);
  RedPtr w = left_whisker(n.body, {a.proof});
  Cell2 c;
  c.src = compose1(sig, a.src, n);
  c.tgt = compose1(sig, a.tgt, n);
  c.proof = canonical_representative(sig, gamma, w);
  return c;
}

// Right whiskering of a 2-cell by a preceding 1-cell: gamma[m].
inline Cell2 whisker_right_cell(const Signature2& sig, const Cell1& m,
                                const Cell2& g) {
  if (!type_equal(m.cod, g.src.dom))
    throw Error(Errc::TypeMismatch, "whisker_right_cell: boundary mismatch");
  Context gamma = cell_context(m.dom);
  Context delta = cell_context(g.src.dom);
  RedPtr w = subst_reduction(sig, gamma, delta, g.proof,
                             {identity_reduction(m.body)});
  Cell2 c;
  c.src = compose1(sig, m, g.src);
  c.tgt = compose1(sig, m, g.tgt);
  c.proof = canonical_representative(sig, gamma, w);
  return c;
}

// The product isomorphism on 2-cells.
inline Cell2 pair2(const Signature2& sig, const Cell2& r, const Cell2& s) {
  if (!type_equal(r.src.dom, s.src.dom))
    throw Error(Errc::TypeMismatch, "pair2: domains differ");
  Context ctx = cell_context(r.src.dom);
  Cell2 c;
  c.src = Cell1{r.src.dom, Type::mk_product(r.src.cod, s.src.cod),
                Term::pair(r.src.body, s.src.body)};
  c.tgt = Cell1{r.src.dom, Type::mk_product(r.tgt.cod, s.tgt.cod),
                Term::pair(r.tgt.body, s.tgt.body)};
  c.proof = canonical_representative(sig, ctx, Reduction::pair(r.proof, s.proof));
  return c;
}

inline std::pair<Cell2, Cell2> split2(const Signature2& sig, const Cell2& p) {
  if (p.src.cod->kind != Type::Kind::Product)
    throw Error(Errc::TypeMismatch, "split2: codomain is not a product");
  Context ctx = cell_context(p.src.dom);
  Cell2 l = make_cell2(sig, p.src.dom, Reduction::proj1(p.proof));
  Cell2 r = make_cell2(sig, p.src.dom, Reduction::proj2(p.proof));
  (void)ctx;
  return {l, r};
}

// ---------------------------------------------------------------------------
// Unit components of the free construction: sorts to base types, operations
// to projection-applied constants, rules to single rule-application 2-cells
// over the product of their context.
// ---------------------------------------------------------------------------

// Right-nested product of a context: prod() = 1, prod(A) = A,
// prod(A1, ..., An) = A1 * (A2 * ... * An).
inline TypePtr context_product(const std::vector<TypePtr>& types) {
  if (types.empty()) return Type::mk_unit();
  TypePtr acc = types.back();
  for (size_t i = types.size() - 1; i-- > 0;)
    acc = Type::mk_product(types[i], acc);
  return acc;
}

// i-th projection (0-based) out of the right-nested product of n components,
// applied to `x`.
inline TermPtr context_proj(const TermPtr& x, size_t i, size_t n) {
  if (n == 0) throw Error(Errc::UnknownItem, "projection from the empty product");
  TermPtr cur = x;
  for (size_t k = 0; k < i; ++k) cur = Term::proj2(cur);
  if (i + 1 < n) cur = Term::proj1(cur);
  return cur;
}

struct UnitComponent {
  enum class Kind { SortImage, OpImage, RuleImage };
  Kind kind;
  TypePtr type;   // SortImage
  Cell1 cell1;    // OpImage
  Cell2 cell2;    // RuleImage
};

inline UnitComponent unit_component_sort(const Signature2& sig,
                                         const std::string& sort) {
  UnitComponent u;
  u.kind = UnitComponent::Kind::SortImage;
  u.type = Type::mk_sort(sig.base.sort_id(sort));
  return u;
}

inline UnitComponent unit_component_op(const Signature2& sig,
                                       const std::string& op) {
  int id = sig.base.op_id(op);
  const Sequent& sq = sig.base.sequent_of(id);
  TypePtr dom = context_product(sq.premises);
  std::vector<TermPtr> args;
  for (size_t i = 0; i < sq.premises.size(); ++i)
    args.push_back(context_proj(Term::var(0), i, sq.premises.size()));
  UnitComponent u;
  u.kind = UnitComponent::Kind::OpImage;
  u.cell1 = make_cell1(sig, dom, sq.conclusion, Term::cst(id, std::move(args)));
  return u;
}

inline UnitComponent unit_component_rule(const Signature2& sig,
                                         const std::string& rule) {
  int id = sig.rule_id(rule);
  const RewriteRule& r = sig.rule(id);
  std::vector<TypePtr> types;
  for (auto& v : r.ctx.vars) types.push_back(v.second);
  TypePtr dom = context_product(types);
  std::vector<RedPtr> args;
  for (size_t i = 0; i < types.size(); ++i)
    args.push_back(
        identity_reduction(context_proj(Term::var(0), i, types.size())));
  UnitComponent u;
  u.kind = UnitComponent::Kind::RuleImage;
  u.cell2 = make_cell2(sig, dom, Reduction::rule_app(id, std::move(args)));
  return u;
}

inline UnitComponent unit_component(const Signature2& sig,
                                    const std::string& item) {
  if (sig.base.sort_ids.count(item)) return unit_component_sort(sig, item);
  if (sig.base.op_ids.count(item)) return unit_component_op(sig, item);
  if (sig.rule_ids.count(item)) return unit_component_rule(sig, item);
  throw Error(Errc::UnknownItem, "unknown signature item " + item);
}

}  // namespace perm2
