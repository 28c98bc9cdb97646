#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "perm2/kernel.hpp"
#include "perm2/signature.hpp"

namespace perm2 {

// Free variables (de Bruijn indices relative to the top level) of a term.
inline void free_vars_rec(const TermPtr& t, int depth, std::set<int>& out) {
  switch (t->kind) {
    case Term::Kind::Var:
      if (t->index >= depth) out.insert(t->index - depth);
      return;
    case Term::Kind::Unit:
    case Term::Kind::Hole: return;
    case Term::Kind::Const:
      for (auto& x : t->args) free_vars_rec(x, depth, out);
      return;
    case Term::Kind::Lambda: free_vars_rec(t->a, depth + 1, out); return;
    case Term::Kind::App:
    case Term::Kind::Pair:
      free_vars_rec(t->a, depth, out);
      free_vars_rec(t->b, depth, out);
      return;
    case Term::Kind::Proj1:
    case Term::Kind::Proj2: free_vars_rec(t->a, depth, out); return;
  }
}

inline std::set<int> free_vars(const TermPtr& t) {
  std::set<int> out;
  free_vars_rec(t, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// validate_signature: every violated invariant becomes a report entry.
// ---------------------------------------------------------------------------

inline ValidationReport validate_signature(const Signature2& sig) {
  ValidationReport rep;
  for (size_t i = 0; i < sig.base.op_names.size(); ++i) {
    const Sequent& sq = sig.base.op_sequents[i];
    for (auto& p : sq.premises)
      if (!type_wf(p, sig.base))
        rep.add("UnknownSort", "op " + sig.base.op_names[i],
                "premise mentions an undeclared sort");
    if (!type_wf(sq.conclusion, sig.base))
      rep.add("UnknownSort", "op " + sig.base.op_names[i],
              "conclusion mentions an undeclared sort");
  }
  for (const RewriteRule& r : sig.rules) {
    bool ctx_ok = true;
    for (auto& v : r.ctx.vars)
      if (!type_wf(v.second, sig.base)) {
        rep.add("UnknownSort", "rule " + r.name,
                "context of " + v.first + " mentions an undeclared sort");
        ctx_ok = false;
      }
    if (!type_wf(r.type, sig.base)) {
      rep.add("UnknownSort", "rule " + r.name, "result type");
      ctx_ok = false;
    }
    if (!ctx_ok) continue;
    TypePtr lt, rt;
    try {
      lt = typecheck_term(r.ctx, r.lhs, sig);
    } catch (const Error& e) {
      rep.add("IllTypedLhs", "rule " + r.name, e.what());
      continue;
    }
    try {
      rt = typecheck_term(r.ctx, r.rhs, sig);
    } catch (const Error& e) {
      rep.add("IllTypedRhs", "rule " + r.name, e.what());
      continue;
    }
    // Membership in the parallel-pair set: both sides over the same sequent.
    if (!type_equal(lt, rt) || !type_equal(lt, r.type)) {
      rep.add("ParallelismViolation", "rule " + r.name,
              "sides typecheck at " + print_type(lt, sig.base) + " and " +
                  print_type(rt, sig.base) + ", declared " +
                  print_type(r.type, sig.base));
      continue;
    }
    if (!alpha_equal(r.lhs, beta_eta_normalize(sig, r.ctx, r.lhs, r.type)) ||
        !alpha_equal(r.rhs, beta_eta_normalize(sig, r.ctx, r.rhs, r.type)))
      rep.add("NotNormalized", "rule " + r.name,
              "rule sides must be stored beta-eta-normal");
  }
  return rep;
}

// ---------------------------------------------------------------------------
// is_hrs: Nipkow's three side conditions, checked modulo beta-eta.
// ---------------------------------------------------------------------------

struct HrsResult {
  bool ok;
  std::vector<Violation> violations;
};

inline HrsResult is_hrs(const Signature2& sig) {
  HrsResult res{true, {}};
  for (const RewriteRule& r : sig.rules) {
    // lhs must not be a variable (modulo beta-eta: compare against the
    // eta-long form of each context variable).
    for (size_t i = 0; i < r.ctx.size(); ++i) {
      int idx = static_cast<int>(r.ctx.size() - 1 - i);
      if (type_equal(r.ctx.vars[i].second, r.type) &&
          alpha_equal(r.lhs, beta_eta_normalize(sig, r.ctx, Term::var(idx), r.type))) {
        res.ok = false;
        res.violations.push_back({"LhsIsVariable", "rule " + r.name, ""});
      }
    }
    if (r.type->kind != Type::Kind::Sort) {
      res.ok = false;
      res.violations.push_back(
          {"ResultNotASort", "rule " + r.name,
           "result type is " + print_type(r.type, sig.base)});
    }
    std::set<int> fv = free_vars(r.lhs);
    for (size_t i = 0; i < r.ctx.size(); ++i) {
      int idx = static_cast<int>(r.ctx.size() - 1 - i);
      if (!fv.count(idx)) {
        res.ok = false;
        res.violations.push_back({"ContextVariableUnused", "rule " + r.name,
                                  r.ctx.vars[i].first + " does not occur in lhs"});
      }
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Morphisms of 2-signatures: sort/op/rule maps that make both squares
// commute (sequents transported sortwise, rule sides transported by constant
// renaming and compared modulo beta-eta).
// ---------------------------------------------------------------------------

// Transport a type along a sort map into the target signature.
inline TypePtr transport_type(const TypePtr& t, const std::function<int(int)>& f0) {
  return subst_type(t, [&](int s) { return Type::mk_sort(f0(s)); });
}

// Transport a term along sort/op maps (constant substitution).
inline TermPtr transport_term(const TermPtr& t, const std::function<int(int)>& f0,
                              const std::function<int(int)>& f1) {
  switch (t->kind) {
    case Term::Kind::Var:
    case Term::Kind::Unit:
    case Term::Kind::Hole: return t;
    case Term::Kind::Const: {
      std::vector<TermPtr> args;
      for (auto& x : t->args) args.push_back(transport_term(x, f0, f1));
      return Term::cst(f1(t->op), std::move(args));
    }
    case Term::Kind::Lambda:
      return Term::lam(transport_type(t->binder, f0), transport_term(t->a, f0, f1),
                       t->hint);
    case Term::Kind::App:
      return Term::app(transport_term(t->a, f0, f1), transport_term(t->b, f0, f1));
    case Term::Kind::Pair:
      return Term::pair(transport_term(t->a, f0, f1), transport_term(t->b, f0, f1));
    case Term::Kind::Proj1: return Term::proj1(transport_term(t->a, f0, f1));
    case Term::Kind::Proj2: return Term::proj2(transport_term(t->a, f0, f1));
  }
  return t;
}

inline ValidationReport apply_morphism(const std::function<int(int)>& f0,
                                       const std::function<int(int)>& f1,
                                       const std::function<int(int)>& f2,
                                       const Signature2& x, const Signature2& y) {
  ValidationReport rep;
  for (size_t s = 0; s < x.base.sort_names.size(); ++s) {
    int im = f0(static_cast<int>(s));
    if (im < 0 || static_cast<size_t>(im) >= y.base.sort_names.size())
      rep.add("UnknownSort", "sort " + x.base.sort_names[s],
              "image is not a sort of the target signature");
  }
  // First square: op sequents commute with the sort transport.
  for (size_t c = 0; c < x.base.op_names.size(); ++c) {
    int im = f1(static_cast<int>(c));
    if (im < 0 || static_cast<size_t>(im) >= y.base.op_names.size()) {
      rep.add("UnknownConstant", "op " + x.base.op_names[c], "image missing");
      continue;
    }
    const Sequent& sx = x.base.op_sequents[c];
    const Sequent& sy = y.base.op_sequents[static_cast<size_t>(im)];
    Sequent tx;
    for (auto& p : sx.premises) tx.premises.push_back(transport_type(p, f0));
    tx.conclusion = transport_type(sx.conclusion, f0);
    if (!sequent_equal(tx, sy))
      rep.add("SequentSquare", "op " + x.base.op_names[c],
              "transported sequent differs from the image's sequent");
  }
  // Second square: rule pairs commute with the term transport, modulo
  // beta-eta.
  for (size_t r = 0; r < x.rules.size(); ++r) {
    int im = f2(static_cast<int>(r));
    if (im < 0 || static_cast<size_t>(im) >= y.rules.size()) {
      rep.add("UnknownRule", "rule " + x.rules[r].name, "image missing");
      continue;
    }
    const RewriteRule& rx = x.rules[r];
    const RewriteRule& ry = y.rules[static_cast<size_t>(im)];
    if (rx.ctx.size() != ry.ctx.size()) {
      rep.add("RuleSquare", "rule " + rx.name, "context lengths differ");
      continue;
    }
    bool ok = true;
    Context tc;
    for (size_t i = 0; i < rx.ctx.size(); ++i) {
      TypePtr tt = transport_type(rx.ctx.vars[i].second, f0);
      if (!type_equal(tt, ry.ctx.vars[i].second)) ok = false;
      tc.vars.emplace_back(ry.ctx.vars[i].first, tt);
    }
    TypePtr tty = transport_type(rx.type, f0);
    if (!ok || !type_equal(tty, ry.type)) {
      rep.add("RuleSquare", "rule " + rx.name, "transported sequent differs");
      continue;
    }
    TermPtr tl = transport_term(rx.lhs, f0, f1);
    TermPtr tr = transport_term(rx.rhs, f0, f1);
    try {
      if (!term_equal(y, tc, tl, ry.lhs, tty) || !term_equal(y, tc, tr, ry.rhs, tty))
        rep.add("RuleSquare", "rule " + rx.name,
                "transported sides differ from the image's sides modulo beta-eta");
    } catch (const Error& e) {
      rep.add("RuleSquare", "rule " + rx.name, e.what());
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Bundled fixture signatures
// ---------------------------------------------------------------------------

// The pure lambda-calculus as a 2-signature: sort t, operations
// a : (t, t |- t) and l : (t^t |- t), and the beta rule
//   x : t^t, y : t |- a(l(x), y) => x y : t.
inline Signature2 make_lambda_signature() {
  Signature2 sig;
  int t = sig.base.add_sort("t");
  TypePtr T = Type::mk_sort(t);
  TypePtr TT = Type::mk_exp(T, T);
  sig.base.add_op("a", Sequent{{T, T}, T});
  sig.base.add_op("l", Sequent{{TT}, T});
  Context ctx;
  ctx.vars.emplace_back("x", TT);
  ctx.vars.emplace_back("y", T);
  // de Bruijn: y = 0, x = 1.
  TermPtr lhs = Term::cst(0, {Term::cst(1, {Term::var(1)}), Term::var(0)});
  TermPtr rhs = Term::app(Term::var(1), Term::var(0));
  RewriteRule beta{"beta", ctx, lhs, rhs, T};
  beta.lhs = beta_eta_normalize(sig, ctx, lhs, T);
  beta.rhs = beta_eta_normalize(sig, ctx, rhs, T);
  sig.add_rule(std::move(beta));
  return sig;
}

// CCS structural-congruence fragment: associativity and commutativity of
// parallel composition. Divergent fixture: `a | a` rewrites forever by
// commutativity.
inline Signature2 make_ccs_signature() {
  Signature2 sig;
  int p = sig.base.add_sort("p");
  TypePtr P = Type::mk_sort(p);
  int par = sig.base.add_op("par", Sequent{{P, P}, P});
  int act = sig.base.add_op("act", Sequent{{}, P});
  (void)act;
  {
    Context ctx;
    ctx.vars.emplace_back("x", P);
    ctx.vars.emplace_back("y", P);
    ctx.vars.emplace_back("z", P);
    // x=2, y=1, z=0
    TermPtr lhs = Term::cst(par, {Term::cst(par, {Term::var(2), Term::var(1)}), Term::var(0)});
    TermPtr rhs = Term::cst(par, {Term::var(2), Term::cst(par, {Term::var(1), Term::var(0)})});
    sig.add_rule({"assoc", ctx, lhs, rhs, P});
  }
  {
    Context ctx;
    ctx.vars.emplace_back("x", P);
    ctx.vars.emplace_back("y", P);
    TermPtr lhs = Term::cst(par, {Term::var(1), Term::var(0)});
    TermPtr rhs = Term::cst(par, {Term::var(0), Term::var(1)});
    sig.add_rule({"comm", ctx, lhs, rhs, P});
  }
  return sig;
}

}  // namespace perm2
