#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "perm2/types.hpp"

namespace perm2 {

// ---------------------------------------------------------------------------
// Terms of the simply-typed lambda calculus with constants.
//
// Binding uses de Bruijn indices; index 0 is the innermost binder (the last
// context entry at top level). Constant application is a distinct node and is
// never curried into App. Lambda keeps the surface binder name as a printing
// hint only; it does not participate in equality.
//
// `label` is an origin-tracking mark used by the permutation-equivalence
// machinery (residuals of rewrite steps through normalization). It is ignored
// by equality, hashing and printing. 0 means unmarked.
// ---------------------------------------------------------------------------

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Var, Unit, Const, Lambda, App, Pair, Proj1, Proj2, Hole };
  Kind kind;
  int index = -1;             // Var
  int op = -1;                // Const
  TypePtr binder;             // Lambda binder type; Hole type
  TermPtr a, b;               // Lambda: a=body. App: a b. Pair: (a,b). Proj: a.
  std::vector<TermPtr> args;  // Const
  std::string hint;           // Lambda binder name hint
  uint32_t label = 0;

  static TermPtr var(int i) {
    auto t = std::make_shared<Term>();
    t->kind = Kind::Var;
    t->index = i;
    return t;
  }
  static TermPtr unit() {
    auto t = std::make_shared<Term>();
    t->kind = Kind::Unit;
    return t;
  }
  static TermPtr cst(int op, std::vector<TermPtr> args) {
    auto t = std::make_shared<Term>();
    t->kind = Kind::Const;
    t->op = op;
    t->args = std::move(args);
    return t;
  }
  static TermPtr lam(TypePtr ty, TermPtr body, std::string hint = "x") {
    auto t = std::make_shared<Term>();
    t->kind = Kind::Lambda;
    t->binder = std::move(ty);
    t->a = std::move(body);
    t->hint = std::move(hint);
    return t;
  }
  static TermPtr app(TermPtr f, TermPtr x) {
    auto t = std::make_shared<Term>();
    t->kind = Kind::App;
    t->a = std::move(f);
    t->b = std::move(x);
    return t;
  }
  static TermPtr pair(TermPtr l, TermPtr r) {
    auto t = std::make_shared<Term>();
    t->kind = Kind::Pair;
    t->a = std::move(l);
    t->b = std::move(r);
    return t;
  }
  static TermPtr proj1(TermPtr p) {
    auto t = std::make_shared<Term>();
    t->kind = Kind::Proj1;
    t->a = std::move(p);
    return t;
  }
  static TermPtr proj2(TermPtr p) {
    auto t = std::make_shared<Term>();
    t->kind = Kind::Proj2;
    t->a = std::move(p);
    return t;
  }
  // A one-hole context marker; only used inside elementary-step contexts.
  static TermPtr hole(TypePtr ty) {
    auto t = std::make_shared<Term>();
    t->kind = Kind::Hole;
    t->binder = std::move(ty);
    return t;
  }

  TermPtr with_label(uint32_t l) const {
    auto t = std::make_shared<Term>(*this);
    t->label = l;
    return t;
  }
};

// Alpha-equality is structural equality on de Bruijn terms. Labels and binder
// name hints are ignored.
inline bool alpha_equal(const TermPtr& x, const TermPtr& y) {
  if (x.get() == y.get()) return true;
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case Term::Kind::Var: return x->index == y->index;
    case Term::Kind::Unit: return true;
    case Term::Kind::Const: {
      if (x->op != y->op || x->args.size() != y->args.size()) return false;
      for (size_t i = 0; i < x->args.size(); ++i)
        if (!alpha_equal(x->args[i], y->args[i])) return false;
      return true;
    }
    case Term::Kind::Lambda:
      return type_equal(x->binder, y->binder) && alpha_equal(x->a, y->a);
    case Term::Kind::App:
    case Term::Kind::Pair:
      return alpha_equal(x->a, y->a) && alpha_equal(x->b, y->b);
    case Term::Kind::Proj1:
    case Term::Kind::Proj2:
      return alpha_equal(x->a, y->a);
    case Term::Kind::Hole:
      return type_equal(x->binder, y->binder);
  }
  return false;
}

inline int term_size(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Var:
    case Term::Kind::Unit:
    case Term::Kind::Hole: return 1;
    case Term::Kind::Const: {
      int s = 1;
      for (auto& x : t->args) s += term_size(x);
      return s;
    }
    case Term::Kind::Lambda: return 1 + term_size(t->a);
    case Term::Kind::App:
    case Term::Kind::Pair: return 1 + term_size(t->a) + term_size(t->b);
    case Term::Kind::Proj1:
    case Term::Kind::Proj2: return 1 + term_size(t->a);
  }
  return 1;
}

// Shift free de Bruijn indices >= cutoff by d.
inline TermPtr term_shift(const TermPtr& t, int d, int cutoff = 0) {
  if (d == 0) return t;
  switch (t->kind) {
    case Term::Kind::Var:
      if (t->index >= cutoff) {
        auto r = Term::var(t->index + d);
        return t->label ? r->with_label(t->label) : r;
      }
      return t;
    case Term::Kind::Unit:
    case Term::Kind::Hole: return t;
    case Term::Kind::Const: {
      std::vector<TermPtr> args;
      args.reserve(t->args.size());
      for (auto& x : t->args) args.push_back(term_shift(x, d, cutoff));
      auto r = std::make_shared<Term>(*t);
      r->args = std::move(args);
      return r;
    }
    case Term::Kind::Lambda: {
      auto r = std::make_shared<Term>(*t);
      r->a = term_shift(t->a, d, cutoff + 1);
      return r;
    }
    case Term::Kind::App:
    case Term::Kind::Pair: {
      auto r = std::make_shared<Term>(*t);
      r->a = term_shift(t->a, d, cutoff);
      r->b = term_shift(t->b, d, cutoff);
      return r;
    }
    case Term::Kind::Proj1:
    case Term::Kind::Proj2: {
      auto r = std::make_shared<Term>(*t);
      r->a = term_shift(t->a, d, cutoff);
      return r;
    }
  }
  return t;
}

// Simultaneous capture-avoiding substitution. subs[i] replaces Var(depth+i)
// viewed from under `depth` binders; indices above the substituted block are
// lowered is not needed here: subs must cover the whole ambient context, so
// a term over context of size n is grafted with exactly n images.
// Pure grafting; no normalization.
inline TermPtr term_subst(const TermPtr& t, const std::vector<TermPtr>& subs,
                          int depth = 0) {
  switch (t->kind) {
    case Term::Kind::Var: {
      if (t->index < depth) return t;
      size_t k = static_cast<size_t>(t->index - depth);
      if (k >= subs.size())
        throw Error(Errc::ArityMismatch, "term_subst: substitution too short");
      // subs[0] corresponds to de Bruijn index `depth` (the innermost /
      // rightmost context entry).
      return term_shift(subs[k], depth);
    }
    case Term::Kind::Unit:
    case Term::Kind::Hole: return t;
    case Term::Kind::Const: {
      std::vector<TermPtr> args;
      args.reserve(t->args.size());
      for (auto& x : t->args) args.push_back(term_subst(x, subs, depth));
      auto r = std::make_shared<Term>(*t);
      r->args = std::move(args);
      return r;
    }
    case Term::Kind::Lambda: {
      auto r = std::make_shared<Term>(*t);
      r->a = term_subst(t->a, subs, depth + 1);
      return r;
    }
    case Term::Kind::App:
    case Term::Kind::Pair: {
      auto r = std::make_shared<Term>(*t);
      r->a = term_subst(t->a, subs, depth);
      r->b = term_subst(t->b, subs, depth);
      return r;
    }
    case Term::Kind::Proj1:
    case Term::Kind::Proj2: {
      auto r = std::make_shared<Term>(*t);
      r->a = term_subst(t->a, subs, depth);
      return r;
    }
  }
  return t;
}

// Strip all labels (used before storing canonical data).
inline TermPtr term_unlabel(const TermPtr& t) {
  bool dirty = t->label != 0;
  std::shared_ptr<Term> r;
  auto out = [&]() -> std::shared_ptr<Term> {
    if (!r) r = std::make_shared<Term>(*t);
    return r;
  };
  switch (t->kind) {
    case Term::Kind::Var:
    case Term::Kind::Unit:
    case Term::Kind::Hole: break;
    case Term::Kind::Const:
      for (size_t i = 0; i < t->args.size(); ++i) {
        TermPtr c = term_unlabel(t->args[i]);
        if (c.get() != t->args[i].get()) out()->args[i] = c;
      }
      break;
    case Term::Kind::Lambda:
    case Term::Kind::Proj1:
    case Term::Kind::Proj2: {
      TermPtr c = term_unlabel(t->a);
      if (c.get() != t->a.get()) out()->a = c;
      break;
    }
    case Term::Kind::App:
    case Term::Kind::Pair: {
      TermPtr c1 = term_unlabel(t->a), c2 = term_unlabel(t->b);
      if (c1.get() != t->a.get()) out()->a = c1;
      if (c2.get() != t->b.get()) out()->b = c2;
      break;
    }
  }
  if (!r && !dirty) return t;
  out()->label = 0;
  return r;
}

// ---------------------------------------------------------------------------
// Contexts: ordered (name, type) lists; no duplicate names. Entry i is the
// variable with de Bruijn index (size - 1 - i) at top level.
// ---------------------------------------------------------------------------

struct Context {
  std::vector<std::pair<std::string, TypePtr>> vars;

  size_t size() const { return vars.size(); }
  // Type of de Bruijn index i.
  const TypePtr& type_of(int index) const {
    if (index < 0 || static_cast<size_t>(index) >= vars.size())
      throw Error(Errc::UnboundVariable, "variable index out of range");
    return vars[vars.size() - 1 - static_cast<size_t>(index)].second;
  }
  const std::string& name_of(int index) const {
    return vars[vars.size() - 1 - static_cast<size_t>(index)].first;
  }
  int index_of(const std::string& name) const {
    for (size_t i = 0; i < vars.size(); ++i)
      if (vars[vars.size() - 1 - i].first == name) return static_cast<int>(i);
    return -1;
  }
  Context extended(const std::string& name, TypePtr ty) const {
    for (auto& v : vars)
      if (v.first == name)
        throw Error(Errc::DuplicateVariable, "duplicate variable " + name);
    Context c = *this;
    c.vars.emplace_back(name, std::move(ty));
    return c;
  }
};

}  // namespace perm2
