#pragma once

#include <algorithm>
#include <cassert>
#include <sstream>
#include <string>
#include <vector>

#include "perm2/signature.hpp"
#include "perm2/term.hpp"
#include "perm2/types.hpp"

namespace perm2 {

// ---------------------------------------------------------------------------
// Type checking
// ---------------------------------------------------------------------------

inline TypePtr typecheck_term(const Context& ctx, const TermPtr& m,
                              const Signature2& sig);

namespace detail {

inline std::string type_str(const TypePtr&, const Signature1&);

}  // namespace detail

inline std::string fresh_name(const Context& ctx, const std::string& hint) {
  std::string base = hint.empty() ? "x" : hint;
  std::string name = base;
  int k = 0;
  while (ctx.index_of(name) >= 0) name = base + std::to_string(++k);
  return name;
}

inline TypePtr typecheck_term(const Context& ctx, const TermPtr& m,
                              const Signature2& sig) {
  switch (m->kind) {
    case Term::Kind::Var:
      if (m->index < 0 || static_cast<size_t>(m->index) >= ctx.size())
        throw Error(Errc::UnboundVariable, "unbound variable");
      return ctx.type_of(m->index);
    case Term::Kind::Unit:
      return Type::mk_unit();
    case Term::Kind::Const: {
      if (m->op < 0 || static_cast<size_t>(m->op) >= sig.base.op_names.size())
        throw Error(Errc::UnknownConstant, "unknown constant");
      const Sequent& sq = sig.base.sequent_of(m->op);
      if (sq.premises.size() != m->args.size())
        throw Error(Errc::ArityMismatch,
                    sig.base.op_names[m->op] + ": expected " +
                        std::to_string(sq.premises.size()) + " arguments, got " +
                        std::to_string(m->args.size()));
      for (size_t i = 0; i < m->args.size(); ++i) {
        TypePtr t = typecheck_term(ctx, m->args[i], sig);
        if (!type_equal(t, sq.premises[i]))
          throw Error(Errc::TypeMismatch,
                      "argument " + std::to_string(i + 1) + " of " +
                          sig.base.op_names[m->op] + ": expected " +
                          detail::type_str(sq.premises[i], sig.base) + ", found " +
                          detail::type_str(t, sig.base));
      }
      return sq.conclusion;
    }
    case Term::Kind::Lambda: {
      if (!type_wf(m->binder, sig.base))
        throw Error(Errc::UnknownSort, "lambda binder mentions unknown sort");
      Context c2 = ctx.extended(fresh_name(ctx, m->hint), m->binder);
      TypePtr b = typecheck_term(c2, m->a, sig);
      return Type::mk_exp(m->binder, b);
    }
    case Term::Kind::App: {
      TypePtr f = typecheck_term(ctx, m->a, sig);
      if (f->kind != Type::Kind::Exponential)
        throw Error(Errc::TypeMismatch,
                    "applied term has type " + detail::type_str(f, sig.base) +
                        ", which is not an exponential");
      TypePtr x = typecheck_term(ctx, m->b, sig);
      if (!type_equal(x, f->domain()))
        throw Error(Errc::TypeMismatch,
                    "application argument: expected " +
                        detail::type_str(f->domain(), sig.base) + ", found " +
                        detail::type_str(x, sig.base));
      return f->codomain();
    }
    case Term::Kind::Pair: {
      TypePtr l = typecheck_term(ctx, m->a, sig);
      TypePtr r = typecheck_term(ctx, m->b, sig);
      return Type::mk_product(l, r);
    }
    case Term::Kind::Proj1:
    case Term::Kind::Proj2: {
      TypePtr p = typecheck_term(ctx, m->a, sig);
      if (p->kind != Type::Kind::Product)
        throw Error(Errc::TypeMismatch,
                    "projected term has type " + detail::type_str(p, sig.base) +
                        ", which is not a product");
      return m->kind == Term::Kind::Proj1 ? p->a : p->b;
    }
    case Term::Kind::Hole:
      return m->binder;
  }
  throw Error(Errc::IllTyped, "malformed term");
}

// ---------------------------------------------------------------------------
// Normalization by evaluation.
//
// Produces eta-long beta-normal forms: every subterm of exponential type in
// value position is a lambda, every subterm of product type is a pair, and
// every subterm of type 1 is (). Two terms are beta-eta-equal iff their
// normal forms are alpha-equal.
//
// Labels ride along: a label on a node survives as long as that node is not
// consumed by a beta/projection contraction.
// ---------------------------------------------------------------------------

struct Value;
using ValuePtr = std::shared_ptr<const Value>;

struct NeutralElim {
  enum class Kind { App, Proj1, Proj2 };
  Kind kind;
  ValuePtr arg;  // App
  uint32_t label = 0;
};

struct Value {
  enum class Kind { Unit, Pair, Closure, Neutral };
  Kind kind;
  uint32_t label = 0;
  // Pair
  ValuePtr a, b;
  // Closure
  TypePtr binder;
  TermPtr body;
  std::shared_ptr<const std::vector<ValuePtr>> env;
  std::string hint;
  // Neutral
  bool head_is_var = false;
  int level = -1;       // var head
  TypePtr var_type;     // var head type
  int op = -1;          // const head
  std::vector<ValuePtr> cargs;
  uint32_t head_label = 0;
  std::vector<NeutralElim> spine;
};

using Env = std::shared_ptr<const std::vector<ValuePtr>>;

inline Env env_push(const Env& env, ValuePtr v) {
  auto e = env ? std::make_shared<std::vector<ValuePtr>>(*env)
               : std::make_shared<std::vector<ValuePtr>>();
  e->push_back(std::move(v));
  return e;
}

inline ValuePtr v_unit() {
  auto v = std::make_shared<Value>();
  v->kind = Value::Kind::Unit;
  return v;
}
inline ValuePtr v_var(int level, TypePtr ty, uint32_t label = 0) {
  auto v = std::make_shared<Value>();
  v->kind = Value::Kind::Neutral;
  v->head_is_var = true;
  v->level = level;
  v->var_type = std::move(ty);
  v->head_label = label;
  return v;
}

inline ValuePtr eval_term(const TermPtr& t, const Env& env);

inline ValuePtr v_apply(const ValuePtr& f, ValuePtr arg, uint32_t label = 0) {
  if (f->kind == Value::Kind::Closure) {
    return eval_term(f->body, env_push(f->env, std::move(arg)));
  }
  if (f->kind == Value::Kind::Neutral) {
    auto v = std::make_shared<Value>(*f);
    v->spine.push_back({NeutralElim::Kind::App, std::move(arg), label});
    return v;
  }
  throw Error(Errc::IllTyped, "application of a non-function value");
}

inline ValuePtr v_proj(const ValuePtr& p, bool first, uint32_t label = 0) {
  if (p->kind == Value::Kind::Pair) return first ? p->a : p->b;
  if (p->kind == Value::Kind::Neutral) {
    auto v = std::make_shared<Value>(*p);
    v->spine.push_back(
        {first ? NeutralElim::Kind::Proj1 : NeutralElim::Kind::Proj2, nullptr,
         label});
    return v;
  }
  throw Error(Errc::IllTyped, "projection of a non-pair value");
}

inline ValuePtr eval_term(const TermPtr& t, const Env& env) {
  switch (t->kind) {
    case Term::Kind::Var: {
      const auto& e = *env;
      if (t->index < 0 || static_cast<size_t>(t->index) >= e.size())
        throw Error(Errc::UnboundVariable, "eval: unbound variable");
      return e[e.size() - 1 - static_cast<size_t>(t->index)];
    }
    case Term::Kind::Unit: {
      auto v = v_unit();
      return v;
    }
    case Term::Kind::Const: {
      auto v = std::make_shared<Value>();
      v->kind = Value::Kind::Neutral;
      v->head_is_var = false;
      v->op = t->op;
      v->head_label = t->label;
      v->cargs.reserve(t->args.size());
      for (auto& x : t->args) v->cargs.push_back(eval_term(x, env));
      return v;
    }
    case Term::Kind::Lambda: {
      auto v = std::make_shared<Value>();
      v->kind = Value::Kind::Closure;
      v->binder = t->binder;
      v->body = t->a;
      v->env = env;
      v->hint = t->hint;
      v->label = t->label;
      return v;
    }
    case Term::Kind::App:
      return v_apply(eval_term(t->a, env), eval_term(t->b, env), t->label);
    case Term::Kind::Pair: {
      auto v = std::make_shared<Value>();
      v->kind = Value::Kind::Pair;
      v->a = eval_term(t->a, env);
      v->b = eval_term(t->b, env);
      v->label = t->label;
      return v;
    }
    case Term::Kind::Proj1:
      return v_proj(eval_term(t->a, env), true, t->label);
    case Term::Kind::Proj2:
      return v_proj(eval_term(t->a, env), false, t->label);
    case Term::Kind::Hole:
      throw Error(Errc::IllTyped, "eval: hole in term");
  }
  throw Error(Errc::IllTyped, "eval: malformed term");
}

// Reify a neutral value back to a term, computing spine types from the head.
// Returns the reified term and its type.
inline std::pair<TermPtr, TypePtr> reify_neutral(const Value& v,
                                                 const Signature1& sig,
                                                 int depth);
inline TermPtr reify_value(const ValuePtr& v, const TypePtr& type,
                           const Signature1& sig, int depth);

inline std::pair<TermPtr, TypePtr> reify_neutral(const Value& v,
                                                 const Signature1& sig,
                                                 int depth) {
  TermPtr t;
  TypePtr ty;
  if (v.head_is_var) {
    int index = depth - 1 - v.level;
    if (index < 0) throw Error(Errc::UnboundVariable, "reify: level out of range");
    t = Term::var(index);
    if (v.head_label) t = t->with_label(v.head_label);
    ty = v.var_type;
  } else {
    const Sequent& sq = sig.sequent_of(v.op);
    if (sq.premises.size() != v.cargs.size())
      throw Error(Errc::ArityMismatch, "reify: constant arity");
    std::vector<TermPtr> args;
    args.reserve(v.cargs.size());
    for (size_t i = 0; i < v.cargs.size(); ++i)
      args.push_back(reify_value(v.cargs[i], sq.premises[i], sig, depth));
    t = Term::cst(v.op, std::move(args));
    if (v.head_label) t = t->with_label(v.head_label);
    ty = sq.conclusion;
  }
  for (const auto& e : v.spine) {
    switch (e.kind) {
      case NeutralElim::Kind::App: {
        if (ty->kind != Type::Kind::Exponential)
          throw Error(Errc::IllTyped, "reify: bad application spine");
        TermPtr arg = reify_value(e.arg, ty->domain(), sig, depth);
        t = Term::app(t, arg);
        if (e.label) t = t->with_label(e.label);
        ty = ty->codomain();
        break;
      }
      case NeutralElim::Kind::Proj1:
      case NeutralElim::Kind::Proj2: {
        if (ty->kind != Type::Kind::Product)
          throw Error(Errc::IllTyped, "reify: bad projection spine");
        bool first = e.kind == NeutralElim::Kind::Proj1;
        t = first ? Term::proj1(t) : Term::proj2(t);
        if (e.label) t = t->with_label(e.label);
        ty = first ? ty->a : ty->b;
        break;
      }
    }
  }
  return {t, ty};
}

inline TermPtr reify_value(const ValuePtr& v, const TypePtr& type,
                           const Signature1& sig, int depth) {
  switch (type->kind) {
    case Type::Kind::Unit:
      return Term::unit();
    case Type::Kind::Product: {
      TermPtr l = reify_value(v_proj(v, true), type->a, sig, depth);
      TermPtr r = reify_value(v_proj(v, false), type->b, sig, depth);
      auto p = Term::pair(l, r);
      return v->label ? p->with_label(v->label) : p;
    }
    case Type::Kind::Exponential: {
      ValuePtr fresh = v_var(depth, type->domain());
      TermPtr body = reify_value(v_apply(v, fresh), type->codomain(), sig, depth + 1);
      std::string hint =
          v->kind == Value::Kind::Closure && !v->hint.empty() ? v->hint : "x";
      auto l = Term::lam(type->domain(), body, hint);
      return v->label ? l->with_label(v->label) : l;
    }
    case Type::Kind::Sort: {
      if (v->kind != Value::Kind::Neutral)
        throw Error(Errc::IllTyped, "reify: non-neutral value at sort type");
      auto [t, ty] = reify_neutral(*v, sig, depth);
      (void)ty;
      return t;
    }
  }
  throw Error(Errc::IllTyped, "reify: malformed type");
}

// Environment of neutral variables for a top-level context.
inline Env context_env(const Context& ctx) {
  auto e = std::make_shared<std::vector<ValuePtr>>();
  e->reserve(ctx.size());
  for (size_t i = 0; i < ctx.size(); ++i)
    e->push_back(v_var(static_cast<int>(i), ctx.vars[i].second));
  return e;
}

// Eta-long beta-normal form of a well-typed term. Labels are preserved where
// the marked node survives.
inline TermPtr beta_eta_normalize(const Signature2& sig, const Context& ctx,
                                  const TermPtr& m, const TypePtr& type) {
  return reify_value(eval_term(m, context_env(ctx)), type, sig.base,
                     static_cast<int>(ctx.size()));
}

// Convenience: infer the type, then normalize.
inline TermPtr normalize_infer(const Signature2& sig, const Context& ctx,
                               const TermPtr& m) {
  return beta_eta_normalize(sig, ctx, m, typecheck_term(ctx, m, sig));
}

inline bool term_equal(const Signature2& sig, const Context& ctx,
                       const TermPtr& m, const TermPtr& n, const TypePtr& type) {
  return alpha_equal(beta_eta_normalize(sig, ctx, m, type),
                     beta_eta_normalize(sig, ctx, n, type));
}

// Simultaneous substitution, [M1/x1, ..., Mn/xn] in context order (subs[0]
// replaces the first, outermost context variable). Capture-avoiding grafting;
// no normalization.
inline TermPtr subst_term(const TermPtr& m, const std::vector<TermPtr>& subs) {
  std::vector<TermPtr> rev(subs.rbegin(), subs.rend());
  return term_subst(m, rev);
}

// ---------------------------------------------------------------------------
// Tree paths. A path is a list of child indices:
//   Lambda: 0 = body; App: 0 = function, 1 = argument; Pair: 0, 1;
//   Proj1/Proj2: 0; Const: argument index.
// ---------------------------------------------------------------------------

using Path = std::vector<int>;

inline std::string path_str(const Path& p) {
  if (p.empty()) return "/";
  std::string s;
  for (int i : p) {
    s += '/';
    s += std::to_string(i);
  }
  return s;
}

// Lexicographic path order with the prefix (outermost) first.
inline bool path_less(const Path& p, const Path& q) {
  return std::lexicographical_compare(p.begin(), p.end(), q.begin(), q.end());
}

inline bool path_disjoint(const Path& p, const Path& q) {
  size_t n = std::min(p.size(), q.size());
  for (size_t i = 0; i < n; ++i)
    if (p[i] != q[i]) return true;
  return false;
}

inline const TermPtr& child_at(const TermPtr& t, int i) {
  switch (t->kind) {
    case Term::Kind::Lambda:
    case Term::Kind::Proj1:
    case Term::Kind::Proj2:
      if (i == 0) return t->a;
      break;
    case Term::Kind::App:
    case Term::Kind::Pair:
      if (i == 0) return t->a;
      if (i == 1) return t->b;
      break;
    case Term::Kind::Const:
      if (i >= 0 && static_cast<size_t>(i) < t->args.size())
        return t->args[static_cast<size_t>(i)];
      break;
    default: break;
  }
  throw Error(Errc::InvalidStep, "path does not exist in term");
}

inline TermPtr subterm_at(const TermPtr& t, const Path& p, size_t from = 0) {
  TermPtr cur = t;
  for (size_t i = from; i < p.size(); ++i) cur = child_at(cur, p[i]);
  return cur;
}

inline TermPtr replace_at(const TermPtr& t, const Path& p, const TermPtr& s,
                          size_t from = 0) {
  if (from == p.size()) return s;
  int i = p[from];
  auto r = std::make_shared<Term>(*t);
  switch (t->kind) {
    case Term::Kind::Lambda:
    case Term::Kind::Proj1:
    case Term::Kind::Proj2:
      r->a = replace_at(t->a, p, s, from + 1);
      return r;
    case Term::Kind::App:
    case Term::Kind::Pair:
      if (i == 0)
        r->a = replace_at(t->a, p, s, from + 1);
      else
        r->b = replace_at(t->b, p, s, from + 1);
      return r;
    case Term::Kind::Const:
      r->args[static_cast<size_t>(i)] = replace_at(t->args[static_cast<size_t>(i)], p, s, from + 1);
      return r;
    default:
      throw Error(Errc::InvalidStep, "path does not exist in term");
  }
}

// Number of binders crossed along a path.
inline int binders_along(const TermPtr& t, const Path& p) {
  int n = 0;
  TermPtr cur = t;
  for (int i : p) {
    if (cur->kind == Term::Kind::Lambda) ++n;
    cur = child_at(cur, i);
  }
  return n;
}

// Binder types crossed along a path, outermost first.
inline std::vector<std::pair<std::string, TypePtr>> binders_list(
    const TermPtr& t, const Path& p) {
  std::vector<std::pair<std::string, TypePtr>> out;
  TermPtr cur = t;
  for (int i : p) {
    if (cur->kind == Term::Kind::Lambda) out.emplace_back(cur->hint, cur->binder);
    cur = child_at(cur, i);
  }
  return out;
}

// All nodes carrying the given label, in path-lexicographic order.
inline void labelled_positions(const TermPtr& t, uint32_t label,
                               std::vector<Path>& out, Path& cur) {
  if (t->label == label) out.push_back(cur);
  auto rec = [&](const TermPtr& c, int i) {
    cur.push_back(i);
    labelled_positions(c, label, out, cur);
    cur.pop_back();
  };
  switch (t->kind) {
    case Term::Kind::Const:
      for (size_t i = 0; i < t->args.size(); ++i)
        rec(t->args[i], static_cast<int>(i));
      break;
    case Term::Kind::Lambda:
    case Term::Kind::Proj1:
    case Term::Kind::Proj2:
      rec(t->a, 0);
      break;
    case Term::Kind::App:
    case Term::Kind::Pair:
      rec(t->a, 0);
      rec(t->b, 1);
      break;
    default: break;
  }
}

inline std::vector<Path> labelled_positions(const TermPtr& t, uint32_t label) {
  std::vector<Path> out;
  Path cur;
  labelled_positions(t, label, out, cur);
  return out;
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

inline void print_type_rec(std::ostream& os, const TypePtr& t,
                           const Signature1& sig, int prec) {
  switch (t->kind) {
    case Type::Kind::Sort:
      os << sig.sort_names[static_cast<size_t>(t->sort)];
      return;
    case Type::Kind::Unit:
      os << "1";
      return;
    case Type::Kind::Product:
      // 'A * B': right-associative, binds tighter than '^'.
      if (prec > 1) os << "(";
      print_type_rec(os, t->a, sig, 2);
      os << " * ";
      print_type_rec(os, t->b, sig, 1);
      if (prec > 1) os << ")";
      return;
    case Type::Kind::Exponential:
      // 'B ^ A': right-associative in A.
      if (prec > 0) os << "(";
      print_type_rec(os, t->b, sig, 1);
      os << " ^ ";
      print_type_rec(os, t->a, sig, 0);
      if (prec > 0) os << ")";
      return;
  }
}

inline std::string print_type(const TypePtr& t, const Signature1& sig) {
  std::ostringstream os;
  print_type_rec(os, t, sig, 0);
  return os.str();
}

namespace detail {
inline std::string type_str(const TypePtr& t, const Signature1& sig) {
  return print_type(t, sig);
}
}  // namespace detail

// Precedence: 0 = lambda body, 1 = application, 2 = atom.
inline void print_term_rec(std::ostream& os, const TermPtr& t,
                           const Signature1& sig,
                           std::vector<std::string>& names, int prec) {
  switch (t->kind) {
    case Term::Kind::Var: {
      size_t i = names.size() - 1 - static_cast<size_t>(t->index);
      os << names[i];
      return;
    }
    case Term::Kind::Unit:
      os << "()";
      return;
    case Term::Kind::Const: {
      os << sig.op_names[static_cast<size_t>(t->op)] << "(";
      for (size_t i = 0; i < t->args.size(); ++i) {
        if (i) os << ", ";
        print_term_rec(os, t->args[i], sig, names, 0);
      }
      os << ")";
      return;
    }
    case Term::Kind::Lambda: {
      if (prec > 0) os << "(";
      std::string base = t->hint.empty() ? "x" : t->hint;
      std::string name = base;
      int k = 0;
      while (std::find(names.begin(), names.end(), name) != names.end())
        name = base + std::to_string(++k);
      os << "\\" << name << ":";
      print_type_rec(os, t->binder, sig, 2);
      os << ". ";
      names.push_back(name);
      print_term_rec(os, t->a, sig, names, 0);
      names.pop_back();
      if (prec > 0) os << ")";
      return;
    }
    case Term::Kind::App: {
      if (prec > 1) os << "(";
      print_term_rec(os, t->a, sig, names, 1);
      os << " ";
      print_term_rec(os, t->b, sig, names, 2);
      if (prec > 1) os << ")";
      return;
    }
    case Term::Kind::Pair: {
      os << "(";
      print_term_rec(os, t->a, sig, names, 0);
      os << ", ";
      print_term_rec(os, t->b, sig, names, 0);
      os << ")";
      return;
    }
    case Term::Kind::Proj1:
    case Term::Kind::Proj2: {
      if (prec > 1) os << "(";
      os << (t->kind == Term::Kind::Proj1 ? "fst " : "snd ");
      print_term_rec(os, t->a, sig, names, 2);
      if (prec > 1) os << ")";
      return;
    }
    case Term::Kind::Hole:
      os << "[]";
      return;
  }
}

inline std::string print_term(const TermPtr& t, const Signature1& sig,
                              const Context& ctx) {
  std::vector<std::string> names;
  names.reserve(ctx.size());
  for (auto& v : ctx.vars) names.push_back(v.first);
  std::ostringstream os;
  print_term_rec(os, t, sig, names, 0);
  return os.str();
}

inline std::string print_context(const Context& ctx, const Signature1& sig) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < ctx.size(); ++i) {
    if (i) os << ", ";
    os << ctx.vars[i].first << ":" << print_type(ctx.vars[i].second, sig);
  }
  os << "]";
  return os.str();
}

// Canonical de Bruijn key for dedup sets: independent of name hints/labels.
inline void type_key_rec(std::ostream& os, const TypePtr& t) {
  switch (t->kind) {
    case Type::Kind::Sort: os << "s" << t->sort; return;
    case Type::Kind::Unit: os << "1"; return;
    case Type::Kind::Product:
      os << "(";
      type_key_rec(os, t->a);
      os << "*";
      type_key_rec(os, t->b);
      os << ")";
      return;
    case Type::Kind::Exponential:
      os << "(";
      type_key_rec(os, t->b);
      os << "^";
      type_key_rec(os, t->a);
      os << ")";
      return;
  }
}

inline void term_key_rec(std::ostream& os, const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Var: os << "v" << t->index; return;
    case Term::Kind::Unit: os << "u"; return;
    case Term::Kind::Const: {
      os << "c" << t->op << "(";
      for (auto& a : t->args) {
        term_key_rec(os, a);
        os << ",";
      }
      os << ")";
      return;
    }
    case Term::Kind::Lambda: {
      os << "l[";
      type_key_rec(os, t->binder);
      os << "].";
      term_key_rec(os, t->a);
      return;
    }
    case Term::Kind::App:
      os << "a(";
      term_key_rec(os, t->a);
      os << " ";
      term_key_rec(os, t->b);
      os << ")";
      return;
    case Term::Kind::Pair:
      os << "p(";
      term_key_rec(os, t->a);
      os << ",";
      term_key_rec(os, t->b);
      os << ")";
      return;
    case Term::Kind::Proj1: os << "1."; term_key_rec(os, t->a); return;
    case Term::Kind::Proj2: os << "2."; term_key_rec(os, t->a); return;
    case Term::Kind::Hole: os << "H"; return;
  }
}

inline std::string term_key(const TermPtr& t) {
  std::ostringstream os;
  term_key_rec(os, t);
  return os.str();
}

}  // namespace perm2
