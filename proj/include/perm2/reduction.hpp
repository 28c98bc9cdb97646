#pragma once

#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "perm2/kernel.hpp"
#include "perm2/signature.hpp"

namespace perm2 {

// ---------------------------------------------------------------------------
// Reductions: proof terms witnessing rewrites M -> N, built from rule
// applications, vertical composition and one congruence former per term
// constructor. A term embeds as the congruence-only identity reduction on
// itself; VarRefl/UnitRefl are the leaves of that embedding.
//
// The middle term of a vertical composition is stored explicitly, in
// beta-eta-normal form.
// ---------------------------------------------------------------------------

struct Reduction;
using RedPtr = std::shared_ptr<const Reduction>;

struct Reduction {
  enum class Kind {
    RuleApp,
    VComp,
    VarRefl,
    UnitRefl,
    ConstCong,
    LambdaCong,
    AppCong,
    PairCong,
    Proj1Cong,
    Proj2Cong
  };
  Kind kind;
  int index = -1;            // VarRefl
  int op = -1;               // ConstCong
  int rule = -1;             // RuleApp
  TypePtr binder;            // LambdaCong
  TermPtr mid;               // VComp middle, beta-eta-normal
  RedPtr a, b;               // VComp: a;b. LambdaCong/Proj: a. AppCong/PairCong: a,b.
  std::vector<RedPtr> args;  // RuleApp, ConstCong
  std::string hint;          // LambdaCong binder name hint

  static RedPtr var(int i) {
    auto r = std::make_shared<Reduction>();
    r->kind = Kind::VarRefl;
    r->index = i;
    return r;
  }
  static RedPtr unit() {
    auto r = std::make_shared<Reduction>();
    r->kind = Kind::UnitRefl;
    return r;
  }
  static RedPtr rule_app(int rule, std::vector<RedPtr> args) {
    auto r = std::make_shared<Reduction>();
    r->kind = Kind::RuleApp;
    r->rule = rule;
    r->args = std::move(args);
    return r;
  }
  static RedPtr vcomp(RedPtr p, TermPtr mid, RedPtr q) {
    auto r = std::make_shared<Reduction>();
    r->kind = Kind::VComp;
    r->a = std::move(p);
    r->mid = std::move(mid);
    r->b = std::move(q);
    return r;
  }
  static RedPtr cst(int op, std::vector<RedPtr> args) {
    auto r = std::make_shared<Reduction>();
    r->kind = Kind::ConstCong;
    r->op = op;
    r->args = std::move(args);
    return r;
  }
  static RedPtr lam(TypePtr ty, RedPtr body, std::string hint = "x") {
    auto r = std::make_shared<Reduction>();
    r->kind = Kind::LambdaCong;
    r->binder = std::move(ty);
    r->a = std::move(body);
    r->hint = std::move(hint);
    return r;
  }
  static RedPtr app(RedPtr f, RedPtr x) {
    auto r = std::make_shared<Reduction>();
    r->kind = Kind::AppCong;
    r->a = std::move(f);
    r->b = std::move(x);
    return r;
  }
  static RedPtr pair(RedPtr l, RedPtr x) {
    auto r = std::make_shared<Reduction>();
    r->kind = Kind::PairCong;
    r->a = std::move(l);
    r->b = std::move(x);
    return r;
  }
  static RedPtr proj1(RedPtr p) {
    auto r = std::make_shared<Reduction>();
    r->kind = Kind::Proj1Cong;
    r->a = std::move(p);
    return r;
  }
  static RedPtr proj2(RedPtr p) {
    auto r = std::make_shared<Reduction>();
    r->kind = Kind::Proj2Cong;
    r->a = std::move(p);
    return r;
  }
};

// True iff the reduction is congruence-only (an identity embedding of a term).
inline bool is_identity_reduction(const RedPtr& p) {
  switch (p->kind) {
    case Reduction::Kind::RuleApp:
    case Reduction::Kind::VComp: return false;
    case Reduction::Kind::VarRefl:
    case Reduction::Kind::UnitRefl: return true;
    case Reduction::Kind::ConstCong: {
      for (auto& x : p->args)
        if (!is_identity_reduction(x)) return false;
      return true;
    }
    case Reduction::Kind::LambdaCong:
    case Reduction::Kind::Proj1Cong:
    case Reduction::Kind::Proj2Cong:
      return is_identity_reduction(p->a);
    case Reduction::Kind::AppCong:
    case Reduction::Kind::PairCong:
      return is_identity_reduction(p->a) && is_identity_reduction(p->b);
  }
  return false;
}

inline bool has_rule_app(const RedPtr& p) {
  switch (p->kind) {
    case Reduction::Kind::RuleApp: return true;
    case Reduction::Kind::VarRefl:
    case Reduction::Kind::UnitRefl: return false;
    case Reduction::Kind::ConstCong: {
      for (auto& x : p->args)
        if (has_rule_app(x)) return true;
      return false;
    }
    case Reduction::Kind::VComp:
    case Reduction::Kind::AppCong:
    case Reduction::Kind::PairCong:
      return has_rule_app(p->a) || has_rule_app(p->b);
    case Reduction::Kind::LambdaCong:
    case Reduction::Kind::Proj1Cong:
    case Reduction::Kind::Proj2Cong:
      return has_rule_app(p->a);
  }
  return false;
}

inline bool has_vcomp(const RedPtr& p) {
  switch (p->kind) {
    case Reduction::Kind::VComp: return true;
    case Reduction::Kind::VarRefl:
    case Reduction::Kind::UnitRefl: return false;
    case Reduction::Kind::RuleApp:
    case Reduction::Kind::ConstCong: {
      for (auto& x : p->args)
        if (has_vcomp(x)) return true;
      return false;
    }
    case Reduction::Kind::LambdaCong:
    case Reduction::Kind::Proj1Cong:
    case Reduction::Kind::Proj2Cong:
      return has_vcomp(p->a);
    case Reduction::Kind::AppCong:
    case Reduction::Kind::PairCong:
      return has_vcomp(p->a) || has_vcomp(p->b);
  }
  return false;
}

inline int reduction_size(const RedPtr& p) {
  switch (p->kind) {
    case Reduction::Kind::VarRefl:
    case Reduction::Kind::UnitRefl: return 1;
    case Reduction::Kind::RuleApp:
    case Reduction::Kind::ConstCong: {
      int s = 1;
      for (auto& x : p->args) s += reduction_size(x);
      return s;
    }
    case Reduction::Kind::VComp:
      return 1 + reduction_size(p->a) + reduction_size(p->b);
    case Reduction::Kind::LambdaCong:
    case Reduction::Kind::Proj1Cong:
    case Reduction::Kind::Proj2Cong:
      return 1 + reduction_size(p->a);
    case Reduction::Kind::AppCong:
    case Reduction::Kind::PairCong:
      return 1 + reduction_size(p->a) + reduction_size(p->b);
  }
  return 1;
}

// Structural (alpha) equality; middles compared as terms, hints ignored.
inline bool red_equal(const RedPtr& x, const RedPtr& y) {
  if (x.get() == y.get()) return true;
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case Reduction::Kind::VarRefl: return x->index == y->index;
    case Reduction::Kind::UnitRefl: return true;
    case Reduction::Kind::RuleApp:
    case Reduction::Kind::ConstCong: {
      if (x->rule != y->rule || x->op != y->op ||
          x->args.size() != y->args.size())
        return false;
      for (size_t i = 0; i < x->args.size(); ++i)
        if (!red_equal(x->args[i], y->args[i])) return false;
      return true;
    }
    case Reduction::Kind::VComp:
      return alpha_equal(x->mid, y->mid) && red_equal(x->a, y->a) &&
             red_equal(x->b, y->b);
    case Reduction::Kind::LambdaCong:
      return type_equal(x->binder, y->binder) && red_equal(x->a, y->a);
    case Reduction::Kind::AppCong:
    case Reduction::Kind::PairCong:
      return red_equal(x->a, y->a) && red_equal(x->b, y->b);
    case Reduction::Kind::Proj1Cong:
    case Reduction::Kind::Proj2Cong:
      return red_equal(x->a, y->a);
  }
  return false;
}

// Shift free de Bruijn indices (variables and embedded terms) by d.
inline RedPtr red_shift(const RedPtr& p, int d, int cutoff = 0) {
  if (d == 0) return p;
  switch (p->kind) {
    case Reduction::Kind::VarRefl:
      if (p->index >= cutoff) return Reduction::var(p->index + d);
      return p;
    case Reduction::Kind::UnitRefl: return p;
    case Reduction::Kind::RuleApp:
    case Reduction::Kind::ConstCong: {
      auto r = std::make_shared<Reduction>(*p);
      for (auto& x : r->args) x = red_shift(x, d, cutoff);
      return r;
    }
    case Reduction::Kind::VComp: {
      auto r = std::make_shared<Reduction>(*p);
      r->a = red_shift(p->a, d, cutoff);
      r->b = red_shift(p->b, d, cutoff);
      r->mid = term_shift(p->mid, d, cutoff);
      return r;
    }
    case Reduction::Kind::LambdaCong: {
      auto r = std::make_shared<Reduction>(*p);
      r->a = red_shift(p->a, d, cutoff + 1);
      return r;
    }
    case Reduction::Kind::AppCong:
    case Reduction::Kind::PairCong: {
      auto r = std::make_shared<Reduction>(*p);
      r->a = red_shift(p->a, d, cutoff);
      r->b = red_shift(p->b, d, cutoff);
      return r;
    }
    case Reduction::Kind::Proj1Cong:
    case Reduction::Kind::Proj2Cong: {
      auto r = std::make_shared<Reduction>(*p);
      r->a = red_shift(p->a, d, cutoff);
      return r;
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Typing (Fig.-1-style judgment). typecheck_reduction returns the unique
// triple (source, target, type) with source/target beta-eta-normal.
// ---------------------------------------------------------------------------

struct Triple {
  TermPtr source, target;
  TypePtr type;
};

inline Triple typecheck_reduction(const Context& ctx, const RedPtr& p,
                                  const Signature2& sig) {
  switch (p->kind) {
    case Reduction::Kind::VarRefl: {
      if (p->index < 0 || static_cast<size_t>(p->index) >= ctx.size())
        throw Error(Errc::UnboundVariable, "reduction: unbound variable");
      TypePtr a = ctx.type_of(p->index);
      TermPtr v = beta_eta_normalize(sig, ctx, Term::var(p->index), a);
      return {v, v, a};
    }
    case Reduction::Kind::UnitRefl:
      return {Term::unit(), Term::unit(), Type::mk_unit()};
    case Reduction::Kind::RuleApp: {
      const RewriteRule& r = sig.rule(p->rule);
      if (r.ctx.size() != p->args.size())
        throw Error(Errc::ArityMismatch,
                    "rule " + r.name + ": expected " +
                        std::to_string(r.ctx.size()) + " arguments, got " +
                        std::to_string(p->args.size()));
      std::vector<TermPtr> srcs, tgts;
      srcs.reserve(p->args.size());
      tgts.reserve(p->args.size());
      for (size_t i = 0; i < p->args.size(); ++i) {
        Triple t = typecheck_reduction(ctx, p->args[i], sig);
        if (!type_equal(t.type, r.ctx.vars[i].second))
          throw Error(Errc::TypeMismatch,
                      "rule " + r.name + " argument " + std::to_string(i + 1) +
                          ": expected " + print_type(r.ctx.vars[i].second, sig.base) +
                          ", found " + print_type(t.type, sig.base));
        srcs.push_back(t.source);
        tgts.push_back(t.target);
      }
      TermPtr src = beta_eta_normalize(sig, ctx, subst_term(r.lhs, srcs), r.type);
      TermPtr tgt = beta_eta_normalize(sig, ctx, subst_term(r.rhs, tgts), r.type);
      return {src, tgt, r.type};
    }
    case Reduction::Kind::VComp: {
      Triple ta = typecheck_reduction(ctx, p->a, sig);
      Triple tb = typecheck_reduction(ctx, p->b, sig);
      if (!type_equal(ta.type, tb.type))
        throw Error(Errc::TypeMismatch, "vertical composition of different types");
      TermPtr mid = beta_eta_normalize(sig, ctx, p->mid, ta.type);
      if (!alpha_equal(ta.target, mid))
        throw Error(Errc::MiddleMismatch,
                    "middle term mismatch: expected " +
                        print_term(ta.target, sig.base, ctx) + ", found " +
                        print_term(mid, sig.base, ctx));
      if (!alpha_equal(mid, tb.source))
        throw Error(Errc::MiddleMismatch,
                    "middle term mismatch: right source is " +
                        print_term(tb.source, sig.base, ctx) + ", middle is " +
                        print_term(mid, sig.base, ctx));
      return {ta.source, tb.target, ta.type};
    }
    case Reduction::Kind::ConstCong: {
      if (p->op < 0 || static_cast<size_t>(p->op) >= sig.base.op_names.size())
        throw Error(Errc::UnknownConstant, "unknown constant in reduction");
      const Sequent& sq = sig.base.sequent_of(p->op);
      if (sq.premises.size() != p->args.size())
        throw Error(Errc::ArityMismatch,
                    sig.base.op_names[p->op] + ": arity mismatch in reduction");
      std::vector<TermPtr> srcs, tgts;
      for (size_t i = 0; i < p->args.size(); ++i) {
        Triple t = typecheck_reduction(ctx, p->args[i], sig);
        if (!type_equal(t.type, sq.premises[i]))
          throw Error(Errc::TypeMismatch,
                      sig.base.op_names[p->op] + " argument " +
                          std::to_string(i + 1) + " has wrong type");
        srcs.push_back(t.source);
        tgts.push_back(t.target);
      }
      TermPtr src = beta_eta_normalize(sig, ctx, Term::cst(p->op, srcs), sq.conclusion);
      TermPtr tgt = beta_eta_normalize(sig, ctx, Term::cst(p->op, tgts), sq.conclusion);
      return {src, tgt, sq.conclusion};
    }
    case Reduction::Kind::LambdaCong: {
      if (!type_wf(p->binder, sig.base))
        throw Error(Errc::UnknownSort, "lambda binder mentions unknown sort");
      Context c2 = ctx.extended(fresh_name(ctx, p->hint), p->binder);
      Triple t = typecheck_reduction(c2, p->a, sig);
      TypePtr ty = Type::mk_exp(p->binder, t.type);
      return {Term::lam(p->binder, t.source, p->hint),
              Term::lam(p->binder, t.target, p->hint), ty};
    }
    case Reduction::Kind::AppCong: {
      Triple tf = typecheck_reduction(ctx, p->a, sig);
      if (tf.type->kind != Type::Kind::Exponential)
        throw Error(Errc::TypeMismatch, "applied reduction is not at an exponential");
      Triple tx = typecheck_reduction(ctx, p->b, sig);
      if (!type_equal(tx.type, tf.type->domain()))
        throw Error(Errc::TypeMismatch, "reduction application argument type");
      TypePtr ty = tf.type->codomain();
      return {beta_eta_normalize(sig, ctx, Term::app(tf.source, tx.source), ty),
              beta_eta_normalize(sig, ctx, Term::app(tf.target, tx.target), ty),
              ty};
    }
    case Reduction::Kind::PairCong: {
      Triple tl = typecheck_reduction(ctx, p->a, sig);
      Triple tr = typecheck_reduction(ctx, p->b, sig);
      TypePtr ty = Type::mk_product(tl.type, tr.type);
      return {Term::pair(tl.source, tr.source), Term::pair(tl.target, tr.target),
              ty};
    }
    case Reduction::Kind::Proj1Cong:
    case Reduction::Kind::Proj2Cong: {
      Triple t = typecheck_reduction(ctx, p->a, sig);
      if (t.type->kind != Type::Kind::Product)
        throw Error(Errc::TypeMismatch, "projected reduction is not at a product");
      bool first = p->kind == Reduction::Kind::Proj1Cong;
      TypePtr ty = first ? t.type->a : t.type->b;
      TermPtr src = first ? Term::proj1(t.source) : Term::proj2(t.source);
      TermPtr tgt = first ? Term::proj1(t.target) : Term::proj2(t.target);
      return {beta_eta_normalize(sig, ctx, src, ty),
              beta_eta_normalize(sig, ctx, tgt, ty), ty};
    }
  }
  throw Error(Errc::IllTyped, "malformed reduction");
}

// The congruence-only reduction with source = target = m.
inline RedPtr identity_reduction(const TermPtr& m) {
  switch (m->kind) {
    case Term::Kind::Var: return Reduction::var(m->index);
    case Term::Kind::Unit: return Reduction::unit();
    case Term::Kind::Const: {
      std::vector<RedPtr> args;
      args.reserve(m->args.size());
      for (auto& x : m->args) args.push_back(identity_reduction(x));
      return Reduction::cst(m->op, std::move(args));
    }
    case Term::Kind::Lambda:
      return Reduction::lam(m->binder, identity_reduction(m->a), m->hint);
    case Term::Kind::App:
      return Reduction::app(identity_reduction(m->a), identity_reduction(m->b));
    case Term::Kind::Pair:
      return Reduction::pair(identity_reduction(m->a), identity_reduction(m->b));
    case Term::Kind::Proj1: return Reduction::proj1(identity_reduction(m->a));
    case Term::Kind::Proj2: return Reduction::proj2(identity_reduction(m->a));
    case Term::Kind::Hole:
      throw Error(Errc::IllTyped, "identity_reduction of a context hole");
  }
  throw Error(Errc::IllTyped, "identity_reduction: malformed term");
}

// Source term of a congruence-only reduction (the embedded term itself).
inline TermPtr identity_term(const RedPtr& p) {
  switch (p->kind) {
    case Reduction::Kind::VarRefl: return Term::var(p->index);
    case Reduction::Kind::UnitRefl: return Term::unit();
    case Reduction::Kind::ConstCong: {
      std::vector<TermPtr> args;
      for (auto& x : p->args) args.push_back(identity_term(x));
      return Term::cst(p->op, std::move(args));
    }
    case Reduction::Kind::LambdaCong:
      return Term::lam(p->binder, identity_term(p->a), p->hint);
    case Reduction::Kind::AppCong:
      return Term::app(identity_term(p->a), identity_term(p->b));
    case Reduction::Kind::PairCong:
      return Term::pair(identity_term(p->a), identity_term(p->b));
    case Reduction::Kind::Proj1Cong: return Term::proj1(identity_term(p->a));
    case Reduction::Kind::Proj2Cong: return Term::proj2(identity_term(p->a));
    default:
      throw Error(Errc::IllTyped, "identity_term: reduction is not an identity");
  }
}

// ---------------------------------------------------------------------------
// Judgments
// ---------------------------------------------------------------------------

struct ReductionJudgment {
  Context ctx;
  RedPtr proof;
  TermPtr source, target;
  TypePtr type;
};

inline ReductionJudgment make_judgment(const Signature2& sig, const Context& ctx,
                                       const RedPtr& p) {
  Triple t = typecheck_reduction(ctx, p, sig);
  return {ctx, p, t.source, t.target, t.type};
}

// Extends the context by a fresh variable; the proof and endpoints are
// shifted so the judgment typechecks unchanged.
inline ReductionJudgment weaken(const ReductionJudgment& j, const std::string& x,
                                const TypePtr& b) {
  Context c2 = j.ctx.extended(x, b);  // throws DuplicateVariable
  return {c2, red_shift(j.proof, 1), term_shift(j.source, 1),
          term_shift(j.target, 1), j.type};
}

// ---------------------------------------------------------------------------
// Printing (surface proof grammar; identities print as their terms)
// ---------------------------------------------------------------------------

// Precedence: 0 = vcomp level, 1 = lambda body, 2 = application, 3 = atom.
inline void print_red_rec(std::ostream& os, const RedPtr& p,
                          const Signature2& sig,
                          std::vector<std::string>& names, int prec) {
  switch (p->kind) {
    case Reduction::Kind::VarRefl: {
      size_t i = names.size() - 1 - static_cast<size_t>(p->index);
      os << names[i];
      return;
    }
    case Reduction::Kind::UnitRefl:
      os << "()";
      return;
    case Reduction::Kind::RuleApp: {
      os << sig.rule(p->rule).name << "<";
      for (size_t i = 0; i < p->args.size(); ++i) {
        if (i) os << ", ";
        print_red_rec(os, p->args[i], sig, names, 0);
      }
      os << ">";
      return;
    }
    case Reduction::Kind::VComp: {
      if (prec > 0) os << "(";
      print_red_rec(os, p->a, sig, names, 1);
      os << " ; ";
      print_red_rec(os, p->b, sig, names, 0);
      if (prec > 0) os << ")";
      return;
    }
    case Reduction::Kind::ConstCong: {
      os << sig.base.op_names[static_cast<size_t>(p->op)] << "(";
      for (size_t i = 0; i < p->args.size(); ++i) {
        if (i) os << ", ";
        print_red_rec(os, p->args[i], sig, names, 0);
      }
      os << ")";
      return;
    }
    case Reduction::Kind::LambdaCong: {
      if (prec > 1) os << "(";
      std::string base = p->hint.empty() ? "x" : p->hint;
      std::string name = base;
      int k = 0;
      while (std::find(names.begin(), names.end(), name) != names.end())
        name = base + std::to_string(++k);
      os << "\\" << name << ":";
      print_type_rec(os, p->binder, sig.base, 2);
      os << ". ";
      names.push_back(name);
      print_red_rec(os, p->a, sig, names, 1);
      names.pop_back();
      if (prec > 1) os << ")";
      return;
    }
    case Reduction::Kind::AppCong: {
      if (prec > 2) os << "(";
      print_red_rec(os, p->a, sig, names, 2);
      os << " ";
      print_red_rec(os, p->b, sig, names, 3);
      if (prec > 2) os << ")";
      return;
    }
    case Reduction::Kind::PairCong: {
      os << "(";
      print_red_rec(os, p->a, sig, names, 0);
      os << ", ";
      print_red_rec(os, p->b, sig, names, 0);
      os << ")";
      return;
    }
    case Reduction::Kind::Proj1Cong:
    case Reduction::Kind::Proj2Cong: {
      if (prec > 2) os << "(";
      os << (p->kind == Reduction::Kind::Proj1Cong ? "fst " : "snd ");
      print_red_rec(os, p->a, sig, names, 3);
      if (prec > 2) os << ")";
      return;
    }
  }
}

inline std::string print_reduction(const RedPtr& p, const Signature2& sig,
                                   const Context& ctx) {
  std::vector<std::string> names;
  for (auto& v : ctx.vars) names.push_back(v.first);
  std::ostringstream os;
  print_red_rec(os, p, sig, names, 0);
  return os.str();
}

// Canonical structural key (dedup in closures and sets).
inline void red_key_rec(std::ostream& os, const RedPtr& p) {
  switch (p->kind) {
    case Reduction::Kind::VarRefl: os << "v" << p->index; return;
    case Reduction::Kind::UnitRefl: os << "u"; return;
    case Reduction::Kind::RuleApp: {
      os << "R" << p->rule << "(";
      for (auto& a : p->args) {
        red_key_rec(os, a);
        os << ",";
      }
      os << ")";
      return;
    }
    case Reduction::Kind::VComp: {
      os << "V[";
      term_key_rec(os, p->mid);
      os << "](";
      red_key_rec(os, p->a);
      os << ";";
      red_key_rec(os, p->b);
      os << ")";
      return;
    }
    case Reduction::Kind::ConstCong: {
      os << "c" << p->op << "(";
      for (auto& a : p->args) {
        red_key_rec(os, a);
        os << ",";
      }
      os << ")";
      return;
    }
    case Reduction::Kind::LambdaCong: {
      os << "l[";
      type_key_rec(os, p->binder);
      os << "].";
      red_key_rec(os, p->a);
      return;
    }
    case Reduction::Kind::AppCong:
      os << "a(";
      red_key_rec(os, p->a);
      os << " ";
      red_key_rec(os, p->b);
      os << ")";
      return;
    case Reduction::Kind::PairCong:
      os << "p(";
      red_key_rec(os, p->a);
      os << ",";
      red_key_rec(os, p->b);
      os << ")";
      return;
    case Reduction::Kind::Proj1Cong: os << "1."; red_key_rec(os, p->a); return;
    case Reduction::Kind::Proj2Cong: os << "2."; red_key_rec(os, p->a); return;
  }
}

inline std::string red_key(const RedPtr& p) {
  std::ostringstream os;
  red_key_rec(os, p);
  return os.str();
}

}  // namespace perm2
