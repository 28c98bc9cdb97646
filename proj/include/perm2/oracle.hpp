#pragma once

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "perm2/permeq.hpp"
#include "perm2/reduction.hpp"
#include "perm2/whisker.hpp"

namespace perm2 {

// ---------------------------------------------------------------------------
// The equation schemas on reductions: 11 congruence, 3 category, 6 beta-eta,
// 8 lifting. The oracle applies the 17 non-bureaucratic schemas as rewrites
// in both orientations at all proof positions; reflexivity, symmetry and
// transitivity are realized by the closure itself, the remaining congruence
// rules by position application.
// ---------------------------------------------------------------------------

enum class Equation {
  CongRefl,
  CongSym,
  CongTrans,
  CongVComp,
  CongRule,
  CongConst,
  CongLam,
  CongApp,
  CongPair,
  CongProj1,
  CongProj2,
  CatAssoc,
  CatUnitR,
  CatUnitL,
  BetaArrow,
  EtaArrow,
  BetaProj1,
  BetaProj2,
  EtaPair,
  EtaUnit,
  LiftRuleL,
  LiftRuleR,
  LiftConst,
  LiftLam,
  LiftApp,
  LiftPair,
  LiftProj1,
  LiftProj2,
};

inline const std::vector<std::pair<std::string, Equation>>& equation_table() {
  static const std::vector<std::pair<std::string, Equation>> table = {
      {"cong-refl", Equation::CongRefl},   {"cong-sym", Equation::CongSym},
      {"cong-trans", Equation::CongTrans}, {"cong-vcomp", Equation::CongVComp},
      {"cong-rule", Equation::CongRule},   {"cong-const", Equation::CongConst},
      {"cong-lam", Equation::CongLam},     {"cong-app", Equation::CongApp},
      {"cong-pair", Equation::CongPair},   {"cong-proj1", Equation::CongProj1},
      {"cong-proj2", Equation::CongProj2}, {"cat-assoc", Equation::CatAssoc},
      {"cat-unit-r", Equation::CatUnitR},  {"cat-unit-l", Equation::CatUnitL},
      {"beta-arrow", Equation::BetaArrow}, {"eta-arrow", Equation::EtaArrow},
      {"beta-proj1", Equation::BetaProj1}, {"beta-proj2", Equation::BetaProj2},
      {"eta-pair", Equation::EtaPair},     {"eta-unit", Equation::EtaUnit},
      {"lift-rule-l", Equation::LiftRuleL},{"lift-rule-r", Equation::LiftRuleR},
      {"lift-const", Equation::LiftConst}, {"lift-lam", Equation::LiftLam},
      {"lift-app", Equation::LiftApp},     {"lift-pair", Equation::LiftPair},
      {"lift-proj1", Equation::LiftProj1}, {"lift-proj2", Equation::LiftProj2},
  };
  return table;
}

inline Equation equation_by_name(const std::string& name) {
  for (auto& [n, e] : equation_table())
    if (n == name) return e;
  throw Error(Errc::UnknownEquation, "unknown equation " + name);
}

inline std::string equation_name(Equation e) {
  for (auto& [n, x] : equation_table())
    if (x == e) return n;
  return "?";
}

namespace oracle_detail {

// Does the proof mention de Bruijn index `idx` (variables or middle terms)?
inline bool red_uses_var(const RedPtr& p, int idx) {
  switch (p->kind) {
    case Reduction::Kind::VarRefl: return p->index == idx;
    case Reduction::Kind::UnitRefl: return false;
    case Reduction::Kind::RuleApp:
    case Reduction::Kind::ConstCong: {
      for (auto& a : p->args)
        if (red_uses_var(a, idx)) return true;
      return false;
    }
    case Reduction::Kind::VComp:
      return free_vars(p->mid).count(idx) || red_uses_var(p->a, idx) ||
             red_uses_var(p->b, idx);
    case Reduction::Kind::LambdaCong: return red_uses_var(p->a, idx + 1);
    case Reduction::Kind::AppCong:
    case Reduction::Kind::PairCong:
      return red_uses_var(p->a, idx) || red_uses_var(p->b, idx);
    case Reduction::Kind::Proj1Cong:
    case Reduction::Kind::Proj2Cong: return red_uses_var(p->a, idx);
  }
  return false;
}

// Single-variable substitution of the paper (section on substitution):
// P[Q/x] over Gamma for P over Gamma, x:A.
inline RedPtr paper_subst_single(const Signature2& sig, const Context& ctx,
                                 const TypePtr& binder, const RedPtr& body,
                                 const RedPtr& q) {
  Context delta = ctx.extended(fresh_name(ctx, "z"), binder);
  std::vector<RedPtr> tuple;
  size_t n = ctx.size();
  tuple.reserve(n + 1);
  for (size_t i = 0; i < n; ++i)
    tuple.push_back(Reduction::var(static_cast<int>(n - 1 - i)));
  tuple.push_back(q);
  return subst_reduction(sig, ctx, delta, body, tuple);
}

// Anti-whiskering: find the tuple P with left_whisker(m, P) == l, where the
// pattern positions of m are its rule variables. Handles bare variables and
// Miller spines; returns nullopt when the shape does not mirror m.
inline bool anti_whisker_rec(const TermPtr& m, const RedPtr& l, int j,
                             std::vector<RedPtr>& images) {
  // flex spine in the term pattern?
  {
    std::vector<TermPtr> spine;
    const TermPtr& h = detail::spine_head(m, spine);
    if (h->kind == Term::Kind::Var && h->index >= j) {
      // the corresponding proof part must be an AppCong spine over the same
      // bound variables
      RedPtr cur = l;
      std::vector<int> vars;
      for (size_t k = spine.size(); k > 0; --k) {
        if (cur->kind != Reduction::Kind::AppCong) return false;
        if (cur->b->kind != Reduction::Kind::VarRefl) return false;
        vars.push_back(cur->b->index);
        if (spine[k - 1]->kind != Term::Kind::Var ||
            spine[k - 1]->index != cur->b->index)
          return false;
        cur = cur->a;
      }
      // cur is the image shifted under j binders; it may not use them
      for (int b = 0; b < j; ++b)
        if (red_uses_var(cur, b)) return false;
      RedPtr image = red_shift(cur, -j, j);
      size_t pos = images.size() - 1 - static_cast<size_t>(h->index - j);
      if (images[pos]) return red_equal(images[pos], image);
      images[pos] = image;
      return true;
    }
  }
  switch (m->kind) {
    case Term::Kind::Var: {
      // bound variable below j
      return l->kind == Reduction::Kind::VarRefl && l->index == m->index;
    }
    case Term::Kind::Unit: return l->kind == Reduction::Kind::UnitRefl;
    case Term::Kind::Const: {
      if (l->kind != Reduction::Kind::ConstCong || l->op != m->op ||
          l->args.size() != m->args.size())
        return false;
      for (size_t i = 0; i < m->args.size(); ++i)
        if (!anti_whisker_rec(m->args[i], l->args[i], j, images)) return false;
      return true;
    }
    case Term::Kind::Lambda:
      if (l->kind != Reduction::Kind::LambdaCong ||
          !type_equal(l->binder, m->binder))
        return false;
      return anti_whisker_rec(m->a, l->a, j + 1, images);
    case Term::Kind::App:
      if (l->kind != Reduction::Kind::AppCong) return false;
      return anti_whisker_rec(m->a, l->a, j, images) &&
             anti_whisker_rec(m->b, l->b, j, images);
    case Term::Kind::Pair:
      if (l->kind != Reduction::Kind::PairCong) return false;
      return anti_whisker_rec(m->a, l->a, j, images) &&
             anti_whisker_rec(m->b, l->b, j, images);
    case Term::Kind::Proj1:
      if (l->kind != Reduction::Kind::Proj1Cong) return false;
      return anti_whisker_rec(m->a, l->a, j, images);
    case Term::Kind::Proj2:
      if (l->kind != Reduction::Kind::Proj2Cong) return false;
      return anti_whisker_rec(m->a, l->a, j, images);
    case Term::Kind::Hole: return false;
  }
  return false;
}

inline std::optional<std::vector<RedPtr>> anti_whisker(const RewriteRule& rule,
                                                       const TermPtr& side,
                                                       const RedPtr& l) {
  std::vector<RedPtr> images(rule.ctx.size());
  if (!anti_whisker_rec(side, l, 0, images)) return std::nullopt;
  for (auto& im : images)
    if (!im) return std::nullopt;
  return images;
}

struct Move {
  RedPtr result;
  Equation eq;
};

// All schema instances applicable at the root of `p` (both orientations).
inline void root_moves(const Signature2& sig, const Context& ctx, const RedPtr& p,
                       const TypePtr& type, std::vector<Move>& out) {
  using K = Reduction::Kind;
  // --- category ---
  if (p->kind == K::VComp) {
    if (p->a->kind == K::VComp)
      out.push_back({Reduction::vcomp(p->a->a, p->a->mid,
                                      Reduction::vcomp(p->a->b, p->mid, p->b)),
                     Equation::CatAssoc});
    if (p->b->kind == K::VComp)
      out.push_back({Reduction::vcomp(Reduction::vcomp(p->a, p->mid, p->b->a),
                                      p->b->mid, p->b->b),
                     Equation::CatAssoc});
    if (is_identity_reduction(p->b)) out.push_back({p->a, Equation::CatUnitR});
    if (is_identity_reduction(p->a)) out.push_back({p->b, Equation::CatUnitL});
  }
  {
    Triple t = typecheck_reduction(ctx, p, sig);
    out.push_back({Reduction::vcomp(p, t.target, identity_reduction(t.target)),
                   Equation::CatUnitR});
    out.push_back({Reduction::vcomp(identity_reduction(t.source), t.source, p),
                   Equation::CatUnitL});
    // --- eta expansions (left to right) ---
    if (type->kind == Type::Kind::Exponential) {
      Context c2 = ctx.extended(fresh_name(ctx, "x"), type->domain());
      (void)c2;
      out.push_back(
          {Reduction::lam(type->domain(),
                          Reduction::app(red_shift(p, 1), Reduction::var(0))),
           Equation::EtaArrow});
    }
    if (type->kind == Type::Kind::Product)
      out.push_back({Reduction::pair(Reduction::proj1(p), Reduction::proj2(p)),
                     Equation::EtaPair});
    if (type->kind == Type::Kind::Unit && p->kind != K::UnitRefl)
      out.push_back({Reduction::unit(), Equation::EtaUnit});
  }
  // --- eta contractions ---
  if (p->kind == K::LambdaCong && p->a->kind == K::AppCong &&
      p->a->b->kind == K::VarRefl && p->a->b->index == 0 &&
      !red_uses_var(p->a->a, 0))
    out.push_back({red_shift(p->a->a, -1, 1), Equation::EtaArrow});
  if (p->kind == K::PairCong && p->a->kind == K::Proj1Cong &&
      p->b->kind == K::Proj2Cong && red_equal(p->a->a, p->b->a))
    out.push_back({p->a->a, Equation::EtaPair});
  // --- beta ---
  if (p->kind == K::AppCong && p->a->kind == K::LambdaCong)
    out.push_back({paper_subst_single(sig, ctx, p->a->binder, p->a->a, p->b),
                   Equation::BetaArrow});
  if (p->kind == K::Proj1Cong && p->a->kind == K::PairCong)
    out.push_back({p->a->a, Equation::BetaProj1});
  if (p->kind == K::Proj2Cong && p->a->kind == K::PairCong)
    out.push_back({p->a->b, Equation::BetaProj2});
  // --- lifting: compositions towards toplevel ---
  auto all_vcomp = [&](const std::vector<RedPtr>& args) {
    for (auto& a : args)
      if (a->kind != K::VComp) return false;
    return !args.empty();
  };
  if (p->kind == K::ConstCong && all_vcomp(p->args)) {
    std::vector<RedPtr> ls, rs;
    std::vector<TermPtr> mids;
    for (auto& a : p->args) {
      ls.push_back(a->a);
      rs.push_back(a->b);
      mids.push_back(a->mid);
    }
    TermPtr mid = normalize_infer(sig, ctx, Term::cst(p->op, mids));
    out.push_back({Reduction::vcomp(Reduction::cst(p->op, ls), mid,
                                    Reduction::cst(p->op, rs)),
                   Equation::LiftConst});
  }
  if (p->kind == K::VComp && p->a->kind == K::ConstCong &&
      p->b->kind == K::ConstCong && p->a->op == p->b->op &&
      p->a->args.size() == p->b->args.size()) {
    std::vector<RedPtr> args;
    bool ok = true;
    for (size_t i = 0; i < p->a->args.size(); ++i) {
      try {
        Triple t = typecheck_reduction(ctx, p->a->args[i], sig);
        args.push_back(Reduction::vcomp(p->a->args[i], t.target, p->b->args[i]));
      } catch (const Error&) {
        ok = false;
        break;
      }
    }
    if (ok)
      out.push_back({Reduction::cst(p->a->op, std::move(args)), Equation::LiftConst});
  }
  if (p->kind == K::LambdaCong && p->a->kind == K::VComp) {
    TermPtr mid = Term::lam(p->binder, p->a->mid, p->hint);
    out.push_back({Reduction::vcomp(Reduction::lam(p->binder, p->a->a, p->hint),
                                    mid,
                                    Reduction::lam(p->binder, p->a->b, p->hint)),
                   Equation::LiftLam});
  }
  if (p->kind == K::VComp && p->a->kind == K::LambdaCong &&
      p->b->kind == K::LambdaCong && type_equal(p->a->binder, p->b->binder)) {
    try {
      Context c2 = ctx.extended(fresh_name(ctx, p->a->hint), p->a->binder);
      Triple t = typecheck_reduction(c2, p->a->a, sig);
      out.push_back({Reduction::lam(p->a->binder,
                                    Reduction::vcomp(p->a->a, t.target, p->b->a),
                                    p->a->hint),
                     Equation::LiftLam});
    } catch (const Error&) {
    }
  }
  if (p->kind == K::AppCong && p->a->kind == K::VComp && p->b->kind == K::VComp) {
    TermPtr mid = normalize_infer(sig, ctx, Term::app(p->a->mid, p->b->mid));
    out.push_back({Reduction::vcomp(Reduction::app(p->a->a, p->b->a), mid,
                                    Reduction::app(p->a->b, p->b->b)),
                   Equation::LiftApp});
  }
  if (p->kind == K::VComp && p->a->kind == K::AppCong &&
      p->b->kind == K::AppCong) {
    try {
      Triple tf = typecheck_reduction(ctx, p->a->a, sig);
      Triple tx = typecheck_reduction(ctx, p->a->b, sig);
      out.push_back(
          {Reduction::app(Reduction::vcomp(p->a->a, tf.target, p->b->a),
                          Reduction::vcomp(p->a->b, tx.target, p->b->b)),
           Equation::LiftApp});
    } catch (const Error&) {
    }
  }
  if (p->kind == K::PairCong && p->a->kind == K::VComp &&
      p->b->kind == K::VComp) {
    TermPtr mid = Term::pair(p->a->mid, p->b->mid);
    out.push_back({Reduction::vcomp(Reduction::pair(p->a->a, p->b->a), mid,
                                    Reduction::pair(p->a->b, p->b->b)),
                   Equation::LiftPair});
  }
  if (p->kind == K::VComp && p->a->kind == K::PairCong &&
      p->b->kind == K::PairCong) {
    try {
      Triple tl = typecheck_reduction(ctx, p->a->a, sig);
      Triple tr = typecheck_reduction(ctx, p->a->b, sig);
      out.push_back(
          {Reduction::pair(Reduction::vcomp(p->a->a, tl.target, p->b->a),
                           Reduction::vcomp(p->a->b, tr.target, p->b->b)),
           Equation::LiftPair});
    } catch (const Error&) {
    }
  }
  for (bool first : {true, false}) {
    auto kproj = first ? K::Proj1Cong : K::Proj2Cong;
    Equation eq = first ? Equation::LiftProj1 : Equation::LiftProj2;
    if (p->kind == kproj && p->a->kind == K::VComp) {
      TermPtr mid = normalize_infer(
          sig, ctx, first ? Term::proj1(p->a->mid) : Term::proj2(p->a->mid));
      RedPtr l = first ? Reduction::proj1(p->a->a) : Reduction::proj2(p->a->a);
      RedPtr r = first ? Reduction::proj1(p->a->b) : Reduction::proj2(p->a->b);
      out.push_back({Reduction::vcomp(l, mid, r), eq});
    }
    if (p->kind == K::VComp && p->a->kind == kproj && p->b->kind == kproj) {
      try {
        Triple t = typecheck_reduction(ctx, p->a->a, sig);
        RedPtr inner = Reduction::vcomp(p->a->a, t.target, p->b->a);
        out.push_back({first ? Reduction::proj1(inner) : Reduction::proj2(inner), eq});
      } catch (const Error&) {
      }
    }
  }
  // --- lifting through rule applications ---
  if (p->kind == K::RuleApp && all_vcomp(p->args)) {
    const RewriteRule& rule = sig.rule(p->rule);
    if (rule.ctx.size() == p->args.size()) {
      std::vector<RedPtr> ls, rs;
      std::vector<TermPtr> mids;
      for (auto& a : p->args) {
        ls.push_back(a->a);
        rs.push_back(a->b);
        mids.push_back(a->mid);
      }
      // left: argument activity first, under the lhs
      try {
        RedPtr lw = left_whisker(rule.lhs, ls);
        TermPtr mid = beta_eta_normalize(sig, ctx, subst_term(rule.lhs, mids),
                                         rule.type);
        out.push_back({Reduction::vcomp(lw, mid, Reduction::rule_app(p->rule, rs)),
                       Equation::LiftRuleL});
      } catch (const Error&) {
      }
      // right: the rule first, argument activity under the rhs
      try {
        RedPtr rw = left_whisker(rule.rhs, rs);
        TermPtr mid = beta_eta_normalize(sig, ctx, subst_term(rule.rhs, mids),
                                         rule.type);
        out.push_back({Reduction::vcomp(Reduction::rule_app(p->rule, ls), mid, rw),
                       Equation::LiftRuleR});
      } catch (const Error&) {
      }
    }
  }
  if (p->kind == K::VComp && p->b->kind == K::RuleApp) {
    const RewriteRule& rule = sig.rule(p->b->rule);
    auto images = anti_whisker(rule, rule.lhs, p->a);
    if (images) {
      std::vector<RedPtr> args;
      bool ok = true;
      for (size_t i = 0; i < images->size(); ++i) {
        try {
          Triple t = typecheck_reduction(ctx, (*images)[i], sig);
          args.push_back(
              Reduction::vcomp((*images)[i], t.target, p->b->args[i]));
        } catch (const Error&) {
          ok = false;
          break;
        }
      }
      if (ok && args.size() == p->b->args.size())
        out.push_back({Reduction::rule_app(p->b->rule, std::move(args)),
                       Equation::LiftRuleL});
    }
  }
  if (p->kind == K::VComp && p->a->kind == K::RuleApp) {
    const RewriteRule& rule = sig.rule(p->a->rule);
    auto images = anti_whisker(rule, rule.rhs, p->b);
    if (images) {
      std::vector<RedPtr> args;
      bool ok = true;
      for (size_t i = 0; i < images->size(); ++i) {
        try {
          Triple t = typecheck_reduction(ctx, p->a->args[i], sig);
          args.push_back(
              Reduction::vcomp(p->a->args[i], t.target, (*images)[i]));
        } catch (const Error&) {
          ok = false;
          break;
        }
      }
      if (ok && args.size() == p->a->args.size())
        out.push_back({Reduction::rule_app(p->a->rule, std::move(args)),
                       Equation::LiftRuleR});
    }
  }
}

// All one-equation rewrites of p, at every position.
inline void all_moves(const Signature2& sig, const Context& ctx, const RedPtr& p,
                      const std::function<RedPtr(const RedPtr&)>& rebuild,
                      std::vector<Move>& out) {
  Triple t = typecheck_reduction(ctx, p, sig);
  std::vector<Move> here;
  root_moves(sig, ctx, p, t.type, here);
  for (auto& m : here) out.push_back({rebuild(m.result), m.eq});
  switch (p->kind) {
    case Reduction::Kind::VarRefl:
    case Reduction::Kind::UnitRefl: return;
    case Reduction::Kind::RuleApp:
    case Reduction::Kind::ConstCong: {
      for (size_t i = 0; i < p->args.size(); ++i) {
        auto reb = [&, i](const RedPtr& r) {
          auto c = std::make_shared<Reduction>(*p);
          c->args[i] = r;
          return rebuild(c);
        };
        all_moves(sig, ctx, p->args[i], reb, out);
      }
      return;
    }
    case Reduction::Kind::VComp: {
      all_moves(sig, ctx, p->a,
                [&](const RedPtr& r) {
                  auto c = std::make_shared<Reduction>(*p);
                  c->a = r;
                  return rebuild(c);
                },
                out);
      all_moves(sig, ctx, p->b,
                [&](const RedPtr& r) {
                  auto c = std::make_shared<Reduction>(*p);
                  c->b = r;
                  return rebuild(c);
                },
                out);
      return;
    }
    case Reduction::Kind::LambdaCong: {
      Context c2 = ctx.extended(fresh_name(ctx, p->hint), p->binder);
      all_moves(sig, c2, p->a,
                [&](const RedPtr& r) {
                  auto c = std::make_shared<Reduction>(*p);
                  c->a = r;
                  return rebuild(c);
                },
                out);
      return;
    }
    case Reduction::Kind::AppCong:
    case Reduction::Kind::PairCong: {
      all_moves(sig, ctx, p->a,
                [&](const RedPtr& r) {
                  auto c = std::make_shared<Reduction>(*p);
                  c->a = r;
                  return rebuild(c);
                },
                out);
      all_moves(sig, ctx, p->b,
                [&](const RedPtr& r) {
                  auto c = std::make_shared<Reduction>(*p);
                  c->b = r;
                  return rebuild(c);
                },
                out);
      return;
    }
    case Reduction::Kind::Proj1Cong:
    case Reduction::Kind::Proj2Cong: {
      all_moves(sig, ctx, p->a,
                [&](const RedPtr& r) {
                  auto c = std::make_shared<Reduction>(*p);
                  c->a = r;
                  return rebuild(c);
                },
                out);
      return;
    }
  }
}

}  // namespace oracle_detail

// Neighbors of a whole proof under all equation schemas, both orientations,
// all positions; ill-typed candidates are dropped, results larger than
// `size_cap` are pruned (the closure is explored within a bounded proof-size
// window).
inline std::vector<std::pair<RedPtr, Equation>> oracle_neighbors(
    const Signature2& sig, const Context& ctx, const RedPtr& p, int size_cap) {
  std::vector<oracle_detail::Move> moves;
  oracle_detail::all_moves(sig, ctx, p, [](const RedPtr& r) { return r; }, moves);
  std::vector<std::pair<RedPtr, Equation>> out;
  for (auto& m : moves) {
    if (reduction_size(m.result) > size_cap) continue;
    try {
      typecheck_reduction(ctx, m.result, sig);
    } catch (const Error&) {
      continue;
    }
    out.push_back({m.result, m.eq});
  }
  return out;
}

// ---------------------------------------------------------------------------
// eq_step: is (p, q) an instance of the named schema at the root, in either
// orientation? The bureaucratic congruence schemas are checked on their
// conclusion shapes (premises are typing-level, not decided here).
// ---------------------------------------------------------------------------

inline bool eq_step(const Signature2& sig, const Context& ctx, const RedPtr& p,
                    const RedPtr& q, const std::string& which) {
  Equation eq = equation_by_name(which);
  Triple tp = typecheck_reduction(ctx, p, sig);
  Triple tq = typecheck_reduction(ctx, q, sig);
  if (!type_equal(tp.type, tq.type) || !alpha_equal(tp.source, tq.source) ||
      !alpha_equal(tp.target, tq.target))
    throw Error(Errc::TypeMismatch, "eq_step: triples differ");
  using K = Reduction::Kind;
  switch (eq) {
    case Equation::CongRefl: return red_equal(p, q);
    case Equation::CongSym:
    case Equation::CongTrans:
      // relation-level rules: any pair with a common triple instantiates the
      // conclusion shape
      return true;
    case Equation::CongVComp:
      return p->kind == K::VComp && q->kind == K::VComp &&
             alpha_equal(p->mid, q->mid);
    case Equation::CongRule:
      return p->kind == K::RuleApp && q->kind == K::RuleApp &&
             p->rule == q->rule && p->args.size() == q->args.size();
    case Equation::CongConst:
      return p->kind == K::ConstCong && q->kind == K::ConstCong &&
             p->op == q->op && p->args.size() == q->args.size();
    case Equation::CongLam:
      return p->kind == K::LambdaCong && q->kind == K::LambdaCong &&
             type_equal(p->binder, q->binder);
    case Equation::CongApp:
      return p->kind == K::AppCong && q->kind == K::AppCong;
    case Equation::CongPair:
      return p->kind == K::PairCong && q->kind == K::PairCong;
    case Equation::CongProj1:
      return p->kind == K::Proj1Cong && q->kind == K::Proj1Cong;
    case Equation::CongProj2:
      return p->kind == K::Proj2Cong && q->kind == K::Proj2Cong;
    default: break;
  }
  std::vector<oracle_detail::Move> moves;
  oracle_detail::root_moves(sig, ctx, p, tp.type, moves);
  for (auto& m : moves)
    if (m.eq == eq && red_equal(m.result, q)) return true;
  moves.clear();
  oracle_detail::root_moves(sig, ctx, q, tq.type, moves);
  for (auto& m : moves)
    if (m.eq == eq && red_equal(m.result, p)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// oracle_equiv: bounded bidirectional closure of the equation schemas.
// Deterministic given the budget; `yes` when the closures meet, a definitive
// `no-within-budget` when both closures are exhausted within the size window
// without meeting, `budget-exhausted` otherwise.
// ---------------------------------------------------------------------------

enum class OracleVerdict { Yes, NoWithinBudget, BudgetExhausted };

inline const char* oracle_verdict_name(OracleVerdict v) {
  switch (v) {
    case OracleVerdict::Yes: return "yes";
    case OracleVerdict::NoWithinBudget: return "no-within-budget";
    case OracleVerdict::BudgetExhausted: return "budget-exhausted";
  }
  return "?";
}

struct OracleResult {
  OracleVerdict verdict;
  int explored = 0;
  std::vector<OracleTraceEntry> trace;  // meet path when verdict == Yes
};

inline OracleResult oracle_equiv(const Signature2& sig,
                                 const ReductionJudgment& p,
                                 const ReductionJudgment& q, int budget,
                                 int size_slack = 16) {
  if (!type_equal(p.type, q.type) || !alpha_equal(p.source, q.source) ||
      !alpha_equal(p.target, q.target))
    throw Error(Errc::TypeMismatch, "oracle_equiv: triples differ");
  const Context& ctx = p.ctx;
  int cap = std::max(reduction_size(p.proof), reduction_size(q.proof)) * 3 +
            size_slack;

  struct Node {
    RedPtr proof;
    std::string parent;
    Equation via = Equation::CongRefl;
  };
  std::unordered_map<std::string, Node> seen[2];
  std::deque<std::string> frontier[2];
  std::string k0 = red_key(p.proof), k1 = red_key(q.proof);
  seen[0].emplace(k0, Node{p.proof, "", Equation::CongRefl});
  seen[1].emplace(k1, Node{q.proof, "", Equation::CongRefl});
  frontier[0].push_back(k0);
  frontier[1].push_back(k1);

  auto build_trace = [&](const std::string& meet) {
    std::vector<OracleTraceEntry> fwd, bwd;
    for (std::string k = meet; !k.empty();) {
      const Node& n = seen[0].at(k);
      if (n.parent.empty()) break;
      fwd.push_back({equation_name(n.via), red_key(n.proof)});
      k = n.parent;
    }
    std::reverse(fwd.begin(), fwd.end());
    for (std::string k = meet; !k.empty();) {
      const Node& n = seen[1].at(k);
      if (n.parent.empty()) break;
      bwd.push_back({equation_name(n.via), red_key(n.proof)});
      k = n.parent;
    }
    for (auto& e : bwd) fwd.push_back({e.equation + " (reversed)", e.proof});
    return fwd;
  };

  if (seen[1].count(k0)) return {OracleVerdict::Yes, 2, {}};
  int explored = 2;
  while (!frontier[0].empty() || !frontier[1].empty()) {
    // expand the smaller live frontier first; deterministic
    int side = frontier[0].empty() ? 1
               : frontier[1].empty()
                   ? 0
                   : (frontier[0].size() <= frontier[1].size() ? 0 : 1);
    std::string key = frontier[side].front();
    frontier[side].pop_front();
    RedPtr cur = seen[side].at(key).proof;
    for (auto& [nbr, eq] : oracle_neighbors(sig, ctx, cur, cap)) {
      std::string nk = red_key(nbr);
      if (seen[side].count(nk)) continue;
      if (explored >= budget)
        return {OracleVerdict::BudgetExhausted, explored, {}};
      seen[side].emplace(nk, Node{nbr, key, eq});
      ++explored;
      if (seen[1 - side].count(nk)) {
        OracleResult res{OracleVerdict::Yes, explored, {}};
        res.trace = build_trace(nk);
        return res;
      }
      frontier[side].push_back(nk);
    }
  }
  return {OracleVerdict::NoWithinBudget, explored, {}};
}

}  // namespace perm2
