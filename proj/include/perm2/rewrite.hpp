#pragma once

#include <deque>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "perm2/kernel.hpp"
#include "perm2/reduction.hpp"
#include "perm2/signature.hpp"
#include "perm2/sigops.hpp"

namespace perm2 {

// ---------------------------------------------------------------------------
// Miller patterns and higher-order pattern matching.
//
// A rule lhs is a pattern when every occurrence of a rule variable is the
// head of a spine applied to distinct locally-bound variables. Matching is
// then decidable with at most one most-general solution.
// ---------------------------------------------------------------------------

namespace detail {

// Decompose an application spine; returns the head.
inline const TermPtr& spine_head(const TermPtr& t, std::vector<TermPtr>& args) {
  if (t->kind == Term::Kind::App) {
    const TermPtr& h = spine_head(t->a, args);
    args.push_back(t->b);
    return h;
  }
  return t;
}

inline bool is_pattern_rec(const TermPtr& t, int j) {
  switch (t->kind) {
    case Term::Kind::Var:
      return true;  // bare occurrence: applied to zero bound variables
    case Term::Kind::Unit:
    case Term::Kind::Hole: return true;
    case Term::Kind::Const: {
      for (auto& x : t->args)
        if (!is_pattern_rec(x, j)) return false;
      return true;
    }
    case Term::Kind::Lambda: return is_pattern_rec(t->a, j + 1);
    case Term::Kind::App: {
      std::vector<TermPtr> args;
      const TermPtr& h = spine_head(t, args);
      if (h->kind == Term::Kind::Var && h->index >= j) {
        // flex head: arguments must be distinct bound variables
        std::set<int> seen;
        for (auto& a : args) {
          if (a->kind != Term::Kind::Var || a->index >= j) return false;
          if (!seen.insert(a->index).second) return false;
        }
        return true;
      }
      for (auto& a : args)
        if (!is_pattern_rec(a, j)) return false;
      return is_pattern_rec(h, j);
    }
    case Term::Kind::Pair:
      return is_pattern_rec(t->a, j) && is_pattern_rec(t->b, j);
    case Term::Kind::Proj1:
    case Term::Kind::Proj2: return is_pattern_rec(t->a, j);
  }
  return false;
}

}  // namespace detail

inline bool is_pattern_lhs(const RewriteRule& r) {
  return detail::is_pattern_rec(r.lhs, 0);
}

namespace detail {

// Remap a subject subterm (at pattern depth j) into a pattern-variable image
// under m fresh binders. allowed[b] gives the new index for pattern-local
// bound variable b, or -1 when b may not occur. Returns nullptr on capture.
inline TermPtr abstract_image(const TermPtr& t, int j, int m,
                              const std::vector<int>& allowed, int depth = 0) {
  switch (t->kind) {
    case Term::Kind::Var: {
      if (t->index < depth) return t;
      int idx = t->index - depth;
      if (idx < j) {
        int mapped = allowed[static_cast<size_t>(idx)];
        if (mapped < 0) return nullptr;
        return Term::var(mapped + depth);
      }
      // ambient variable: strip the j pattern-local binders, add m new ones
      return Term::var(t->index - j + m);
    }
    case Term::Kind::Unit:
    case Term::Kind::Hole: return t;
    case Term::Kind::Const: {
      std::vector<TermPtr> args;
      args.reserve(t->args.size());
      for (auto& x : t->args) {
        TermPtr c = abstract_image(x, j, m, allowed, depth);
        if (!c) return nullptr;
        args.push_back(c);
      }
      auto r = std::make_shared<Term>(*t);
      r->args = std::move(args);
      return r;
    }
    case Term::Kind::Lambda: {
      TermPtr b = abstract_image(t->a, j, m, allowed, depth + 1);
      if (!b) return nullptr;
      auto r = std::make_shared<Term>(*t);
      r->a = b;
      return r;
    }
    case Term::Kind::App:
    case Term::Kind::Pair: {
      TermPtr a = abstract_image(t->a, j, m, allowed, depth);
      TermPtr b = abstract_image(t->b, j, m, allowed, depth);
      if (!a || !b) return nullptr;
      auto r = std::make_shared<Term>(*t);
      r->a = a;
      r->b = b;
      return r;
    }
    case Term::Kind::Proj1:
    case Term::Kind::Proj2: {
      TermPtr a = abstract_image(t->a, j, m, allowed, depth);
      if (!a) return nullptr;
      auto r = std::make_shared<Term>(*t);
      r->a = a;
      return r;
    }
  }
  return nullptr;
}

struct MatchState {
  const RewriteRule* rule;
  std::vector<TermPtr> images;  // by rule-context position; null when unbound
};

// Pattern match at pattern depth j. Subject is walked in lockstep, so the
// first j binders of both sides correspond.
inline bool match_rec(MatchState& st, const TermPtr& pat, const TermPtr& subj,
                      int j) {
  // flex spine?
  if (pat->kind == Term::Kind::App || pat->kind == Term::Kind::Var) {
    std::vector<TermPtr> spine;
    const TermPtr& h = spine_head(pat, spine);
    if (h->kind == Term::Kind::Var && h->index >= j) {
      int rule_var = h->index - j;
      size_t n = st.rule->ctx.size();
      size_t pos = n - 1 - static_cast<size_t>(rule_var);
      int m = static_cast<int>(spine.size());
      std::vector<int> allowed(static_cast<size_t>(j), -1);
      for (int l = 0; l < m; ++l) {
        if (spine[static_cast<size_t>(l)]->kind != Term::Kind::Var) return false;
        int b = spine[static_cast<size_t>(l)]->index;
        if (b >= j || allowed[static_cast<size_t>(b)] >= 0) return false;
        // spine argument l becomes binder index (m-1-l) in the image
        allowed[static_cast<size_t>(b)] = m - 1 - l;
      }
      TermPtr body = abstract_image(subj, j, m, allowed);
      if (!body) return false;
      // binder types from the rule variable's type
      TypePtr ty = st.rule->ctx.vars[pos].second;
      std::vector<TypePtr> doms;
      for (int l = 0; l < m; ++l) {
        if (ty->kind != Type::Kind::Exponential) return false;
        doms.push_back(ty->domain());
        ty = ty->codomain();
      }
      TermPtr image = body;
      for (int l = m - 1; l >= 0; --l)
        image = Term::lam(doms[static_cast<size_t>(l)], image);
      if (st.images[pos]) return alpha_equal(st.images[pos], image);
      st.images[pos] = image;
      return true;
    }
  }
  if (pat->kind != subj->kind) return false;
  switch (pat->kind) {
    case Term::Kind::Var: return pat->index == subj->index;
    case Term::Kind::Unit: return true;
    case Term::Kind::Const: {
      if (pat->op != subj->op || pat->args.size() != subj->args.size())
        return false;
      for (size_t i = 0; i < pat->args.size(); ++i)
        if (!match_rec(st, pat->args[i], subj->args[i], j)) return false;
      return true;
    }
    case Term::Kind::Lambda:
      if (!type_equal(pat->binder, subj->binder)) return false;
      return match_rec(st, pat->a, subj->a, j + 1);
    case Term::Kind::App: {
      // rigid application
      return match_rec(st, pat->a, subj->a, j) && match_rec(st, pat->b, subj->b, j);
    }
    case Term::Kind::Pair:
      return match_rec(st, pat->a, subj->a, j) && match_rec(st, pat->b, subj->b, j);
    case Term::Kind::Proj1:
    case Term::Kind::Proj2: return match_rec(st, pat->a, subj->a, j);
    case Term::Kind::Hole: return false;
  }
  return false;
}

}  // namespace detail

// Match a rule against a beta-eta-normal subject in context `ctx` (the
// ambient context extended by any binders above the match position). Returns
// the list of most-general matches: empty or a single substitution in rule
// context order, with every image beta-eta-normal.
inline std::vector<std::vector<TermPtr>> match_rule(const Signature2& sig,
                                                    const RewriteRule& rule,
                                                    const TermPtr& subject,
                                                    const Context& ctx) {
  if (!is_pattern_lhs(rule))
    throw Error(Errc::NonPatternLhs,
                "rule " + rule.name + ": lhs is not a Miller pattern");
  detail::MatchState st{&rule, std::vector<TermPtr>(rule.ctx.size())};
  if (!detail::match_rec(st, rule.lhs, subject, 0)) return {};
  // Unconstrained rule variables (possible for non-HRS rules) have no
  // most-general solution here; reject such matches.
  for (auto& im : st.images)
    if (!im) return {};
  // safety net: lhs[sigma] must be beta-eta-equal to the subject
  TermPtr inst = beta_eta_normalize(sig, ctx, subst_term(rule.lhs, st.images),
                                    rule.type);
  if (!alpha_equal(inst, term_unlabel(subject))) return {};
  return {st.images};
}

// ---------------------------------------------------------------------------
// Positional rewriting
// ---------------------------------------------------------------------------

struct RewriteStep {
  int rule;
  Path position;
  std::vector<TermPtr> args;  // rule-context order
  TermPtr before, after;      // whole terms, beta-eta-normal
};

struct Trace {
  TermPtr start;
  std::vector<RewriteStep> steps;
};

inline Context context_at(const Context& ctx, const TermPtr& t, const Path& p) {
  Context out = ctx;
  TermPtr cur = t;
  for (int i : p) {
    if (cur->kind == Term::Kind::Lambda)
      out = out.extended(fresh_name(out, cur->hint), cur->binder);
    cur = child_at(cur, i);
  }
  return out;
}

namespace detail {

inline void all_paths_rec(const TermPtr& t, Path& cur, std::vector<Path>& out) {
  out.push_back(cur);
  auto rec = [&](const TermPtr& c, int i) {
    cur.push_back(i);
    all_paths_rec(c, cur, out);
    cur.pop_back();
  };
  switch (t->kind) {
    case Term::Kind::Const:
      for (size_t i = 0; i < t->args.size(); ++i) rec(t->args[i], static_cast<int>(i));
      break;
    case Term::Kind::Lambda:
    case Term::Kind::Proj1:
    case Term::Kind::Proj2: rec(t->a, 0); break;
    case Term::Kind::App:
    case Term::Kind::Pair:
      rec(t->a, 0);
      rec(t->b, 1);
      break;
    default: break;
  }
}

}  // namespace detail

inline std::vector<Path> all_paths(const TermPtr& t) {
  std::vector<Path> out;
  Path cur;
  detail::all_paths_rec(t, cur, out);
  return out;
}

inline void require_pattern_rules(const Signature2& sig) {
  for (const RewriteRule& r : sig.rules)
    if (!is_pattern_lhs(r))
      throw Error(Errc::NonPatternLhs,
                  "rule " + r.name +
                      ": lhs is not a Miller pattern; the rewrite engine "
                      "rejects this rule (proof-term modules still accept it)");
}

// Fire one step: replace the redex at `position` by the normalized rhs
// instance and renormalize the whole term. `subject` must be the normal form
// the step was matched on.
inline TermPtr fire_step(const Signature2& sig, const Context& ctx,
                         const TermPtr& before, const RewriteRule& rule,
                         const Path& position, const std::vector<TermPtr>& args,
                         const TypePtr& whole_type) {
  Context local = context_at(ctx, before, position);
  TermPtr inst = beta_eta_normalize(sig, local, subst_term(rule.rhs, args),
                                    rule.type);
  TermPtr whole = replace_at(before, position, inst);
  return beta_eta_normalize(sig, ctx, whole, whole_type);
}

// All redexes of the beta-eta-normal form of m, each with its after-term.
// Deterministic order: position-lexicographic, then rule id.
inline std::vector<RewriteStep> rewrite_once(const Signature2& sig,
                                             const Context& ctx,
                                             const TermPtr& m) {
  require_pattern_rules(sig);
  TypePtr ty = typecheck_term(ctx, m, sig);
  TermPtr nf = beta_eta_normalize(sig, ctx, m, ty);
  std::vector<RewriteStep> out;
  for (const Path& p : all_paths(nf)) {
    TermPtr sub = subterm_at(nf, p);
    Context local = context_at(ctx, nf, p);
    for (size_t r = 0; r < sig.rules.size(); ++r) {
      const RewriteRule& rule = sig.rules[r];
      // quick type screen
      try {
        TypePtr subty = typecheck_term(local, sub, sig);
        if (!type_equal(subty, rule.type)) continue;
      } catch (const Error&) {
        continue;
      }
      auto matches = match_rule(sig, rule, sub, local);
      for (auto& args : matches) {
        TermPtr after = fire_step(sig, ctx, nf, rule, p, args, ty);
        out.push_back({static_cast<int>(r), p, args, nf, after});
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Embedding a standard step as a proof term: the identity congruence skeleton
// of the before-term with the rule application plugged at the position.
// ---------------------------------------------------------------------------

inline RedPtr embed_step(const Signature2& sig, const Context& ctx,
                         const RewriteStep& s) {
  const RewriteRule& rule = sig.rule(s.rule);
  std::vector<RedPtr> args;
  args.reserve(s.args.size());
  for (auto& a : s.args) args.push_back(identity_reduction(a));
  RedPtr core = Reduction::rule_app(s.rule, std::move(args));
  // wrap in the congruence image of the surrounding context
  std::function<RedPtr(const TermPtr&, size_t)> wrap =
      [&](const TermPtr& t, size_t i) -> RedPtr {
    if (i == s.position.size()) return core;
    int c = s.position[i];
    switch (t->kind) {
      case Term::Kind::Lambda:
        return Reduction::lam(t->binder, wrap(t->a, i + 1), t->hint);
      case Term::Kind::App:
        return c == 0 ? Reduction::app(wrap(t->a, i + 1), identity_reduction(t->b))
                      : Reduction::app(identity_reduction(t->a), wrap(t->b, i + 1));
      case Term::Kind::Pair:
        return c == 0 ? Reduction::pair(wrap(t->a, i + 1), identity_reduction(t->b))
                      : Reduction::pair(identity_reduction(t->a), wrap(t->b, i + 1));
      case Term::Kind::Proj1: return Reduction::proj1(wrap(t->a, i + 1));
      case Term::Kind::Proj2: return Reduction::proj2(wrap(t->a, i + 1));
      case Term::Kind::Const: {
        std::vector<RedPtr> as;
        for (size_t k = 0; k < t->args.size(); ++k)
          as.push_back(k == static_cast<size_t>(c) ? wrap(t->args[k], i + 1)
                                                   : identity_reduction(t->args[k]));
        return Reduction::cst(t->op, std::move(as));
      }
      default:
        throw Error(Errc::InvalidStep, "embed_step: bad position");
    }
  };
  RedPtr p = wrap(s.before, 0);
  // sanity: the step must reproduce its endpoints
  Triple t = typecheck_reduction(ctx, p, sig);
  if (!alpha_equal(t.source, s.before) || !alpha_equal(t.target, s.after))
    throw Error(Errc::InvalidStep, "embed_step: stale step endpoints");
  (void)rule;
  return p;
}

// ---------------------------------------------------------------------------
// Rewriting drivers
// ---------------------------------------------------------------------------

enum class Strategy { LeftmostOutermost, ParallelOutermost };

struct RewriteResult {
  Trace trace;
  bool terminated;  // false when fuel ran out
};

inline RewriteResult normalize_by_rules(const Signature2& sig, const Context& ctx,
                                        const TermPtr& m, Strategy strategy,
                                        int fuel) {
  TypePtr ty = typecheck_term(ctx, m, sig);
  TermPtr cur = beta_eta_normalize(sig, ctx, m, ty);
  Trace tr{cur, {}};
  int budget = fuel;
  for (;;) {
    std::vector<RewriteStep> steps = rewrite_once(sig, ctx, cur);
    if (steps.empty()) return {tr, true};
    if (strategy == Strategy::LeftmostOutermost) {
      if (budget <= 0) return {tr, false};
      --budget;
      tr.steps.push_back(steps.front());
      cur = steps.front().after;
    } else {
      // fire all outermost redexes with pairwise disjoint positions, leftmost
      // priority, as one round per fuel unit
      if (budget <= 0) return {tr, false};
      --budget;
      std::vector<const RewriteStep*> chosen;
      for (const auto& s : steps) {
        bool blocked = false;
        for (auto* c : chosen)
          if (!path_disjoint(c->position, s.position)) {
            blocked = true;
            break;
          }
        if (!blocked) chosen.push_back(&s);
      }
      for (auto* s : chosen) {
        // re-match at the stored position on the current term
        TermPtr sub = subterm_at(cur, s->position);
        Context local = context_at(ctx, cur, s->position);
        auto ms = match_rule(sig, sig.rule(s->rule), sub, local);
        if (ms.empty())
          throw Error(Errc::InvalidStep, "parallel round: disjoint step vanished");
        TermPtr next = fire_step(sig, ctx, cur, sig.rule(s->rule), s->position,
                                 ms[0], ty);
        tr.steps.push_back({s->rule, s->position, ms[0], cur, next});
        cur = next;
      }
    }
  }
}

// Bounded search for a 2-cell M => N: reachability by standard rewriting,
// exploring at most `fuel` distinct terms. A result of false only means the
// search space was exhausted or the bound hit (semi-decision).
inline bool has_cell(const Signature2& sig, const Context& ctx, const TermPtr& m,
                     const TermPtr& n, int fuel) {
  TypePtr ty = typecheck_term(ctx, m, sig);
  TermPtr src = beta_eta_normalize(sig, ctx, m, ty);
  TermPtr dst = beta_eta_normalize(sig, ctx, n, ty);
  std::unordered_set<std::string> seen;
  std::deque<TermPtr> frontier{src};
  seen.insert(term_key(src));
  int used = 1;
  while (!frontier.empty()) {
    TermPtr cur = frontier.front();
    frontier.pop_front();
    if (alpha_equal(cur, dst)) return true;
    for (auto& s : rewrite_once(sig, ctx, cur)) {
      std::string k = term_key(s.after);
      if (seen.count(k)) continue;
      if (used >= fuel) return false;
      seen.insert(k);
      ++used;
      frontier.push_back(s.after);
    }
  }
  return false;
}

inline std::string print_trace(const Trace& tr, const Signature2& sig,
                               const Context& ctx) {
  std::ostringstream os;
  for (const auto& s : tr.steps) {
    os << sig.rule(s.rule).name << " @ " << path_str(s.position) << " : "
       << print_term(s.before, sig.base, ctx) << " => "
       << print_term(s.after, sig.base, ctx) << "\n";
  }
  return os.str();
}

}  // namespace perm2
