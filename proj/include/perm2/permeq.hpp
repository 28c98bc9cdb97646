#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "perm2/kernel.hpp"
#include "perm2/reduction.hpp"
#include "perm2/rewrite.hpp"
#include "perm2/whisker.hpp"

namespace perm2 {

// ---------------------------------------------------------------------------
// Proof normalization (the beta/eta equations oriented left to right).
//
// The proof calculus is itself a simply-typed language, so every reduction
// has an eta-long beta-normal form: beta contractions substitute reduction
// arguments into lambda-congruence bodies, projections of pair congruences
// collapse, eta expansion is type-directed, every proof at type 1 collapses
// to (), and eliminations distribute over vertical compositions (the lifting
// equations oriented towards toplevel). Vertical compositions survive only
// at sort types.
// ---------------------------------------------------------------------------

namespace pnorm {

inline RedPtr reduce(const Signature2& sig, const Context& ctx, const RedPtr& p);

// Beta-contract (\z:A. body) applied to q. Grafting runs the argument at
// every occurrence in parallel, which is only a well-formed move when the
// body is VComp-free; otherwise the sequential substitution of the paper is
// used.
inline RedPtr contract(const Signature2& sig, const Context& ctx,
                       const TypePtr& binder, const RedPtr& body,
                       const RedPtr& q) {
  size_t n = ctx.size();
  if (!has_vcomp(body)) {
    std::vector<RedPtr> rev;
    rev.reserve(n + 1);
    rev.push_back(q);
    for (size_t i = 0; i < n; ++i)
      rev.push_back(Reduction::var(static_cast<int>(i)));
    std::vector<TermPtr> termrev;  // unused: VComp-free bodies have no middles
    termrev.reserve(n + 1);
    Triple tq = typecheck_reduction(ctx, q, sig);
    termrev.push_back(tq.source);
    for (size_t i = 0; i < n; ++i)
      termrev.push_back(Term::var(static_cast<int>(i)));
    return red_graft(sig, ctx, body, rev, termrev);
  }
  Context delta = ctx.extended(fresh_name(ctx, "z"), binder);
  std::vector<RedPtr> tuple;  // context order over delta
  tuple.reserve(n + 1);
  for (size_t i = 0; i < n; ++i)
    tuple.push_back(Reduction::var(static_cast<int>(n - 1 - i)));
  tuple.push_back(q);
  return subst_reduction(sig, ctx, delta, body, tuple);
}

// Eliminators on reduced proofs: apply / project, firing beta redexes and
// distributing over vertical compositions.
inline RedPtr apply_red(const Signature2& sig, const Context& ctx,
                        const RedPtr& f, const RedPtr& x) {
  if (f->kind == Reduction::Kind::LambdaCong)
    return reduce(sig, ctx, contract(sig, ctx, f->binder, f->a, x));
  if (f->kind == Reduction::Kind::VComp) {
    Triple tx = typecheck_reduction(ctx, x, sig);
    RedPtr left = apply_red(sig, ctx, f->a, x);
    RedPtr right = apply_red(sig, ctx, f->b, identity_reduction(tx.target));
    TermPtr mid = normalize_infer(sig, ctx, Term::app(f->mid, tx.target));
    return Reduction::vcomp(left, mid, right);
  }
  return Reduction::app(f, x);
}

inline RedPtr proj_red(const Signature2& sig, const Context& ctx, const RedPtr& p,
                       bool first) {
  if (p->kind == Reduction::Kind::PairCong) return first ? p->a : p->b;
  if (p->kind == Reduction::Kind::VComp) {
    RedPtr l = proj_red(sig, ctx, p->a, first);
    RedPtr r = proj_red(sig, ctx, p->b, first);
    TermPtr mid = normalize_infer(
        sig, ctx, first ? Term::proj1(p->mid) : Term::proj2(p->mid));
    return Reduction::vcomp(l, mid, r);
  }
  return first ? Reduction::proj1(p) : Reduction::proj2(p);
}

// Bottom-up structural reduction: children first, then root contractions.
inline RedPtr reduce(const Signature2& sig, const Context& ctx, const RedPtr& p) {
  switch (p->kind) {
    case Reduction::Kind::VarRefl:
    case Reduction::Kind::UnitRefl: return p;
    case Reduction::Kind::RuleApp:
    case Reduction::Kind::ConstCong: {
      auto r = std::make_shared<Reduction>(*p);
      for (auto& a : r->args) a = reduce(sig, ctx, a);
      return r;
    }
    case Reduction::Kind::VComp: {
      auto r = std::make_shared<Reduction>(*p);
      r->a = reduce(sig, ctx, p->a);
      r->b = reduce(sig, ctx, p->b);
      r->mid = normalize_infer(sig, ctx, p->mid);
      return r;
    }
    case Reduction::Kind::LambdaCong: {
      Context c2 = ctx.extended(fresh_name(ctx, p->hint), p->binder);
      auto r = std::make_shared<Reduction>(*p);
      r->a = reduce(sig, c2, p->a);
      return r;
    }
    case Reduction::Kind::AppCong: {
      RedPtr f = reduce(sig, ctx, p->a);
      RedPtr x = reduce(sig, ctx, p->b);
      return apply_red(sig, ctx, f, x);
    }
    case Reduction::Kind::PairCong: {
      auto r = std::make_shared<Reduction>(*p);
      r->a = reduce(sig, ctx, p->a);
      r->b = reduce(sig, ctx, p->b);
      return r;
    }
    case Reduction::Kind::Proj1Cong:
    case Reduction::Kind::Proj2Cong: {
      RedPtr q = reduce(sig, ctx, p->a);
      return proj_red(sig, ctx, q, p->kind == Reduction::Kind::Proj1Cong);
    }
  }
  throw Error(Errc::IllTyped, "reduce: malformed reduction");
}

inline RedPtr expand(const Signature2& sig, const Context& ctx, const RedPtr& p,
                     const TypePtr& type);

// Expand the arguments of a stuck proof (head spine) without eta-expanding
// around the head itself.
inline RedPtr expand_stuck(const Signature2& sig, const Context& ctx,
                           const RedPtr& p) {
  switch (p->kind) {
    case Reduction::Kind::VarRefl:
    case Reduction::Kind::UnitRefl: return p;
    case Reduction::Kind::RuleApp: {
      const RewriteRule& r = sig.rule(p->rule);
      auto out = std::make_shared<Reduction>(*p);
      for (size_t i = 0; i < out->args.size(); ++i)
        out->args[i] = expand(sig, ctx, p->args[i], r.ctx.vars[i].second);
      return out;
    }
    case Reduction::Kind::ConstCong: {
      const Sequent& sq = sig.base.sequent_of(p->op);
      auto out = std::make_shared<Reduction>(*p);
      for (size_t i = 0; i < out->args.size(); ++i)
        out->args[i] = expand(sig, ctx, p->args[i], sq.premises[i]);
      return out;
    }
    case Reduction::Kind::VComp: {
      Triple t = typecheck_reduction(ctx, p->a, sig);
      auto out = std::make_shared<Reduction>(*p);
      out->a = expand(sig, ctx, p->a, t.type);
      out->b = expand(sig, ctx, p->b, t.type);
      return out;
    }
    case Reduction::Kind::AppCong: {
      Triple tf = typecheck_reduction(ctx, p->a, sig);
      auto out = std::make_shared<Reduction>(*p);
      out->a = expand_stuck(sig, ctx, p->a);
      out->b = expand(sig, ctx, p->b, tf.type->domain());
      return out;
    }
    case Reduction::Kind::Proj1Cong:
    case Reduction::Kind::Proj2Cong: {
      auto out = std::make_shared<Reduction>(*p);
      out->a = expand_stuck(sig, ctx, p->a);
      return out;
    }
    case Reduction::Kind::LambdaCong:
      throw Error(Errc::IllTyped, "expand_stuck: lambda in elimination position");
  }
  throw Error(Errc::IllTyped, "expand_stuck: malformed reduction");
}

// Type-directed eta expansion of a reduced proof.
inline RedPtr expand(const Signature2& sig, const Context& ctx, const RedPtr& p,
                     const TypePtr& type) {
  switch (type->kind) {
    case Type::Kind::Unit:
      return Reduction::unit();
    case Type::Kind::Product: {
      RedPtr l = proj_red(sig, ctx, p, true);
      RedPtr r = proj_red(sig, ctx, p, false);
      return Reduction::pair(expand(sig, ctx, l, type->a),
                             expand(sig, ctx, r, type->b));
    }
    case Type::Kind::Exponential: {
      std::string hint = p->kind == Reduction::Kind::LambdaCong && !p->hint.empty()
                             ? p->hint
                             : "x";
      Context c2 = ctx.extended(fresh_name(ctx, hint), type->domain());
      RedPtr body = apply_red(sig, c2, red_shift(p, 1), Reduction::var(0));
      return Reduction::lam(type->domain(), expand(sig, c2, body, type->codomain()),
                            hint);
    }
    case Type::Kind::Sort: {
      if (p->kind == Reduction::Kind::VComp) {
        Triple t = typecheck_reduction(ctx, p->a, sig);
        auto out = std::make_shared<Reduction>(*p);
        out->a = expand(sig, ctx, p->a, t.type);
        out->b = expand(sig, ctx, p->b, t.type);
        return out;
      }
      return expand_stuck(sig, ctx, p);
    }
  }
  throw Error(Errc::IllTyped, "expand: malformed type");
}

}  // namespace pnorm

// Eta-long beta-normal form of a proof term (equal proofs modulo the beta/eta
// equations share it; vertical compositions and rule applications are kept
// as atoms, eliminations distributed over compositions).
inline RedPtr normalize_reduction(const Signature2& sig, const Context& ctx,
                                  const RedPtr& p, const TypePtr& type) {
  RedPtr r = pnorm::reduce(sig, ctx, p);
  return pnorm::expand(sig, ctx, r, type);
}

// ---------------------------------------------------------------------------
// Sequentialization: factor a normalized proof into a vertical sequence of
// raw elementary steps. Each raw step is a one-hole term context together
// with a rule and its argument terms; congruence positions are serialized
// left to right, and rule applications put their argument activity before
// the rule (the first lifting rule oriented left to right).
// ---------------------------------------------------------------------------

struct RawStep {
  TermPtr context;             // one Hole node at the rewrite position
  int rule = -1;
  std::vector<TermPtr> args;   // rule-context order, beta-eta-normal
};

namespace pseq {

inline void wrap_steps(std::vector<RawStep>& steps, size_t from,
                       const std::function<TermPtr(const TermPtr&)>& wrap) {
  for (size_t i = from; i < steps.size(); ++i)
    steps[i].context = wrap(steps[i].context);
}

inline void seq_rec(const Signature2& sig, const Context& ctx, const RedPtr& p,
                    std::vector<RawStep>& out);

inline void seq_args(const Signature2& sig, const Context& ctx,
                     const std::vector<RedPtr>& args,
                     const std::vector<Triple>& triples,
                     const std::function<TermPtr(std::vector<TermPtr>&&)>& rebuild,
                     std::vector<RawStep>& out) {
  for (size_t i = 0; i < args.size(); ++i) {
    size_t from = out.size();
    seq_rec(sig, ctx, args[i], out);
    if (out.size() == from) continue;
    std::vector<TermPtr> frame;
    frame.reserve(args.size());
    for (size_t k = 0; k < args.size(); ++k)
      frame.push_back(k < i ? triples[k].target : triples[k].source);
    wrap_steps(out, from, [&](const TermPtr& hole_ctx) {
      std::vector<TermPtr> parts = frame;
      parts[i] = hole_ctx;
      return rebuild(std::move(parts));
    });
  }
}

inline void seq_rec(const Signature2& sig, const Context& ctx, const RedPtr& p,
                    std::vector<RawStep>& out) {
  switch (p->kind) {
    case Reduction::Kind::VarRefl:
    case Reduction::Kind::UnitRefl:
      return;
    case Reduction::Kind::VComp:
      seq_rec(sig, ctx, p->a, out);
      seq_rec(sig, ctx, p->b, out);
      return;
    case Reduction::Kind::RuleApp: {
      const RewriteRule& rule = sig.rule(p->rule);
      bool all_id = true;
      std::vector<Triple> triples;
      triples.reserve(p->args.size());
      for (auto& a : p->args) {
        triples.push_back(typecheck_reduction(ctx, a, sig));
        if (!is_identity_reduction(a)) all_id = false;
      }
      std::vector<TermPtr> targets;
      for (auto& t : triples) targets.push_back(t.target);
      if (!all_id) {
        // argument steps first, under the lhs
        std::vector<RedPtr> args_ctx_order(p->args.begin(), p->args.end());
        RedPtr lw = left_whisker(rule.lhs, args_ctx_order);
        RedPtr lwn = normalize_reduction(sig, ctx, lw, rule.type);
        seq_rec(sig, ctx, lwn, out);
      }
      out.push_back(RawStep{Term::hole(rule.type), p->rule, targets});
      return;
    }
    case Reduction::Kind::ConstCong: {
      std::vector<Triple> triples;
      for (auto& a : p->args) triples.push_back(typecheck_reduction(ctx, a, sig));
      int op = p->op;
      seq_args(sig, ctx, p->args, triples,
               [op](std::vector<TermPtr>&& parts) {
                 return Term::cst(op, std::move(parts));
               },
               out);
      return;
    }
    case Reduction::Kind::LambdaCong: {
      Context c2 = ctx.extended(fresh_name(ctx, p->hint), p->binder);
      size_t from = out.size();
      seq_rec(sig, c2, p->a, out);
      TypePtr b = p->binder;
      std::string h = p->hint;
      wrap_steps(out, from, [&b, &h](const TermPtr& c) {
        return Term::lam(b, c, h);
      });
      return;
    }
    case Reduction::Kind::AppCong: {
      std::vector<Triple> triples{typecheck_reduction(ctx, p->a, sig),
                                  typecheck_reduction(ctx, p->b, sig)};
      seq_args(sig, ctx, {p->a, p->b}, triples,
               [](std::vector<TermPtr>&& parts) {
                 return Term::app(parts[0], parts[1]);
               },
               out);
      return;
    }
    case Reduction::Kind::PairCong: {
      std::vector<Triple> triples{typecheck_reduction(ctx, p->a, sig),
                                  typecheck_reduction(ctx, p->b, sig)};
      seq_args(sig, ctx, {p->a, p->b}, triples,
               [](std::vector<TermPtr>&& parts) {
                 return Term::pair(parts[0], parts[1]);
               },
               out);
      return;
    }
    case Reduction::Kind::Proj1Cong:
    case Reduction::Kind::Proj2Cong: {
      size_t from = out.size();
      seq_rec(sig, ctx, p->a, out);
      bool first = p->kind == Reduction::Kind::Proj1Cong;
      wrap_steps(out, from, [first](const TermPtr& c) {
        return first ? Term::proj1(c) : Term::proj2(c);
      });
      return;
    }
  }
}

}  // namespace pseq

// ---------------------------------------------------------------------------
// Elementary steps and canonical forms
// ---------------------------------------------------------------------------

// A single-rule whiskered step: plugging the rule's instantiated sides into
// the hole of `context` and beta-eta-normalizing yields source/target.
struct ElementaryStep {
  TermPtr context;            // one Hole node
  Path position;              // path of the hole in `context`
  int rule = -1;
  std::vector<TermPtr> args;  // rule-context order
  TermPtr source, target;     // whole-term endpoints
};

struct CanonicalForm {
  std::vector<ElementaryStep> steps;
  TermPtr source, target;
  TypePtr type;
  // honest: every step is a positional rewrite on the normal source; only
  // such forms are reordered by standardization.
  bool honest = true;
};

inline bool elementary_step_equal(const ElementaryStep& a, const ElementaryStep& b) {
  if (a.rule != b.rule || a.position != b.position) return false;
  if (a.args.size() != b.args.size()) return false;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!alpha_equal(a.args[i], b.args[i])) return false;
  return alpha_equal(a.context, b.context);
}

inline bool canonical_equal(const CanonicalForm& x, const CanonicalForm& y) {
  if (x.steps.size() != y.steps.size()) return false;
  for (size_t i = 0; i < x.steps.size(); ++i)
    if (!elementary_step_equal(x.steps[i], y.steps[i])) return false;
  return alpha_equal(x.source, y.source) && alpha_equal(x.target, y.target) &&
         type_equal(x.type, y.type);
}

namespace pcanon {

inline Path hole_path(const TermPtr& t) {
  std::vector<Path> holes;
  Path cur;
  std::function<void(const TermPtr&)> walk = [&](const TermPtr& x) {
    if (x->kind == Term::Kind::Hole) holes.push_back(cur);
    switch (x->kind) {
      case Term::Kind::Const:
        for (size_t i = 0; i < x->args.size(); ++i) {
          cur.push_back(static_cast<int>(i));
          walk(x->args[i]);
          cur.pop_back();
        }
        break;
      case Term::Kind::Lambda:
      case Term::Kind::Proj1:
      case Term::Kind::Proj2:
        cur.push_back(0);
        walk(x->a);
        cur.pop_back();
        break;
      case Term::Kind::App:
      case Term::Kind::Pair:
        cur.push_back(0);
        walk(x->a);
        cur.pop_back();
        cur.push_back(1);
        walk(x->b);
        cur.pop_back();
        break;
      default: break;
    }
  };
  walk(t);
  if (holes.size() != 1)
    throw Error(Errc::InvalidStep, "step context must have exactly one hole");
  return holes[0];
}

// Resolve a raw step into honest positional steps via origin labels: the
// instantiated lhs is marked, plugged into the context and the whole term is
// normalized; surviving marks are the real rewrite positions (zero marks:
// the step was erased; several: the step acts at each copy, left to right).
// Returns false when the step cannot be made positional (kept virtual).
inline bool resolve_step(const Signature2& sig, const Context& ctx,
                         const TypePtr& whole_type, const RawStep& rs,
                         std::vector<ElementaryStep>& out) {
  const RewriteRule& rule = sig.rule(rs.rule);
  Path hp = hole_path(rs.context);
  Context local = context_at(ctx, rs.context, hp);
  TermPtr inst = beta_eta_normalize(sig, local, subst_term(rule.lhs, rs.args),
                                    rule.type);
  TermPtr whole = replace_at(rs.context, hp, inst->with_label(1));
  TermPtr before = beta_eta_normalize(sig, ctx, whole, whole_type);
  std::vector<Path> marks = labelled_positions(before, 1);
  before = term_unlabel(before);
  if (marks.empty()) return true;  // erased step
  if (!is_pattern_lhs(rule)) return false;
  TermPtr cur = before;
  for (const Path& mp : marks) {
    TermPtr sub = subterm_at(cur, mp);
    Context mlocal = context_at(ctx, cur, mp);
    auto ms = match_rule(sig, rule, sub, mlocal);
    if (ms.empty()) return false;
    TermPtr after = fire_step(sig, ctx, cur, rule, mp, ms[0], whole_type);
    out.push_back(ElementaryStep{replace_at(cur, mp, Term::hole(rule.type)), mp,
                                 rs.rule, ms[0], cur, after});
    cur = after;
  }
  return true;
}

// Where does a relative path land within a rule's lhs pattern: inside the
// image of a pattern variable (safe for residual tracking) or on the rigid
// skeleton (an overlap; residual projection is not defined there).
enum class PatternRegion { Skeleton, Sigma };

inline PatternRegion pattern_region(const TermPtr& pat, const Path& q,
                                    size_t i = 0, int j = 0) {
  {
    std::vector<TermPtr> spine;
    const TermPtr& h = detail::spine_head(pat, spine);
    if (h->kind == Term::Kind::Var && h->index >= j) return PatternRegion::Sigma;
  }
  if (i == q.size()) return PatternRegion::Skeleton;
  int c = q[i];
  switch (pat->kind) {
    case Term::Kind::Lambda:
      return pattern_region(pat->a, q, i + 1, j + 1);
    case Term::Kind::App:
    case Term::Kind::Pair:
      return pattern_region(c == 0 ? pat->a : pat->b, q, i + 1, j);
    case Term::Kind::Proj1:
    case Term::Kind::Proj2:
      return pattern_region(pat->a, q, i + 1, j);
    case Term::Kind::Const:
      if (c >= 0 && static_cast<size_t>(c) < pat->args.size())
        return pattern_region(pat->args[static_cast<size_t>(c)], q, i + 1, j);
      return PatternRegion::Skeleton;
    default:
      return PatternRegion::Skeleton;
  }
}

inline bool is_prefix(const Path& p, const Path& q) {
  if (p.size() > q.size()) return false;
  return std::equal(p.begin(), p.end(), q.begin());
}

// A non-residual trace step tears a tracked residual when either redex
// reaches into the other's rigid pattern skeleton. In orthogonal systems
// this cannot happen; with overlapping rules the extraction must not commute
// across such a step.
inline bool overlap_tears(const Signature2& sig, const std::vector<Path>& roots,
                          int u_rule, int s_rule, const Path& s_pos) {
  for (const Path& r : roots) {
    if (is_prefix(r, s_pos)) {
      Path q(s_pos.begin() + static_cast<long>(r.size()), s_pos.end());
      if (pattern_region(sig.rule(u_rule).lhs, q) == PatternRegion::Skeleton)
        return true;
    }
    if (is_prefix(s_pos, r) && s_pos.size() < r.size()) {
      Path q(r.begin() + static_cast<long>(s_pos.size()), r.end());
      if (pattern_region(sig.rule(s_rule).lhs, q) == PatternRegion::Skeleton)
        return true;
    }
  }
  return false;
}

// Fire an honest step on a (possibly labelled) term, rematching in place.
inline TermPtr refire(const Signature2& sig, const Context& ctx,
                      const TypePtr& whole_type, const TermPtr& state,
                      int rule_id, const Path& pos) {
  const RewriteRule& rule = sig.rule(rule_id);
  TermPtr sub = subterm_at(state, pos);
  Context local = context_at(ctx, state, pos);
  auto ms = match_rule(sig, rule, sub, local);
  if (ms.empty())
    throw Error(Errc::InvalidStep, "refire: step no longer matches");
  return fire_step(sig, ctx, state, rule, pos, ms[0], whole_type);
}

// Does the trace fire a residual of redex u, consuming every copy?
inline bool performed(const Signature2& sig, const Context& ctx,
                      const TypePtr& whole_type,
                      const std::vector<ElementaryStep>& steps,
                      const RewriteStep& u) {
  TermPtr x = replace_at(u.before, u.position,
                         subterm_at(u.before, u.position)->with_label(1));
  bool fired = false;
  for (const auto& s : steps) {
    std::vector<Path> roots = labelled_positions(x, 1);
    if (roots.empty()) break;  // all residuals consumed already
    bool is_residual = s.rule == u.rule &&
                       std::find(roots.begin(), roots.end(), s.position) !=
                           roots.end();
    if (is_residual) {
      fired = true;
    } else if (overlap_tears(sig, roots, u.rule, s.rule, s.position)) {
      return false;  // critical overlap: no residual commutation
    }
    x = refire(sig, ctx, whole_type, x, s.rule, s.position);
  }
  return fired && labelled_positions(x, 1).empty();
}

// Project the trace past redex u (which must be `performed`): the residual
// trace starting from u.after.
inline std::vector<ElementaryStep> project(const Signature2& sig,
                                           const Context& ctx,
                                           const TypePtr& whole_type,
                                           const std::vector<ElementaryStep>& steps,
                                           const RewriteStep& u) {
  // X: pre-side with u-residual roots labelled 1. Y: post-side (all current
  // u-residuals fired).
  TermPtr x = replace_at(u.before, u.position,
                         subterm_at(u.before, u.position)->with_label(1));
  TermPtr y = u.after;
  std::vector<ElementaryStep> out;
  for (const auto& s : steps) {
    std::vector<Path> uroots = labelled_positions(x, 1);
    bool is_residual = s.rule == u.rule &&
                       std::find(uroots.begin(), uroots.end(), s.position) !=
                           uroots.end();
    if (is_residual) {
      // already fired on the post-side
      x = refire(sig, ctx, whole_type, x, s.rule, s.position);
      continue;
    }
    if (overlap_tears(sig, uroots, u.rule, s.rule, s.position))
      throw Error(Errc::InvalidStep, "project: critical overlap");
    // locate s's copies on the post-side: mark s's root with label 2, run the
    // development of the remaining u-residuals
    TermPtr marked = replace_at(x, s.position,
                                subterm_at(x, s.position)->with_label(2));
    TermPtr z = marked;
    for (;;) {
      std::vector<Path> roots = labelled_positions(z, 1);
      if (roots.empty()) break;
      z = refire(sig, ctx, whole_type, z, u.rule, roots.front());
    }
    std::vector<Path> copies = labelled_positions(z, 2);
    // fire s's copies on the post-side, left to right
    for (const Path& q : copies) {
      TermPtr before = term_unlabel(y);
      TermPtr sub = subterm_at(before, q);
      Context local = context_at(ctx, before, q);
      auto ms = match_rule(sig, sig.rule(s.rule), sub, local);
      if (ms.empty())
        throw Error(Errc::InvalidStep, "project: residual does not match");
      TermPtr after = fire_step(sig, ctx, before, sig.rule(s.rule), q, ms[0],
                                whole_type);
      out.push_back(ElementaryStep{replace_at(before, q, Term::hole(sig.rule(s.rule).type)),
                                   q, s.rule, ms[0], before, after});
      y = after;
    }
    x = refire(sig, ctx, whole_type, x, s.rule, s.position);
  }
  return out;
}

// Standardization by extraction: repeatedly pull the leftmost-outermost
// performed redex to the front and project the remainder past it. For
// orthogonal pattern systems this yields the standard representative of the
// permutation class.
inline std::vector<ElementaryStep> standardize(const Signature2& sig,
                                               const Context& ctx,
                                               const TypePtr& whole_type,
                                               std::vector<ElementaryStep> steps) {
  std::vector<ElementaryStep> out;
  int fuel = 200 + 40 * static_cast<int>(steps.size() * steps.size());
  while (!steps.empty()) {
    if (--fuel < 0) {  // safety net: keep the remaining order
      for (auto& s : steps) out.push_back(s);
      return out;
    }
    TermPtr cur = steps.front().source;
    bool extracted = false;
    for (const RewriteStep& u : rewrite_once(sig, ctx, cur)) {
      try {
        if (!performed(sig, ctx, whole_type, steps, u)) continue;
      } catch (const Error&) {
        continue;
      }
      std::vector<ElementaryStep> rest;
      try {
        rest = project(sig, ctx, whole_type, steps, u);
      } catch (const Error&) {
        continue;
      }
      out.push_back(ElementaryStep{
          replace_at(u.before, u.position, Term::hole(sig.rule(u.rule).type)),
          u.position, u.rule, u.args, u.before, u.after});
      steps = std::move(rest);
      extracted = true;
      break;
    }
    if (!extracted) {
      out.push_back(steps.front());
      steps.erase(steps.begin());
    }
  }
  return out;
}

}  // namespace pcanon

// ---------------------------------------------------------------------------
// canonicalize: proof eta-long beta-normalization, sequentialization into
// elementary steps, erasure of dead steps, and standardization of the step
// order.
// ---------------------------------------------------------------------------

inline CanonicalForm canonicalize(const Signature2& sig,
                                  const ReductionJudgment& j) {
  RedPtr normal = normalize_reduction(sig, j.ctx, j.proof, j.type);
  std::vector<RawStep> raw;
  pseq::seq_rec(sig, j.ctx, normal, raw);
  CanonicalForm cf;
  cf.source = j.source;
  cf.target = j.target;
  cf.type = j.type;
  cf.honest = true;
  std::vector<ElementaryStep> steps;
  for (const RawStep& rs : raw) {
    if (!pcanon::resolve_step(sig, j.ctx, j.type, rs, steps)) {
      // virtual step: keep the raw context form, skip standardization
      Path hp = pcanon::hole_path(rs.context);
      Context local = context_at(j.ctx, rs.context, hp);
      const RewriteRule& rule = sig.rule(rs.rule);
      TermPtr src = beta_eta_normalize(
          sig, j.ctx,
          replace_at(rs.context, hp,
                     beta_eta_normalize(sig, local, subst_term(rule.lhs, rs.args),
                                        rule.type)),
          j.type);
      TermPtr tgt = beta_eta_normalize(
          sig, j.ctx,
          replace_at(rs.context, hp,
                     beta_eta_normalize(sig, local, subst_term(rule.rhs, rs.args),
                                        rule.type)),
          j.type);
      steps.push_back(ElementaryStep{rs.context, hp, rs.rule, rs.args, src, tgt});
      cf.honest = false;
    }
  }
  if (cf.honest) {
    std::vector<ElementaryStep> sorted =
        pcanon::standardize(sig, j.ctx, j.type, steps);
    // The chain must still connect the judgment endpoints; standardization
    // never changes them, so a broken chain means an unsupported overlap
    // configuration and the sequentialized order is kept instead.
    TermPtr cur = beta_eta_normalize(sig, j.ctx, j.source, j.type);
    bool chain_ok = true;
    for (const auto& s : sorted) {
      if (!alpha_equal(s.source, cur)) chain_ok = false;
      cur = s.target;
    }
    if (!alpha_equal(cur, beta_eta_normalize(sig, j.ctx, j.target, j.type)))
      chain_ok = false;
    if (chain_ok) steps = std::move(sorted);
  }
  cf.steps = std::move(steps);
  return cf;
}

// Rebuild a proof from a canonical form: the vertical composition of the
// embedded elementary steps (identity of the source when empty).
inline RedPtr resequentialize(const Signature2& sig, const CanonicalForm& cf) {
  if (cf.steps.empty()) return identity_reduction(cf.source);
  RedPtr acc;
  TermPtr acc_target;
  for (const auto& s : cf.steps) {
    std::vector<RedPtr> idargs;
    idargs.reserve(s.args.size());
    for (auto& a : s.args) idargs.push_back(identity_reduction(a));
    RedPtr core = Reduction::rule_app(s.rule, std::move(idargs));
    std::function<RedPtr(const TermPtr&)> wrap = [&](const TermPtr& c) -> RedPtr {
      switch (c->kind) {
        case Term::Kind::Hole: return core;
        case Term::Kind::Var: return Reduction::var(c->index);
        case Term::Kind::Unit: return Reduction::unit();
        case Term::Kind::Const: {
          std::vector<RedPtr> as;
          for (auto& x : c->args) as.push_back(wrap(x));
          return Reduction::cst(c->op, std::move(as));
        }
        case Term::Kind::Lambda:
          return Reduction::lam(c->binder, wrap(c->a), c->hint);
        case Term::Kind::App: return Reduction::app(wrap(c->a), wrap(c->b));
        case Term::Kind::Pair: return Reduction::pair(wrap(c->a), wrap(c->b));
        case Term::Kind::Proj1: return Reduction::proj1(wrap(c->a));
        case Term::Kind::Proj2: return Reduction::proj2(wrap(c->a));
      }
      throw Error(Errc::InvalidStep, "resequentialize: bad context");
    };
    RedPtr one = wrap(s.context);
    if (!acc) {
      acc = one;
    } else {
      acc = Reduction::vcomp(acc, acc_target, one);
    }
    acc_target = s.target;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// perm_equiv
// ---------------------------------------------------------------------------

struct OracleTraceEntry {
  std::string equation;
  std::string proof;
};

struct EquivCertificate {
  bool verdict = false;
  std::string reason;
  CanonicalForm left, right;
  std::optional<std::vector<OracleTraceEntry>> oracle_trace;
};

inline EquivCertificate perm_equiv(const Signature2& sig,
                                   const ReductionJudgment& p,
                                   const ReductionJudgment& q) {
  EquivCertificate cert;
  if (p.ctx.size() != q.ctx.size())
    throw Error(Errc::TypeMismatch, "perm_equiv: different contexts");
  for (size_t i = 0; i < p.ctx.size(); ++i)
    if (!type_equal(p.ctx.vars[i].second, q.ctx.vars[i].second))
      throw Error(Errc::TypeMismatch, "perm_equiv: different contexts");
  if (!type_equal(p.type, q.type) || !alpha_equal(p.source, q.source) ||
      !alpha_equal(p.target, q.target)) {
    cert.verdict = false;
    cert.reason = "endpoint triples differ";
    return cert;
  }
  cert.left = canonicalize(sig, p);
  cert.right = canonicalize(sig, q);
  cert.verdict = canonical_equal(cert.left, cert.right);
  if (!cert.verdict) cert.reason = "canonical forms differ";
  return cert;
}

// ---------------------------------------------------------------------------
// R(X) round trip: flatten a proof into a standard rewrite trace.
// ---------------------------------------------------------------------------

inline Trace flatten_proof(const Signature2& sig, const ReductionJudgment& j) {
  CanonicalForm cf = canonicalize(sig, j);
  if (!cf.honest)
    throw Error(Errc::NonPatternLhs,
                "flatten_proof requires pattern rules (an HRS signature)");
  Trace tr{cf.source, {}};
  for (const auto& s : cf.steps)
    tr.steps.push_back(RewriteStep{s.rule, s.position, s.args, s.source, s.target});
  return tr;
}

}  // namespace perm2
