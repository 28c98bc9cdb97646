#pragma once

#include <vector>

#include "perm2/kernel.hpp"
#include "perm2/reduction.hpp"

namespace perm2 {

// ---------------------------------------------------------------------------
// Whiskering and substitution of reductions.
//
// Tuples are given in context order: q[0] is the image of the first
// (outermost) variable of the substituted context. Internally everything is
// de Bruijn, so tuples are reversed once at the boundary.
// ---------------------------------------------------------------------------

namespace detail {

// rev[i] = image of de Bruijn index i (viewed from depth 0).
inline std::vector<RedPtr> red_rev(const std::vector<RedPtr>& q) {
  return std::vector<RedPtr>(q.rbegin(), q.rend());
}

inline std::vector<RedPtr> red_rev_push(const std::vector<RedPtr>& rev) {
  std::vector<RedPtr> out;
  out.reserve(rev.size() + 1);
  out.push_back(Reduction::var(0));
  for (auto& r : rev) out.push_back(red_shift(r, 1));
  return out;
}

inline std::vector<TermPtr> term_rev_push(const std::vector<TermPtr>& rev) {
  std::vector<TermPtr> out;
  out.reserve(rev.size() + 1);
  out.push_back(Term::var(0));
  for (auto& t : rev) out.push_back(term_shift(t, 1));
  return out;
}

inline RedPtr left_whisker_rec(const TermPtr& m, const std::vector<RedPtr>& rev) {
  switch (m->kind) {
    case Term::Kind::Var: {
      if (m->index < 0 || static_cast<size_t>(m->index) >= rev.size())
        throw Error(Errc::ArityMismatch, "left_whisker: tuple too short");
      return rev[static_cast<size_t>(m->index)];
    }
    case Term::Kind::Unit: return Reduction::unit();
    case Term::Kind::Const: {
      std::vector<RedPtr> args;
      args.reserve(m->args.size());
      for (auto& x : m->args) args.push_back(left_whisker_rec(x, rev));
      return Reduction::cst(m->op, std::move(args));
    }
    case Term::Kind::Lambda:
      return Reduction::lam(m->binder, left_whisker_rec(m->a, red_rev_push(rev)),
                            m->hint);
    case Term::Kind::App:
      return Reduction::app(left_whisker_rec(m->a, rev),
                            left_whisker_rec(m->b, rev));
    case Term::Kind::Pair:
      return Reduction::pair(left_whisker_rec(m->a, rev),
                             left_whisker_rec(m->b, rev));
    case Term::Kind::Proj1: return Reduction::proj1(left_whisker_rec(m->a, rev));
    case Term::Kind::Proj2: return Reduction::proj2(left_whisker_rec(m->a, rev));
    case Term::Kind::Hole:
      throw Error(Errc::IllTyped, "left_whisker: hole in term");
  }
  throw Error(Errc::IllTyped, "left_whisker: malformed term");
}

inline RedPtr right_whisker_rec(const Signature2& sig, const Context& gamma,
                                const RedPtr& p, const std::vector<TermPtr>& rev) {
  switch (p->kind) {
    case Reduction::Kind::RuleApp: {
      std::vector<RedPtr> args;
      args.reserve(p->args.size());
      for (auto& x : p->args)
        args.push_back(right_whisker_rec(sig, gamma, x, rev));
      return Reduction::rule_app(p->rule, std::move(args));
    }
    case Reduction::Kind::VComp: {
      RedPtr l = right_whisker_rec(sig, gamma, p->a, rev);
      RedPtr r = right_whisker_rec(sig, gamma, p->b, rev);
      TermPtr mid = term_subst(p->mid, rev);
      mid = normalize_infer(sig, gamma, mid);
      return Reduction::vcomp(l, mid, r);
    }
    case Reduction::Kind::VarRefl: {
      if (p->index < 0 || static_cast<size_t>(p->index) >= rev.size())
        throw Error(Errc::ArityMismatch, "right_whisker: tuple too short");
      return identity_reduction(rev[static_cast<size_t>(p->index)]);
    }
    case Reduction::Kind::UnitRefl: return Reduction::unit();
    case Reduction::Kind::ConstCong: {
      std::vector<RedPtr> args;
      args.reserve(p->args.size());
      for (auto& x : p->args)
        args.push_back(right_whisker_rec(sig, gamma, x, rev));
      return Reduction::cst(p->op, std::move(args));
    }
    case Reduction::Kind::LambdaCong: {
      Context g2 = gamma.extended(fresh_name(gamma, p->hint), p->binder);
      return Reduction::lam(
          p->binder, right_whisker_rec(sig, g2, p->a, term_rev_push(rev)), p->hint);
    }
    case Reduction::Kind::AppCong:
      return Reduction::app(right_whisker_rec(sig, gamma, p->a, rev),
                            right_whisker_rec(sig, gamma, p->b, rev));
    case Reduction::Kind::PairCong:
      return Reduction::pair(right_whisker_rec(sig, gamma, p->a, rev),
                             right_whisker_rec(sig, gamma, p->b, rev));
    case Reduction::Kind::Proj1Cong:
      return Reduction::proj1(right_whisker_rec(sig, gamma, p->a, rev));
    case Reduction::Kind::Proj2Cong:
      return Reduction::proj2(right_whisker_rec(sig, gamma, p->a, rev));
  }
  throw Error(Errc::IllTyped, "right_whisker: malformed reduction");
}

}  // namespace detail

// M[Q]: substitute a tuple of reductions into a term.
// m is over delta; q (context order, one entry per delta variable) is over
// gamma; the result is a reduction over gamma from M[sources] to M[targets].
inline RedPtr left_whisker(const TermPtr& m, const std::vector<RedPtr>& q) {
  return detail::left_whisker_rec(m, detail::red_rev(q));
}

// P[N]: substitute a tuple of terms into a reduction.
// p is over delta; n (context order) is over gamma.
inline RedPtr right_whisker(const Signature2& sig, const Context& gamma,
                            const RedPtr& p, const std::vector<TermPtr>& n) {
  std::vector<TermPtr> rev(n.rbegin(), n.rend());
  return detail::right_whisker_rec(sig, gamma, p, rev);
}

// P[Q] = P[N] ;_{M'[N]} M'[Q], where N are the sources of Q and M' is the
// target of P. p is over delta, q over gamma.
inline RedPtr subst_reduction(const Signature2& sig, const Context& gamma,
                              const Context& delta, const RedPtr& p,
                              const std::vector<RedPtr>& q) {
  if (q.size() != delta.size())
    throw Error(Errc::ArityMismatch, "subst_reduction: tuple length");
  std::vector<TermPtr> sources;
  sources.reserve(q.size());
  for (auto& qi : q) {
    Triple t = typecheck_reduction(gamma, qi, sig);
    sources.push_back(t.source);
  }
  Triple tp = typecheck_reduction(delta, p, sig);
  RedPtr rw = right_whisker(sig, gamma, p, sources);
  TermPtr mid = beta_eta_normalize(sig, gamma, subst_term(tp.target, sources),
                                   tp.type);
  RedPtr lw = left_whisker(tp.target, q);
  return Reduction::vcomp(rw, mid, lw);
}

// The other legitimate composite, M[Q] ;_{M[N']} P[N'] with N' the targets
// of Q; permutation-equivalent to subst_reduction.
inline RedPtr subst_reduction_alt(const Signature2& sig, const Context& gamma,
                                  const Context& delta, const RedPtr& p,
                                  const std::vector<RedPtr>& q) {
  if (q.size() != delta.size())
    throw Error(Errc::ArityMismatch, "subst_reduction_alt: tuple length");
  std::vector<TermPtr> targets;
  targets.reserve(q.size());
  for (auto& qi : q) {
    Triple t = typecheck_reduction(gamma, qi, sig);
    targets.push_back(t.target);
  }
  Triple tp = typecheck_reduction(delta, p, sig);
  RedPtr lw = left_whisker(tp.source, q);
  TermPtr mid = beta_eta_normalize(sig, gamma, subst_term(tp.source, targets),
                                   tp.type);
  RedPtr rw = right_whisker(sig, gamma, p, targets);
  return Reduction::vcomp(lw, mid, rw);
}

// ---------------------------------------------------------------------------
// Grafting: replace variables by reductions in place. Valid only when the
// host is VComp-free or every image is an identity (a vertical composition
// runs its halves at different states, so a non-identity image cannot be
// duplicated into both). Callers dispatch to subst_reduction otherwise.
// rev[i] = image of de Bruijn index i; termrev are matching term images used
// for embedded middle terms.
// ---------------------------------------------------------------------------

inline RedPtr red_graft(const Signature2& sig, const Context& gamma,
                        const RedPtr& p, const std::vector<RedPtr>& rev,
                        const std::vector<TermPtr>& termrev) {
  switch (p->kind) {
    case Reduction::Kind::VarRefl: {
      if (p->index < 0 || static_cast<size_t>(p->index) >= rev.size())
        throw Error(Errc::ArityMismatch, "red_graft: tuple too short");
      return rev[static_cast<size_t>(p->index)];
    }
    case Reduction::Kind::UnitRefl: return p;
    case Reduction::Kind::RuleApp:
    case Reduction::Kind::ConstCong: {
      auto r = std::make_shared<Reduction>(*p);
      for (auto& x : r->args) x = red_graft(sig, gamma, x, rev, termrev);
      return r;
    }
    case Reduction::Kind::VComp: {
      auto r = std::make_shared<Reduction>(*p);
      r->a = red_graft(sig, gamma, p->a, rev, termrev);
      r->b = red_graft(sig, gamma, p->b, rev, termrev);
      TermPtr mid = term_subst(p->mid, termrev);
      r->mid = normalize_infer(sig, gamma, mid);
      return r;
    }
    case Reduction::Kind::LambdaCong: {
      Context g2 = gamma.extended(fresh_name(gamma, p->hint), p->binder);
      auto r = std::make_shared<Reduction>(*p);
      r->a = red_graft(sig, g2, p->a, detail::red_rev_push(rev),
                       detail::term_rev_push(termrev));
      return r;
    }
    case Reduction::Kind::AppCong:
    case Reduction::Kind::PairCong: {
      auto r = std::make_shared<Reduction>(*p);
      r->a = red_graft(sig, gamma, p->a, rev, termrev);
      r->b = red_graft(sig, gamma, p->b, rev, termrev);
      return r;
    }
    case Reduction::Kind::Proj1Cong:
    case Reduction::Kind::Proj2Cong: {
      auto r = std::make_shared<Reduction>(*p);
      r->a = red_graft(sig, gamma, p->a, rev, termrev);
      return r;
    }
  }
  throw Error(Errc::IllTyped, "red_graft: malformed reduction");
}

}  // namespace perm2
