#pragma once

#include <functional>
#include <string>
#include <vector>

#include "perm2/cells.hpp"
#include "perm2/generate.hpp"
#include "perm2/monad.hpp"
#include "perm2/permeq.hpp"
#include "perm2/whisker.hpp"

namespace perm2 {

// ---------------------------------------------------------------------------
// Property suites over generated instances: the crucial substitution
// proposition, the monad laws, interchange/middle-four, and the product
// isomorphism. Shared by the laws command and the acceptance suite; all
// deterministic given the seed.
// ---------------------------------------------------------------------------

struct LawReport {
  std::string name;
  int checked = 0;
  int failed = 0;
  std::vector<std::string> failures;
  bool ok() const { return failed == 0 && checked > 0; }
};

namespace laws_detail {

// A default sampling context: one variable per base sort plus one first-order
// function variable per sort.
inline Context sampling_context(const Signature2& sig) {
  Context ctx;
  for (size_t s = 0; s < sig.base.sort_names.size(); ++s) {
    TypePtr st = Type::mk_sort(static_cast<int>(s));
    ctx = ctx.extended("g" + std::to_string(s), Type::mk_exp(st, st));
    ctx = ctx.extended("v" + std::to_string(s), st);
  }
  return ctx;
}

inline bool pe(const Signature2& sig, const Context& ctx, const RedPtr& a,
               const RedPtr& b) {
  return perm_equiv(sig, make_judgment(sig, ctx, a), make_judgment(sig, ctx, b))
      .verdict;
}

}  // namespace laws_detail

// P[Q] == (M[Q] ; P[N']) and subst_reduction == subst_reduction_alt on
// sampled (P, Q) pairs.
inline LawReport crucial_proposition_suite(const Signature2& sig, int samples,
                                           uint64_t seed) {
  LawReport rep{"crucial-proposition", 0, 0, {}};
  Rng rng(seed);
  Context gamma = laws_detail::sampling_context(sig);
  std::vector<TypePtr> palette;
  for (size_t s = 0; s < sig.base.sort_names.size(); ++s) {
    TypePtr st = Type::mk_sort(static_cast<int>(s));
    palette.push_back(st);
    palette.push_back(Type::mk_exp(st, st));
  }
  int guard = samples * 400;
  while (rep.checked < samples && guard-- > 0) {
    try {
      // delta: one or two variables
      Context delta;
      int nd = 1 + rng.pick(2);
      for (int i = 0; i < nd; ++i)
        delta = delta.extended("u" + std::to_string(i),
                               palette[static_cast<size_t>(
                                   rng.pick(static_cast<int>(palette.size())))]);
      TypePtr ty = palette[static_cast<size_t>(
          rng.pick(static_cast<int>(palette.size())))];
      TermPtr m = gen_term(rng, sig, delta, ty, 6);
      RedPtr p = gen_proof_from(rng, sig, delta, m, 4);
      std::vector<RedPtr> q;
      std::vector<TermPtr> sources, targets;
      for (auto& v : delta.vars) {
        TermPtr n = gen_term(rng, sig, gamma, v.second, 5);
        RedPtr qi = gen_proof_from(rng, sig, gamma, n, 3);
        Triple t = typecheck_reduction(gamma, qi, sig);
        q.push_back(qi);
        sources.push_back(t.source);
        targets.push_back(t.target);
      }
      bool nontrivial = has_rule_app(p);
      for (auto& qi : q) nontrivial = nontrivial || has_rule_app(qi);
      if (!nontrivial) continue;
      Triple tp = typecheck_reduction(delta, p, sig);
      // P[Q] == M[Q] ;_{M[N']} P[N']
      RedPtr lhs = subst_reduction(sig, gamma, delta, p, q);
      RedPtr rhs = subst_reduction_alt(sig, gamma, delta, p, q);
      if (!laws_detail::pe(sig, gamma, lhs, rhs)) {
        rep.failed++;
        if (rep.failures.size() < 5)
          rep.failures.push_back("P = " + print_reduction(p, sig, delta));
      }
      rep.checked++;
    } catch (const Error&) {
      // resample on inhabitation misses
    }
  }
  return rep;
}

// Interchange and middle-four agreement on boundary-compatible quadruples.
inline LawReport interchange_suite(const Signature2& sig, int samples,
                                   uint64_t seed) {
  LawReport rep{"interchange", 0, 0, {}};
  Rng rng(seed);
  std::vector<TypePtr> objs;
  for (size_t s = 0; s < sig.base.sort_names.size(); ++s)
    objs.push_back(Type::mk_sort(static_cast<int>(s)));
  if (objs.empty()) return rep;
  int guard = samples * 400;
  while (rep.checked < samples && guard-- > 0) {
    try {
      TypePtr A = objs[static_cast<size_t>(rng.pick(static_cast<int>(objs.size())))];
      TypePtr B = objs[static_cast<size_t>(rng.pick(static_cast<int>(objs.size())))];
      TypePtr C = objs[static_cast<size_t>(rng.pick(static_cast<int>(objs.size())))];
      Context ca = cell_context(A);
      Context cb = cell_context(B);
      TermPtr m1 = gen_term(rng, sig, ca, B, 6);
      Cell2 alpha = make_cell2(sig, A, gen_proof_from(rng, sig, ca, m1, 4));
      Cell2 beta = make_cell2(sig, A, gen_proof_from(rng, sig, ca, alpha.tgt.body, 4));
      TermPtr n1 = gen_term(rng, sig, cb, C, 6);
      Cell2 gam = make_cell2(sig, B, gen_proof_from(rng, sig, cb, n1, 4));
      Cell2 theta = make_cell2(sig, B, gen_proof_from(rng, sig, cb, gam.tgt.body, 4));
      if (!has_rule_app(alpha.proof) && !has_rule_app(beta.proof) &&
          !has_rule_app(gam.proof) && !has_rule_app(theta.proof))
        continue;
      // interchange
      Cell2 lhs = hcompose(sig, vcompose(sig, alpha, beta), vcompose(sig, gam, theta));
      Cell2 rhs = vcompose(sig, hcompose(sig, alpha, gam), hcompose(sig, beta, theta));
      bool ok = cell2_equal(sig, lhs, rhs);
      // middle-four agreement for (alpha, gam)
      Cell2 direct = hcompose(sig, alpha, gam);
      Cell2 w1 = vcompose(sig, whisker_right_cell(sig, alpha.src, gam),
                          whisker_left_cell(sig, alpha, gam.tgt));
      Cell2 w2 = vcompose(sig, whisker_left_cell(sig, alpha, gam.src),
                          whisker_right_cell(sig, alpha.tgt, gam));
      ok = ok && cell2_equal(sig, direct, w1) && cell2_equal(sig, direct, w2);
      if (!ok) {
        rep.failed++;
        if (rep.failures.size() < 5)
          rep.failures.push_back("alpha = " + print_reduction(alpha.proof, sig, ca));
      }
      rep.checked++;
    } catch (const Error&) {
    }
  }
  return rep;
}

// Functoriality of whiskering in both directions.
inline LawReport whisker_functoriality_suite(const Signature2& sig, int samples,
                                             uint64_t seed) {
  LawReport rep{"whisker-functoriality", 0, 0, {}};
  Rng rng(seed);
  std::vector<TypePtr> objs;
  for (size_t s = 0; s < sig.base.sort_names.size(); ++s)
    objs.push_back(Type::mk_sort(static_cast<int>(s)));
  if (objs.empty()) return rep;
  int guard = samples * 400;
  while (rep.checked < samples && guard-- > 0) {
    try {
      TypePtr A = objs[static_cast<size_t>(rng.pick(static_cast<int>(objs.size())))];
      TypePtr B = objs[static_cast<size_t>(rng.pick(static_cast<int>(objs.size())))];
      Context ca = cell_context(A);
      Context cb = cell_context(B);
      TermPtr m1 = gen_term(rng, sig, ca, B, 6);
      Cell2 alpha = make_cell2(sig, A, gen_proof_from(rng, sig, ca, m1, 3));
      Cell2 beta = make_cell2(sig, A, gen_proof_from(rng, sig, ca, alpha.tgt.body, 3));
      if (!has_rule_app(alpha.proof) && !has_rule_app(beta.proof)) continue;
      Cell1 n = make_cell1(sig, B, B, gen_term(rng, sig, cb, B, 5));
      Cell2 lhs = vcompose(sig, whisker_left_cell(sig, alpha, n),
                           whisker_left_cell(sig, beta, n));
      Cell2 rhs = whisker_left_cell(sig, vcompose(sig, alpha, beta), n);
      bool ok = cell2_equal(sig, lhs, rhs);
      // right-whisker law
      Cell1 m = make_cell1(sig, B, A, gen_term(rng, sig, cb, A, 5));
      Cell2 l2 = vcompose(sig, whisker_right_cell(sig, m, alpha),
                          whisker_right_cell(sig, m, beta));
      Cell2 r2 = whisker_right_cell(sig, m, vcompose(sig, alpha, beta));
      ok = ok && cell2_equal(sig, l2, r2);
      if (!ok) rep.failed++;
      rep.checked++;
    } catch (const Error&) {
    }
  }
  return rep;
}

// Product isomorphism round trips and unit-typed collapse.
inline LawReport product_iso_suite(const Signature2& sig, int samples,
                                   uint64_t seed) {
  LawReport rep{"product-isomorphism", 0, 0, {}};
  Rng rng(seed);
  std::vector<TypePtr> objs;
  for (size_t s = 0; s < sig.base.sort_names.size(); ++s)
    objs.push_back(Type::mk_sort(static_cast<int>(s)));
  if (objs.empty()) return rep;
  int guard = samples * 400;
  while (rep.checked < samples && guard-- > 0) {
    try {
      TypePtr C = objs[static_cast<size_t>(rng.pick(static_cast<int>(objs.size())))];
      TypePtr A = objs[static_cast<size_t>(rng.pick(static_cast<int>(objs.size())))];
      TypePtr B = objs[static_cast<size_t>(rng.pick(static_cast<int>(objs.size())))];
      Context cc = cell_context(C);
      Cell2 r = make_cell2(sig, C,
                           gen_proof_from(rng, sig, cc, gen_term(rng, sig, cc, A, 5), 3));
      Cell2 s = make_cell2(sig, C,
                           gen_proof_from(rng, sig, cc, gen_term(rng, sig, cc, B, 5), 3));
      if (!has_rule_app(r.proof) && !has_rule_app(s.proof)) continue;
      Cell2 p = pair2(sig, r, s);
      auto [r2, s2] = split2(sig, p);
      bool ok = cell2_equal(sig, r, r2) && cell2_equal(sig, s, s2) &&
                cell2_equal(sig, p, pair2(sig, r2, s2));
      // unit-typed 2-cells collapse to the unit identity
      RedPtr u = Reduction::proj2(Reduction::pair(r.proof, Reduction::unit()));
      Cell2 cu = make_cell2(sig, C, u);
      ok = ok && cu.proof->kind == Reduction::Kind::UnitRefl;
      if (!ok) rep.failed++;
      rep.checked++;
    } catch (const Error&) {
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Monad laws on enumerated layered towers: unit laws over L(X) and
// associativity over L^3(X).
// ---------------------------------------------------------------------------

inline LawReport monad_law_suite(const Signature2& sig, int min_instances,
                                 uint64_t seed) {
  LawReport rep{"monad-laws", 0, 0, {}};
  Context ctx = laws_detail::sampling_context(sig);
  Rng rng(seed);
  // unit laws: eta then mu is the identity, on generated base proofs
  LayeredSignature unitl = unit_layer(sig);
  Signature2 usig = unitl.as_signature2();
  int unit_target = min_instances / 2;
  int guard = unit_target * 400;
  while (rep.checked < unit_target && guard-- > 0) {
    try {
      ReductionJudgment j = gen_judgment(rng, sig, ctx, 1, 5, 4);
      if (!has_rule_app(j.proof)) continue;
      // mu(eta-wrapped p): the whole proof as a single derived rule
      LayeredSignature one{
          sig, {derive_rule(sig, j, "whole")}};
      Signature2 osig = one.as_signature2();
      std::vector<RedPtr> vars;
      for (size_t i = 0; i < j.ctx.size(); ++i)
        vars.push_back(Reduction::var(static_cast<int>(j.ctx.size() - 1 - i)));
      RedPtr wrapped = Reduction::rule_app(0, vars);
      typecheck_reduction(j.ctx, wrapped, osig);
      RedPtr flat = mu_flatten(one, j.ctx, wrapped);
      bool ok = laws_detail::pe(sig, j.ctx, flat, j.proof);
      // mu(map eta p): every base rule application wrapped with its unit rule
      RedPtr mapped = map_unit_eta(j.proof);
      typecheck_reduction(j.ctx, mapped, usig);
      RedPtr flat2 = mu_flatten(unitl, j.ctx, mapped);
      ok = ok && laws_detail::pe(sig, j.ctx, flat2, j.proof);
      if (!ok) {
        rep.failed++;
        if (rep.failures.size() < 5)
          rep.failures.push_back("p = " + print_reduction(j.proof, sig, j.ctx));
      }
      rep.checked++;
    } catch (const Error&) {
    }
  }
  // associativity: enumerate small layered towers over derived rules
  int assoc_target = min_instances - rep.checked;
  // two derived rules over the base from sampled judgments
  std::vector<DerivedRule> d1s;
  int tries = 0;
  while (d1s.size() < 2 && tries++ < 60) {
    try {
      ReductionJudgment j = gen_judgment(rng, sig, ctx, 1, 5, 3);
      d1s.push_back(derive_rule(sig, j, "d1_" + std::to_string(d1s.size())));
    } catch (const Error&) {
    }
  }
  LayeredSignature l1{sig, d1s};
  Signature2 s1 = l1.as_signature2();
  // derived rules over L(X)
  std::vector<DerivedRule> d2s;
  for (size_t r = 0; r < s1.rules.size(); ++r)
    d2s.push_back(derive_rule(
        s1, make_judgment(s1, s1.rules[r].ctx, unit_eta(static_cast<int>(r), s1)),
        "d2_" + std::to_string(r)));
  LayeredSignature l2{s1, d2s};
  Signature2 s2 = l2.as_signature2();
  // enumerate proofs over L^2(X) of size <= 4 in each rule context and close
  // the associativity square through a third layer
  std::vector<DerivedRule> d3s;
  for (size_t r = 0; r < s2.rules.size(); ++r)
    d3s.push_back(derive_rule(
        s2, make_judgment(s2, s2.rules[r].ctx, unit_eta(static_cast<int>(r), s2)),
        "d3_" + std::to_string(r)));
  LayeredSignature l3{s2, d3s};
  Signature2 s3 = l3.as_signature2();
  ProofEnumerator en(s3);
  int emitted = 0;
  for (int size = 1; size <= 4 && emitted < assoc_target; ++size) {
    for (auto& e : en.proofs(ctx, size)) {
      if (emitted >= assoc_target) break;
      try {
        // route 1: flatten the outer layer, then the next
        RedPtr r1 = mu_flatten(l2, ctx, mu_flatten(l3, ctx, e.proof));
        // route 2: map the inner flattening through the outer layer
        std::vector<DerivedRule> d3m;
        for (auto& d : l3.derived)
          d3m.push_back(derive_rule(
              s1,
              make_judgment(s1, d.body.ctx, mu_flatten(l2, d.body.ctx, d.body.proof)),
              d.name + "_m"));
        LayeredSignature l3m{s1, d3m};
        RedPtr r2 = mu_flatten(l3m, ctx, e.proof);
        // both routes land in L(X); compare them there
        if (!laws_detail::pe(s1, ctx, r1, r2)) {
          rep.failed++;
          if (rep.failures.size() < 5)
            rep.failures.push_back("assoc: " + print_reduction(e.proof, s3, ctx));
        }
        rep.checked++;
        ++emitted;
      } catch (const Error&) {
      }
    }
  }
  return rep;
}

}  // namespace perm2
