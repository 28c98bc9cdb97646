#pragma once

#include <string>
#include <vector>

#include "perm2/permeq.hpp"
#include "perm2/reduction.hpp"
#include "perm2/whisker.hpp"

namespace perm2 {

// ---------------------------------------------------------------------------
// The reduction monad L on 2-signatures. L(X) keeps the base sorts and
// operations; its rules are reductions over X, represented lazily by an
// explicit finite family of derived rules (mu and the monad laws only ever
// touch finitely many representatives).
// ---------------------------------------------------------------------------

// A rule of L(X): a named reduction judgment over the base signature. Its
// parallel pair is the judgment's (source, target).
struct DerivedRule {
  std::string name;
  ReductionJudgment body;
};

struct LayeredSignature {
  Signature2 base;
  std::vector<DerivedRule> derived;

  // The layered signature as a plain 2-signature: base sorts/operations with
  // the derived rules as its rule set (proofs over it apply derived rules
  // only).
  Signature2 as_signature2() const {
    Signature2 out;
    out.base = base.base;
    for (const DerivedRule& d : derived)
      out.add_rule(RewriteRule{d.name, d.body.ctx, d.body.source, d.body.target,
                               d.body.type});
    return out;
  }
};

// Wrap a judgment over the base as a rule of L(X).
inline DerivedRule derive_rule(const Signature2& base,
                               const ReductionJudgment& j, std::string name) {
  Triple t = typecheck_reduction(j.ctx, j.proof, base);  // throws when ill-typed
  if (!alpha_equal(t.source, j.source) || !alpha_equal(t.target, j.target) ||
      !type_equal(t.type, j.type))
    throw Error(Errc::IllTyped, "derive_rule: judgment does not typecheck");
  return DerivedRule{std::move(name), j};
}

// The unit of the monad on a rule r: the reduction r<x1, ..., xn> over r's
// own context, typechecking to r's parallel pair.
inline RedPtr unit_eta(int rule_id, const Signature2& sig) {
  const RewriteRule& r = sig.rule(rule_id);  // throws UnknownRule
  std::vector<RedPtr> args;
  args.reserve(r.ctx.size());
  for (size_t i = 0; i < r.ctx.size(); ++i)
    args.push_back(Reduction::var(static_cast<int>(r.ctx.size() - 1 - i)));
  return Reduction::rule_app(rule_id, std::move(args));
}

// The unit as a layered signature: one derived rule per base rule.
inline LayeredSignature unit_layer(const Signature2& base) {
  LayeredSignature out{base, {}};
  for (size_t r = 0; r < base.rules.size(); ++r) {
    RedPtr body = unit_eta(static_cast<int>(r), base);
    out.derived.push_back(
        derive_rule(base, make_judgment(base, base.rules[r].ctx, body),
                    "eta_" + base.rules[r].name));
  }
  return out;
}

// Image of a base proof under L(eta): every base rule application becomes an
// application of the corresponding unit-derived rule.
inline RedPtr map_unit_eta(const RedPtr& p) {
  switch (p->kind) {
    case Reduction::Kind::VarRefl:
    case Reduction::Kind::UnitRefl: return p;
    case Reduction::Kind::RuleApp: {
      auto r = std::make_shared<Reduction>(*p);
      for (auto& a : r->args) a = map_unit_eta(a);
      return r;  // rule ids align: unit_layer derives rules in base order
    }
    case Reduction::Kind::ConstCong: {
      auto r = std::make_shared<Reduction>(*p);
      for (auto& a : r->args) a = map_unit_eta(a);
      return r;
    }
    case Reduction::Kind::VComp: {
      auto r = std::make_shared<Reduction>(*p);
      r->a = map_unit_eta(p->a);
      r->b = map_unit_eta(p->b);
      return r;
    }
    case Reduction::Kind::LambdaCong:
    case Reduction::Kind::Proj1Cong:
    case Reduction::Kind::Proj2Cong: {
      auto r = std::make_shared<Reduction>(*p);
      r->a = map_unit_eta(p->a);
      return r;
    }
    case Reduction::Kind::AppCong:
    case Reduction::Kind::PairCong: {
      auto r = std::make_shared<Reduction>(*p);
      r->a = map_unit_eta(p->a);
      r->b = map_unit_eta(p->b);
      return r;
    }
  }
  return p;
}

// The multiplication mu: flatten a proof over L(X) (rule applications of
// derived rules) into a proof over X by substituting the derived bodies:
//   mu(R<P1, ..., Pn>) = body(R)[mu(P1), ..., mu(Pn)],
// all other constructors propagate.
inline RedPtr mu_flatten(const LayeredSignature& lay, const Context& ctx,
                         const RedPtr& p) {
  const Signature2& base = lay.base;
  switch (p->kind) {
    case Reduction::Kind::VarRefl:
    case Reduction::Kind::UnitRefl: return p;
    case Reduction::Kind::RuleApp: {
      if (p->rule < 0 || static_cast<size_t>(p->rule) >= lay.derived.size())
        throw Error(Errc::UnknownRule, "mu_flatten: unknown derived rule");
      const DerivedRule& d = lay.derived[static_cast<size_t>(p->rule)];
      std::vector<RedPtr> args;
      args.reserve(p->args.size());
      for (auto& a : p->args) args.push_back(mu_flatten(lay, ctx, a));
      return subst_reduction(base, ctx, d.body.ctx, d.body.proof, args);
    }
    case Reduction::Kind::ConstCong: {
      auto r = std::make_shared<Reduction>(*p);
      for (auto& a : r->args) a = mu_flatten(lay, ctx, a);
      return r;
    }
    case Reduction::Kind::VComp: {
      auto r = std::make_shared<Reduction>(*p);
      r->a = mu_flatten(lay, ctx, p->a);
      r->b = mu_flatten(lay, ctx, p->b);
      return r;
    }
    case Reduction::Kind::LambdaCong: {
      Context c2 = ctx.extended(fresh_name(ctx, p->hint), p->binder);
      auto r = std::make_shared<Reduction>(*p);
      r->a = mu_flatten(lay, c2, p->a);
      return r;
    }
    case Reduction::Kind::AppCong:
    case Reduction::Kind::PairCong: {
      auto r = std::make_shared<Reduction>(*p);
      r->a = mu_flatten(lay, ctx, p->a);
      r->b = mu_flatten(lay, ctx, p->b);
      return r;
    }
    case Reduction::Kind::Proj1Cong:
    case Reduction::Kind::Proj2Cong: {
      auto r = std::make_shared<Reduction>(*p);
      r->a = mu_flatten(lay, ctx, p->a);
      return r;
    }
  }
  throw Error(Errc::IllTyped, "mu_flatten: malformed reduction");
}

}  // namespace perm2
