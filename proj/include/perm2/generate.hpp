#pragma once

#include <functional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "perm2/kernel.hpp"
#include "perm2/reduction.hpp"
#include "perm2/rewrite.hpp"
#include "perm2/signature.hpp"

namespace perm2 {

// ---------------------------------------------------------------------------
// Deterministic seeded generation and bounded exhaustive enumeration, used by
// the property suites and the laws command. The size of a term or proof is
// its AST node count (middle terms of compositions not counted).
// ---------------------------------------------------------------------------

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(uint64_t seed) : eng(seed) {}
  int pick(int n) {
    return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(eng));
  }
  bool chance(double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(eng) < p;
  }
};

namespace gen_detail {

inline std::string ctx_key(const Context& ctx) {
  std::ostringstream os;
  for (auto& v : ctx.vars) {
    type_key_rec(os, v.second);
    os << ";";
  }
  return os.str();
}

inline std::string type_key(const TypePtr& t) {
  std::ostringstream os;
  type_key_rec(os, t);
  return os.str();
}

}  // namespace gen_detail

// ---------------------------------------------------------------------------
// Exhaustive enumeration of beta-eta-normal terms of a given type and exact
// size, over a context. Sorts are inhabited through neutral spines.
// ---------------------------------------------------------------------------

class TermEnumerator {
 public:
  explicit TermEnumerator(const Signature2& sig) : sig_(sig) {}

  // all normal terms of `type` over `ctx` with AST size exactly `size`
  const std::vector<TermPtr>& values(const Context& ctx, const TypePtr& type,
                                     int size) {
    std::string key = "v" + std::to_string(size) + "|" +
                      gen_detail::ctx_key(ctx) + "|" + gen_detail::type_key(type);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::vector<TermPtr> out;
    if (size >= 1) switch (type->kind) {
        case Type::Kind::Unit:
          if (size == 1) out.push_back(Term::unit());
          break;
        case Type::Kind::Product:
          for (int ls = 1; ls < size - 1; ++ls)
            for (auto& l : values(ctx, type->a, ls))
              for (auto& r : values(ctx, type->b, size - 1 - ls))
                out.push_back(Term::pair(l, r));
          break;
        case Type::Kind::Exponential: {
          Context c2 = ctx.extended(fresh_name(ctx, "z"), type->a);
          for (auto& b : values(c2, type->b, size - 1))
            out.push_back(Term::lam(type->a, b, c2.vars.back().first));
          break;
        }
        case Type::Kind::Sort:
          for (auto& [t, ty] : neutrals(ctx, size))
            if (type_equal(ty, type)) out.push_back(t);
          break;
      }
    return memo_.emplace(std::move(key), std::move(out)).first->second;
  }

  // all neutral terms (head + elimination spine) with exact size, typed
  const std::vector<std::pair<TermPtr, TypePtr>>& neutrals(const Context& ctx,
                                                           int size) {
    std::string key = "n" + std::to_string(size) + "|" + gen_detail::ctx_key(ctx);
    auto it = nmemo_.find(key);
    if (it != nmemo_.end()) return it->second;
    std::vector<std::pair<TermPtr, TypePtr>> out;
    if (size == 1) {
      for (size_t i = 0; i < ctx.size(); ++i) {
        int idx = static_cast<int>(i);
        out.push_back({Term::var(idx), ctx.type_of(idx)});
      }
    }
    if (size >= 1) {
      for (size_t op = 0; op < sig_.base.op_names.size(); ++op) {
        const Sequent& sq = sig_.base.op_sequents[op];
        for (auto& args : tuples(ctx, sq.premises, size - 1))
          out.push_back({Term::cst(static_cast<int>(op), args), sq.conclusion});
      }
      for (int hs = 1; hs < size; ++hs) {
        for (auto& [h, ty] : neutrals(ctx, hs)) {
          if (ty->kind == Type::Kind::Exponential)
            for (auto& arg : values(ctx, ty->a, size - hs - 1))
              out.push_back({Term::app(h, arg), ty->b});
          if (ty->kind == Type::Kind::Product && size == hs + 1) {
            out.push_back({Term::proj1(h), ty->a});
            out.push_back({Term::proj2(h), ty->b});
          }
        }
      }
    }
    return nmemo_.emplace(std::move(key), std::move(out)).first->second;
  }

  // argument tuples with the given premise types and total size
  std::vector<std::vector<TermPtr>> tuples(const Context& ctx,
                                           const std::vector<TypePtr>& types,
                                           int size) {
    std::vector<std::vector<TermPtr>> out;
    if (types.empty()) {
      if (size == 0) out.push_back({});
      return out;
    }
    std::vector<TypePtr> rest(types.begin() + 1, types.end());
    int min_rest = static_cast<int>(rest.size());
    for (int hs = 1; hs <= size - min_rest; ++hs)
      for (auto& h : values(ctx, types[0], hs))
        for (auto& tl : tuples(ctx, rest, size - hs)) {
          std::vector<TermPtr> tup;
          tup.reserve(types.size());
          tup.push_back(h);
          for (auto& x : tl) tup.push_back(x);
          out.push_back(std::move(tup));
        }
    return out;
  }

 private:
  const Signature2& sig_;
  std::unordered_map<std::string, std::vector<TermPtr>> memo_;
  std::unordered_map<std::string, std::vector<std::pair<TermPtr, TypePtr>>> nmemo_;
};

// All beta-eta-normal terms of the type with size up to max_size.
inline std::vector<TermPtr> enumerate_terms(const Signature2& sig,
                                            const Context& ctx,
                                            const TypePtr& type, int max_size) {
  TermEnumerator e(sig);
  std::vector<TermPtr> out;
  for (int s = 1; s <= max_size; ++s)
    for (auto& t : e.values(ctx, type, s)) out.push_back(t);
  return out;
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration of well-typed reductions (arbitrary proofs, not
// only normal ones) of exact size over a context. Lambda-congruence binders
// range over the unit type and the base sorts.
// ---------------------------------------------------------------------------

struct EnumProof {
  RedPtr proof;
  Triple triple;
};

class ProofEnumerator {
 public:
  explicit ProofEnumerator(const Signature2& sig) : sig_(sig) {
    pal_.push_back(Type::mk_unit());
    for (size_t s = 0; s < sig.base.sort_names.size(); ++s)
      pal_.push_back(Type::mk_sort(static_cast<int>(s)));
  }

  const std::vector<EnumProof>& proofs(const Context& ctx, int size) {
    std::string key = std::to_string(size) + "|" + gen_detail::ctx_key(ctx);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::vector<EnumProof> out;
    auto add = [&](const RedPtr& p) {
      try {
        out.push_back({p, typecheck_reduction(ctx, p, sig_)});
      } catch (const Error&) {
      }
    };
    if (size == 1) {
      for (size_t i = 0; i < ctx.size(); ++i)
        add(Reduction::var(static_cast<int>(i)));
      add(Reduction::unit());
    } else if (size > 1) {
      for (auto& e : proofs(ctx, size - 1)) {
        add(Reduction::proj1(e.proof));
        add(Reduction::proj2(e.proof));
      }
      for (auto& b : pal_) {
        Context c2 = ctx.extended(fresh_name(ctx, "w"), b);
        for (auto& e : proofs(c2, size - 1))
          add(Reduction::lam(b, e.proof, c2.vars.back().first));
      }
      for (int ls = 1; ls < size - 1; ++ls) {
        const auto& lhsp = proofs(ctx, ls);
        const auto& rhsp = proofs(ctx, size - 1 - ls);
        for (auto& l : lhsp)
          for (auto& r : rhsp) {
            add(Reduction::app(l.proof, r.proof));
            add(Reduction::pair(l.proof, r.proof));
            if (type_equal(l.triple.type, r.triple.type) &&
                alpha_equal(l.triple.target, r.triple.source))
              add(Reduction::vcomp(l.proof, l.triple.target, r.proof));
          }
      }
      for (size_t op = 0; op < sig_.base.op_names.size(); ++op)
        for (auto& args :
             tuples(ctx, sig_.base.op_sequents[op].premises.size(), size - 1))
          add(Reduction::cst(static_cast<int>(op), args));
      for (size_t r = 0; r < sig_.rules.size(); ++r)
        for (auto& args : tuples(ctx, sig_.rules[r].ctx.size(), size - 1))
          add(Reduction::rule_app(static_cast<int>(r), args));
    }
    return memo_.emplace(std::move(key), std::move(out)).first->second;
  }

 private:
  std::vector<std::vector<RedPtr>> tuples(const Context& ctx, size_t arity,
                                          int budget) {
    std::vector<std::vector<RedPtr>> out;
    std::vector<RedPtr> cur;
    rec(ctx, arity, budget, cur, out);
    return out;
  }
  void rec(const Context& ctx, size_t arity, int budget, std::vector<RedPtr>& cur,
           std::vector<std::vector<RedPtr>>& out) {
    if (arity == 0) {
      if (budget == 0) out.push_back(cur);
      return;
    }
    for (int s = 1; s <= budget - static_cast<int>(arity) + 1; ++s)
      for (auto& e : proofs(ctx, s)) {
        cur.push_back(e.proof);
        rec(ctx, arity - 1, budget - s, cur, out);
        cur.pop_back();
      }
  }

  const Signature2& sig_;
  std::vector<TypePtr> pal_;
  std::unordered_map<std::string, std::vector<EnumProof>> memo_;
};

// All well-typed reductions over the context with size up to max_size.
inline std::vector<EnumProof> enumerate_reductions(const Signature2& sig,
                                                   const Context& ctx,
                                                   int max_size) {
  ProofEnumerator e(sig);
  std::vector<EnumProof> out;
  for (int s = 1; s <= max_size; ++s)
    for (auto& p : e.proofs(ctx, s)) out.push_back(p);
  return out;
}

// ---------------------------------------------------------------------------
// Random generation
// ---------------------------------------------------------------------------

inline TypePtr gen_type(Rng& rng, const Signature1& sig, int depth) {
  if (depth <= 0 || rng.chance(0.55)) {
    if (!sig.sort_names.empty() && !rng.chance(0.15))
      return Type::mk_sort(rng.pick(static_cast<int>(sig.sort_names.size())));
    return Type::mk_unit();
  }
  switch (rng.pick(3)) {
    case 0: return Type::mk_product(gen_type(rng, sig, depth - 1),
                                    gen_type(rng, sig, depth - 1));
    case 1: return Type::mk_exp(gen_type(rng, sig, depth - 1),
                                gen_type(rng, sig, depth - 1));
    default:
      return sig.sort_names.empty()
                 ? Type::mk_unit()
                 : Type::mk_sort(rng.pick(static_cast<int>(sig.sort_names.size())));
  }
}

// A beta-eta-normal term of the given type, drawn from the bounded
// enumeration (sizes up to `size`).
inline TermPtr gen_term(Rng& rng, const Signature2& sig, const Context& ctx,
                        const TypePtr& type, int size) {
  TermEnumerator e(sig);
  std::vector<const std::vector<TermPtr>*> pools;
  for (int k = 1; k <= size; ++k) {
    const auto& pool = e.values(ctx, type, k);
    if (!pool.empty()) pools.push_back(&pool);
  }
  if (pools.empty())
    throw Error(Errc::IllTyped, "gen_term: no inhabitants at this size");
  const auto& pool = *pools[rng.pick(static_cast<int>(pools.size()))];
  return pool[static_cast<size_t>(rng.pick(static_cast<int>(pool.size())))];
}

inline RedPtr gen_proof_from(Rng& rng, const Signature2& sig, const Context& ctx,
                             const TermPtr& source, int budget);

namespace gen_detail {

inline RedPtr gen_children(Rng& rng, const Signature2& sig, const Context& ctx,
                           const TermPtr& m, int budget) {
  switch (m->kind) {
    case Term::Kind::Var: return Reduction::var(m->index);
    case Term::Kind::Unit: return Reduction::unit();
    case Term::Kind::Const: {
      std::vector<RedPtr> args;
      for (auto& x : m->args)
        args.push_back(gen_proof_from(rng, sig, ctx, x, budget / 2));
      return Reduction::cst(m->op, std::move(args));
    }
    case Term::Kind::Lambda: {
      Context c2 = ctx.extended(fresh_name(ctx, m->hint), m->binder);
      return Reduction::lam(m->binder,
                            gen_proof_from(rng, sig, c2, m->a, budget - 1),
                            m->hint);
    }
    case Term::Kind::App:
      return Reduction::app(gen_proof_from(rng, sig, ctx, m->a, budget / 2),
                            gen_proof_from(rng, sig, ctx, m->b, budget / 2));
    case Term::Kind::Pair:
      return Reduction::pair(gen_proof_from(rng, sig, ctx, m->a, budget / 2),
                             gen_proof_from(rng, sig, ctx, m->b, budget / 2));
    case Term::Kind::Proj1:
      return Reduction::proj1(gen_proof_from(rng, sig, ctx, m->a, budget - 1));
    case Term::Kind::Proj2:
      return Reduction::proj2(gen_proof_from(rng, sig, ctx, m->a, budget - 1));
    case Term::Kind::Hole: break;
  }
  throw Error(Errc::IllTyped, "gen_children: malformed term");
}

}  // namespace gen_detail

// A well-typed reduction whose source is the given beta-eta-normal term:
// random mix of rule steps, congruence descent and vertical composition.
inline RedPtr gen_proof_from(Rng& rng, const Signature2& sig, const Context& ctx,
                             const TermPtr& source, int budget) {
  if (budget <= 0) return identity_reduction(source);
  if (rng.chance(0.45)) {
    std::vector<std::pair<size_t, std::vector<TermPtr>>> hits;
    for (size_t r = 0; r < sig.rules.size(); ++r) {
      if (!is_pattern_lhs(sig.rules[r])) continue;
      try {
        TypePtr ty = typecheck_term(ctx, source, sig);
        if (!type_equal(ty, sig.rules[r].type)) continue;
        auto ms = match_rule(sig, sig.rules[r], source, ctx);
        if (!ms.empty()) hits.push_back({r, ms[0]});
      } catch (const Error&) {
      }
    }
    if (!hits.empty()) {
      auto& hit = hits[static_cast<size_t>(rng.pick(static_cast<int>(hits.size())))];
      std::vector<RedPtr> pargs;
      for (auto& a : hit.second)
        pargs.push_back(rng.chance(0.3)
                            ? gen_proof_from(rng, sig, ctx, a, budget / 2)
                            : identity_reduction(a));
      RedPtr step = Reduction::rule_app(static_cast<int>(hit.first),
                                        std::move(pargs));
      if (rng.chance(0.5)) {
        Triple t = typecheck_reduction(ctx, step, sig);
        RedPtr rest = gen_proof_from(rng, sig, ctx, t.target, budget / 2);
        return Reduction::vcomp(step, t.target, rest);
      }
      return step;
    }
  }
  return gen_detail::gen_children(rng, sig, ctx, source, budget - 1);
}

// A random well-typed judgment over the signature.
inline ReductionJudgment gen_judgment(Rng& rng, const Signature2& sig,
                                      const Context& ctx, int type_depth,
                                      int term_size, int proof_budget) {
  for (int tries = 0; tries < 20; ++tries) {
    try {
      TypePtr ty = gen_type(rng, sig.base, type_depth);
      TermPtr m = gen_term(rng, sig, ctx, ty, term_size);
      RedPtr p = gen_proof_from(rng, sig, ctx, m, proof_budget);
      return make_judgment(sig, ctx, p);
    } catch (const Error&) {
    }
  }
  throw Error(Errc::IllTyped, "gen_judgment: exhausted retries");
}

}  // namespace perm2
