#include <iostream>

#include "perm2/cells.hpp"
#include "perm2/generate.hpp"
#include "perm2/laws.hpp"
#include "perm2/oracle.hpp"
#include "perm2/parse.hpp"
#include "perm2/sigops.hpp"

using namespace perm2;

static Signature2 sig = make_ccs_signature();

static void show(const char* name, const CanonicalForm& cf, const Context& ctx) {
  std::cout << "== " << name << " honest=" << cf.honest << " steps=" << cf.steps.size()
            << "\n";
  for (auto& s : cf.steps)
    std::cout << "   " << sig.rule(s.rule).name << " @ " << path_str(s.position)
              << " : " << print_term(s.source, sig.base, ctx) << " => "
              << print_term(s.target, sig.base, ctx) << "\n";
}

int main() {
  // replicate the interchange suite with the failing seed
  Rng rng(6);
  std::vector<TypePtr> objs{Type::mk_sort(0)};
  int checked = 0;
  for (int it = 0; it < 4000 && checked < 40; ++it) {
    try {
      TypePtr A = objs[0], B = objs[0];
      Context ca = cell_context(A);
      Context cb = cell_context(B);
      TermPtr m1 = gen_term(rng, sig, ca, B, 6);
      Cell2 alpha = make_cell2(sig, A, gen_proof_from(rng, sig, ca, m1, 4));
      Cell2 beta = make_cell2(sig, A, gen_proof_from(rng, sig, ca, alpha.tgt.body, 4));
      TermPtr n1 = gen_term(rng, sig, cb, B, 6);
      Cell2 gam = make_cell2(sig, B, gen_proof_from(rng, sig, cb, n1, 4));
      Cell2 theta = make_cell2(sig, B, gen_proof_from(rng, sig, cb, gam.tgt.body, 4));
      if (!has_rule_app(alpha.proof) && !has_rule_app(beta.proof) &&
          !has_rule_app(gam.proof) && !has_rule_app(theta.proof))
        continue;
      Cell2 lhs = hcompose(sig, vcompose(sig, alpha, beta), vcompose(sig, gam, theta));
      Cell2 rhs = vcompose(sig, hcompose(sig, alpha, gam), hcompose(sig, beta, theta));
      bool ok = cell2_equal(sig, lhs, rhs);
      Cell2 direct = hcompose(sig, alpha, gam);
      Cell2 w1 = vcompose(sig, whisker_right_cell(sig, alpha.src, gam),
                          whisker_left_cell(sig, alpha, gam.tgt));
      Cell2 w2 = vcompose(sig, whisker_left_cell(sig, alpha, gam.src),
                          whisker_right_cell(sig, alpha.tgt, gam));
      bool ok2 = cell2_equal(sig, direct, w1) && cell2_equal(sig, direct, w2);
      ++checked;
      if (!ok || !ok2) {
        std::cout << "FAIL at instance " << checked << " interchange=" << ok
                  << " middlefour=" << ok2 << "\n";
        Context cx = cell_context(objs[0]);
        std::cout << "alpha = " << print_reduction(alpha.proof, sig, cx) << "\n";
        std::cout << "beta  = " << print_reduction(beta.proof, sig, cx) << "\n";
        std::cout << "gamma = " << print_reduction(gam.proof, sig, cx) << "\n";
        std::cout << "theta = " << print_reduction(theta.proof, sig, cx) << "\n";
        if (!ok) {
          show("lhs", canonicalize(sig, make_judgment(sig, cx, lhs.proof)), cx);
          show("rhs", canonicalize(sig, make_judgment(sig, cx, rhs.proof)), cx);
          OracleResult orc = oracle_equiv(sig, make_judgment(sig, cx, lhs.proof),
                                          make_judgment(sig, cx, rhs.proof), 30000);
          std::cout << "oracle: " << oracle_verdict_name(orc.verdict) << " explored "
                    << orc.explored << "\n";
        }
        if (!ok2) {
          show("direct", canonicalize(sig, make_judgment(sig, cell_context(objs[0]), direct.proof)), cx);
          show("w1", canonicalize(sig, make_judgment(sig, cx, w1.proof)), cx);
          show("w2", canonicalize(sig, make_judgment(sig, cx, w2.proof)), cx);
        }
        return 1;
      }
    } catch (const Error&) {
    }
  }
  std::cout << "no failure in " << checked << " instances\n";
  return 0;
}
