#include "support/closure_oracle.hpp"

#include <algorithm>

namespace oracle {

using namespace alp;

FormulaSet closure_rule_additions(const FormulaSet& S, const std::vector<Formula>& sub_f,
                                  const std::set<AgentId>& agents) {
  FormulaSet add;
  auto want = [&](const Formula& g) {
    if (!S.count(g)) add.insert(g);
  };

  for (const Formula& psi : S) {
    // rule 2
    for (const Formula& s : subformulas(psi)) want(s);
    // rule 3
    if (psi.kind() != Kind::Not) want(Not(psi));
    // rule 4
    if (psi.kind() == Kind::Prop) {
      for (const AgentId& i : agents) {
        for (const AgentId& j : agents) {
          want(Aware(i, j, psi));
          want(And(Aware(i, i, psi), Aware(i, j, psi)));
          want(And(Aware(i, i, psi), Aware(i, i, psi)));
          want(EqBox(i, j, psi));
        }
      }
    }
    // rule 5
    if (psi.kind() == Kind::Aware) {
      for (const AgentId& k : agents) want(L(k, psi));
      for (const Formula& chi : subformulas(psi.lhs())) want(Aware(psi.viewpoint(), psi.subject(), chi));
    }
    // rule 8
    if (psi.kind() == Kind::CBox) want(EqBox(psi.viewpoint(), psi.subject(), L(psi.subject(), psi)));
    // rule 9
    if (psi.kind() == Kind::ImplicitK &&
        (psi.lhs().kind() == Kind::Aware || psi.lhs().kind() == Kind::CBox)) {
      want(L(psi.subject(), psi));
      want(L(psi.subject(), Not(psi)));
    }
    // rule 10
    if (psi.kind() == Kind::EqBox) {
      Formula inner = psi.lhs();
      if (inner.kind() == Kind::ImplicitK && inner.subject() == psi.subject()) {
        Formula c = inner.lhs();
        if (c.kind() == Kind::CBox && c.viewpoint() == psi.viewpoint() &&
            c.subject() == psi.subject()) {
          want(EqBox(psi.viewpoint(), psi.subject(), psi));
          want(EqBox(psi.viewpoint(), psi.subject(), Not(psi)));
        }
      }
    }
    // rule 11
    if (psi.kind() == Kind::ExplicitK) {
      want(Aware(psi.viewpoint(), psi.subject(), psi.lhs()));
      want(CBox(psi.viewpoint(), psi.subject(), psi.lhs()));
    }
  }

  // rules 6 and 7, keyed to subformulas of the original formula
  for (const Formula& s : sub_f) {
    if (s.kind() == Kind::ImplicitK) {
      want(L(s.subject(), s));
      want(L(s.subject(), Not(s)));
    }
    if (s.kind() == Kind::EqBox) {
      want(EqBox(s.viewpoint(), s.subject(), s));
      want(EqBox(s.viewpoint(), s.subject(), Not(s)));
    }
  }
  return add;
}

std::vector<Formula> closure_fixpoint(const Formula& f, const std::set<AgentId>& agents) {
  FormulaSet S;
  S.insert(f);
  const std::vector<Formula> sub_f = subformulas(f);
  while (true) {
    FormulaSet add = closure_rule_additions(S, sub_f, agents);
    if (add.empty()) break;
    for (const Formula& g : add) S.insert(g);
  }
  std::vector<Formula> out(S.begin(), S.end());
  std::sort(out.begin(), out.end(), FormulaLess{});
  return out;
}

}  // namespace oracle
