#include "alp/closure.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace alp {

namespace {

bool is_intro_target(const Formula& g, Kind boxkind) {
  // Matches L_k O psi with O an awareness or C operator (for boxkind
  // ImplicitK), or E[i,j] L_j C[i,j] psi (for boxkind EqBox).
  if (boxkind == Kind::ImplicitK) {
    if (!g.is(Kind::ImplicitK)) return false;
    const Formula& o = g.lhs();
    return o.is(Kind::Aware) || o.is(Kind::CBox);
  }
  if (!g.is(Kind::EqBox)) return false;
  const Formula& l = g.lhs();
  if (!l.is(Kind::ImplicitK) || l.subject() != g.subject()) return false;
  const Formula& c = l.lhs();
  return c.is(Kind::CBox) && c.viewpoint() == g.viewpoint() && c.subject() == g.subject();
}

}  // namespace

std::vector<Formula> closure(const Formula& f, const std::set<AgentId>& agents) {
  if (!f) throw std::invalid_argument("closure: null formula");
  if (agents.empty()) throw std::invalid_argument("closure: empty agent set");
  if (contains_dynamic(f))
    throw std::invalid_argument("closure: update operators have no closure rules");
  for (const AgentId& g : agents_of(f)) {
    if (!agents.count(g))
      throw std::invalid_argument("closure: formula mentions undeclared agent '" + g + "'");
  }

  FormulaSet members;
  std::deque<Formula> work;
  auto add = [&](const Formula& g) {
    if (members.insert(g).second) work.push_back(g);
  };

  add(f);
  // Introspection for L/E subformulas of f itself.
  for (const Formula& s : subformulas(f)) {
    if (s.is(Kind::ImplicitK)) {
      add(L(s.subject(), s));
      add(L(s.subject(), Not(s)));
    } else if (s.is(Kind::EqBox)) {
      add(EqBox(s.viewpoint(), s.subject(), s));
      add(EqBox(s.viewpoint(), s.subject(), Not(s)));
    }
  }

  while (!work.empty()) {
    Formula g = work.front();
    work.pop_front();

    if (g.lhs()) add(g.lhs());
    if (g.rhs()) add(g.rhs());
    if (!g.is(Kind::Not)) add(Not(g));

    switch (g.kind()) {
      case Kind::Prop:
        for (const AgentId& i : agents) {
          for (const AgentId& j : agents) {
            add(Aware(i, j, g));
            add(And(Aware(i, i, g), Aware(i, j, g)));
            add(And(Aware(i, i, g), Aware(i, i, g)));
            add(EqBox(i, j, g));
          }
        }
        break;
      case Kind::Aware:
        for (const AgentId& k : agents) add(L(k, g));
        for (const Formula& s : subformulas(g.lhs()))
          add(Aware(g.viewpoint(), g.subject(), s));
        break;
      case Kind::CBox:
        add(EqBox(g.viewpoint(), g.subject(), L(g.subject(), g)));
        break;
      case Kind::ExplicitK:
        add(Aware(g.viewpoint(), g.subject(), g.lhs()));
        add(CBox(g.viewpoint(), g.subject(), g.lhs()));
        break;
      case Kind::ImplicitK:
        if (is_intro_target(g, Kind::ImplicitK)) {
          add(L(g.subject(), g));
          add(L(g.subject(), Not(g)));
        }
        break;
      case Kind::EqBox:
        if (is_intro_target(g, Kind::EqBox)) {
          add(EqBox(g.viewpoint(), g.subject(), g));
          add(EqBox(g.viewpoint(), g.subject(), Not(g)));
        }
        break;
      default:
        break;
    }
  }

  std::vector<Formula> out(members.begin(), members.end());
  std::sort(out.begin(), out.end(), FormulaLess{});
  return out;
}

}  // namespace alp
