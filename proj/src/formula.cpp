#include "alp/formula.hpp"

#include <functional>
#include <sstream>

namespace alp {

namespace {

std::size_t combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t str_hash(const std::string& s) { return std::hash<std::string>{}(s); }

}  // namespace

bool Formula::deep_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.size != b.size) return false;
  if (a.name != b.name || a.name2 != b.name2) return false;
  if (Formula(a.child1) != Formula(b.child1)) return false;
  return Formula(a.child2) == Formula(b.child2);
}

Formula Formula::make(Kind k, std::string name, std::string name2, Formula c1, Formula c2) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->name = std::move(name);
  n->name2 = std::move(name2);
  n->child1 = c1.node_;
  n->child2 = c2.node_;
  std::size_t h = combine(0, static_cast<std::size_t>(k) + 1);
  h = combine(h, str_hash(n->name));
  h = combine(h, str_hash(n->name2));
  h = combine(h, c1.hash());
  h = combine(h, c2.hash());
  n->hash = h;
  n->size = 1 + c1.size() + c2.size();
  return Formula(std::move(n));
}

Formula Prop(PropId name) { return Formula::make(Kind::Prop, std::move(name), "", {}, {}); }
Formula Not(Formula f) { return Formula::make(Kind::Not, "", "", std::move(f), {}); }
Formula And(Formula l, Formula r) { return Formula::make(Kind::And, "", "", std::move(l), std::move(r)); }
Formula Or(Formula l, Formula r) { return Formula::make(Kind::Or, "", "", std::move(l), std::move(r)); }
Formula Imp(Formula l, Formula r) { return Formula::make(Kind::Imp, "", "", std::move(l), std::move(r)); }
Formula Iff(Formula l, Formula r) { return Formula::make(Kind::Iff, "", "", std::move(l), std::move(r)); }
Formula Aware(AgentId i, AgentId j, Formula f) {
  return Formula::make(Kind::Aware, std::move(i), std::move(j), std::move(f), {});
}
Formula L(AgentId j, Formula f) {
  return Formula::make(Kind::ImplicitK, "", std::move(j), std::move(f), {});
}
Formula EqBox(AgentId i, AgentId j, Formula f) {
  return Formula::make(Kind::EqBox, std::move(i), std::move(j), std::move(f), {});
}
Formula CBox(AgentId i, AgentId j, Formula f) {
  return Formula::make(Kind::CBox, std::move(i), std::move(j), std::move(f), {});
}
Formula K(AgentId i, AgentId j, Formula f) {
  return Formula::make(Kind::ExplicitK, std::move(i), std::move(j), std::move(f), {});
}
Formula Plus(AgentId i, AgentId j, Formula content, Formula body) {
  return Formula::make(Kind::PlusUpdate, std::move(i), std::move(j), std::move(content), std::move(body));
}
Formula Minus(AgentId i, AgentId j, Formula content, Formula body) {
  return Formula::make(Kind::MinusUpdate, std::move(i), std::move(j), std::move(content), std::move(body));
}

int compare(const Formula& a, const Formula& b) {
  if (a == b) return 0;
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  if (!a) return -1;
  if (!b) return 1;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  if (int c = a.viewpoint().compare(b.viewpoint()); c != 0) return c < 0 ? -1 : 1;
  if (int c = a.subject().compare(b.subject()); c != 0) return c < 0 ? -1 : 1;
  if (int c = compare(a.lhs(), b.lhs()); c != 0) return c;
  return compare(a.rhs(), b.rhs());
}

std::set<PropId> atoms_of(const Formula& f) {
  std::set<PropId> out;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (!g) return;
    if (g.kind() == Kind::Prop) {
      out.insert(g.prop());
      return;
    }
    walk(g.lhs());
    walk(g.rhs());
  };
  walk(f);
  return out;
}

std::set<AgentId> agents_of(const Formula& f) {
  std::set<AgentId> out;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (!g) return;
    switch (g.kind()) {
      case Kind::Aware:
      case Kind::EqBox:
      case Kind::CBox:
      case Kind::ExplicitK:
      case Kind::PlusUpdate:
      case Kind::MinusUpdate:
        out.insert(g.viewpoint());
        out.insert(g.subject());
        break;
      case Kind::ImplicitK:
        out.insert(g.subject());
        break;
      default:
        break;
    }
    walk(g.lhs());
    walk(g.rhs());
  };
  walk(f);
  return out;
}

std::vector<Formula> subformulas(const Formula& f) {
  std::vector<Formula> out;
  FormulaSet seen;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (!g || !seen.insert(g).second) return;
    out.push_back(g);
    walk(g.lhs());
    walk(g.rhs());
  };
  walk(f);
  return out;
}

bool contains_dynamic(const Formula& f) {
  if (!f) return false;
  if (f.kind() == Kind::PlusUpdate || f.kind() == Kind::MinusUpdate) return true;
  return contains_dynamic(f.lhs()) || contains_dynamic(f.rhs());
}

namespace {

// Precedence: <-> 1, -> 2, | 3, & 4, prefixes 5, atoms 6.
int precedence(Kind k) {
  switch (k) {
    case Kind::Iff: return 1;
    case Kind::Imp: return 2;
    case Kind::Or: return 3;
    case Kind::And: return 4;
    case Kind::Prop: return 6;
    default: return 5;
  }
}

void render_into(const Formula& f, std::string& out);

// Wrap the child in parentheses when its precedence is too weak for the slot.
void render_child(const Formula& child, int min_prec, std::string& out) {
  if (precedence(child.kind()) < min_prec) {
    out += '(';
    render_into(child, out);
    out += ')';
  } else {
    render_into(child, out);
  }
}

void render_binary(const Formula& f, const char* op, int prec, bool right_assoc, std::string& out) {
  render_child(f.lhs(), right_assoc ? prec + 1 : prec, out);
  out += ' ';
  out += op;
  out += ' ';
  render_child(f.rhs(), right_assoc ? prec : prec + 1, out);
}

void render_into(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case Kind::Prop:
      out += f.prop();
      return;
    case Kind::Not:
      out += '~';
      render_child(f.lhs(), 5, out);
      return;
    case Kind::And:
      render_binary(f, "&", 4, false, out);
      return;
    case Kind::Or:
      render_binary(f, "|", 3, false, out);
      return;
    case Kind::Imp:
      render_binary(f, "->", 2, true, out);
      return;
    case Kind::Iff:
      render_binary(f, "<->", 1, false, out);
      return;
    case Kind::Aware:
      out += "A[" + f.viewpoint() + "," + f.subject() + "] ";
      render_child(f.lhs(), 5, out);
      return;
    case Kind::ImplicitK:
      out += "L[" + f.subject() + "] ";
      render_child(f.lhs(), 5, out);
      return;
    case Kind::EqBox:
      out += "E[" + f.viewpoint() + "," + f.subject() + "] ";
      render_child(f.lhs(), 5, out);
      return;
    case Kind::CBox:
      out += "C[" + f.viewpoint() + "," + f.subject() + "] ";
      render_child(f.lhs(), 5, out);
      return;
    case Kind::ExplicitK:
      out += "K[" + f.viewpoint() + "," + f.subject() + "] ";
      render_child(f.lhs(), 5, out);
      return;
    case Kind::PlusUpdate:
    case Kind::MinusUpdate:
      out += (f.kind() == Kind::PlusUpdate) ? "[+" : "[-";
      render_into(f.lhs(), out);
      out += "][" + f.viewpoint() + "," + f.subject() + "] ";
      render_child(f.rhs(), 5, out);
      return;
  }
}

}  // namespace

std::string render(const Formula& f) {
  std::string out;
  render_into(f, out);
  return out;
}

}  // namespace alp
