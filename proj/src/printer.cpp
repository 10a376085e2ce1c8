#include <set>
#include <sstream>

#include "slim/syntax.hpp"

namespace slim {

namespace {

// Precedence levels for terms: 0 abstraction, 1 cons, 2 application, 3 argument.
class TermPrinter {
 public:
  TermPrinter(std::set<std::string> avoid, bool annotate)
      : avoid_(std::move(avoid)), annotate_(annotate) {}

  std::string print(const Term& t, int prec) {
    switch (t.kind()) {
      case TermKind::Const:
        if (t.name() == "::") return "(::)";
        return t.name();
      case TermKind::Eigen:
      case TermKind::LogicVar: return t.name();
      case TermKind::Bound:
        if (t.index() < binders_.size()) return binders_[binders_.size() - 1 - t.index()];
        return "#" + std::to_string(t.index());
      case TermKind::Lam: {
        std::string name = pick();
        binders_.push_back(name);
        std::string s = name;
        if (annotate_) s += ":" + print_type(t.binder_type());
        s += "\\ " + print(t.body(), 0);
        binders_.pop_back();
        return prec > 0 ? "(" + s + ")" : s;
      }
      case TermKind::App: {
        Spine sp = spine(t);
        if (sp.head.is(TermKind::Const) && sp.head.name() == "::" && sp.args.size() == 2) {
          std::string s = print(sp.args[0], 2) + " :: " + print(sp.args[1], 1);
          return prec > 1 ? "(" + s + ")" : s;
        }
        std::string s = print(sp.head, 3);
        for (const auto& a : sp.args) s += " " + print(a, 3);
        return prec > 2 ? "(" + s + ")" : s;
      }
    }
    return "?";
  }

  void avoid(const std::string& n) { avoid_.insert(n); }

 private:
  std::string pick() {
    for (std::size_t k = binders_.size() + 1;; ++k) {
      std::string n = "w" + std::to_string(k);
      if (avoid_.count(n)) continue;
      bool used = false;
      for (const auto& b : binders_) used = used || b == n;
      if (!used) return n;
    }
  }

  std::set<std::string> avoid_;
  bool annotate_;
  std::vector<std::string> binders_;
};

void free_names(const Term& t, std::set<std::string>& out) {
  collect_constants(t, out);
  collect_eigens(t, out);
  collect_logic_vars(t, out);
}

void goal_names(const Goal& g, std::set<std::string>& out) {
  switch (g.kind()) {
    case GoalKind::True:
    case GoalKind::False: return;
    case GoalKind::Atom: free_names(g.atom_term(), out); return;
    case GoalKind::And:
      goal_names(g.left(), out);
      goal_names(g.right(), out);
      return;
    case GoalKind::Exists:
    case GoalKind::Forall:
      out.insert(g.var());
      goal_names(g.body(), out);
      return;
    case GoalKind::Eq:
      free_names(g.lhs(), out);
      free_names(g.rhs(), out);
      return;
    case GoalKind::Guard:
      free_names(g.lhs(), out);
      free_names(g.rhs(), out);
      goal_names(g.body(), out);
      return;
  }
}

// Goal levels: 0 conjunction, 1 implication, 2 equality or atom.
class GoalPrinter {
 public:
  explicit GoalPrinter(std::set<std::string> avoid) : terms_(std::move(avoid), true) {}

  std::string print(const Goal& g, int level, bool followed) {
    switch (g.kind()) {
      case GoalKind::True: return "tt";
      case GoalKind::False: return "ff";
      case GoalKind::Atom: return terms_.print(g.atom_term(), 0 + 1);
      case GoalKind::And: {
        bool paren = level > 0;
        std::string s = print(g.left(), 0, true) + ", " + print(g.right(), 1, paren ? false : followed);
        return paren ? "(" + s + ")" : s;
      }
      case GoalKind::Guard: {
        bool paren = level > 1;
        std::string s = equation(g) + " => " + print(g.body(), 1, paren ? false : followed);
        return paren ? "(" + s + ")" : s;
      }
      case GoalKind::Eq: return equation(g);
      case GoalKind::Exists:
      case GoalKind::Forall: {
        std::string q = g.is(GoalKind::Forall) ? "pi " : "sigma ";
        std::string s = q + g.var() + ":" + print_type(g.type()) + "\\ " + print(g.body(), 0, false);
        return followed ? "(" + s + ")" : s;
      }
    }
    return "?";
  }

 private:
  std::string equation(const Goal& g) {
    return terms_.print(g.lhs(), 1) + " = " + terms_.print(g.rhs(), 1);
  }

  TermPrinter terms_;
};

}  // namespace

std::string print_type(const Type& t) { return type_to_string(t); }

std::string print_term(const Term& t) {
  std::set<std::string> names;
  free_names(t, names);
  return TermPrinter(names, false).print(t, 0);
}

std::string print_goal(const Goal& g) {
  std::set<std::string> names;
  goal_names(g, names);
  return GoalPrinter(names).print(g, 0, false);
}

std::string print_substitution(const Substitution& theta) {
  if (theta.bindings.empty()) return "{}";
  std::string out;
  for (const auto& [v, t] : theta.bindings) {
    if (!out.empty()) out += "; ";
    out += v + " := " + print_term(t);
  }
  return out;
}

std::string print_clause(const DefiniteClause& d) {
  std::set<std::string> names;
  free_names(d.head, names);
  goal_names(d.body, names);
  std::string s = TermPrinter(names, true).print(d.head, 0);
  if (!d.body.is(GoalKind::True)) s += " :- " + GoalPrinter(names).print(d.body, 0, false);
  return s + ".";
}

}  // namespace slim
