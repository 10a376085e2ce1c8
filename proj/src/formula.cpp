#include "slim/formula.hpp"

#include <algorithm>

namespace slim {

struct Goal::Node {
  GoalKind kind;
  Term t1, t2;
  Type type;
  std::string var;
  Goal g1, g2;
};

Goal Goal::truth() {
  auto n = std::make_shared<Node>();
  n->kind = GoalKind::True;
  return Goal(std::move(n));
}

Goal Goal::falsity() {
  auto n = std::make_shared<Node>();
  n->kind = GoalKind::False;
  return Goal(std::move(n));
}

Goal Goal::atom(Term a) {
  auto n = std::make_shared<Node>();
  n->kind = GoalKind::Atom;
  n->t1 = std::move(a);
  return Goal(std::move(n));
}

Goal Goal::conj(Goal l, Goal r) {
  auto n = std::make_shared<Node>();
  n->kind = GoalKind::And;
  n->g1 = std::move(l);
  n->g2 = std::move(r);
  return Goal(std::move(n));
}

Goal Goal::exists(std::string var, Type type, Goal body) {
  auto n = std::make_shared<Node>();
  n->kind = GoalKind::Exists;
  n->var = std::move(var);
  n->type = std::move(type);
  n->g1 = std::move(body);
  return Goal(std::move(n));
}

Goal Goal::forall(std::string var, Type type, Goal body) {
  auto n = std::make_shared<Node>();
  n->kind = GoalKind::Forall;
  n->var = std::move(var);
  n->type = std::move(type);
  n->g1 = std::move(body);
  return Goal(std::move(n));
}

Goal Goal::eq(Term l, Term r, Type type) {
  auto n = std::make_shared<Node>();
  n->kind = GoalKind::Eq;
  n->t1 = std::move(l);
  n->t2 = std::move(r);
  n->type = std::move(type);
  return Goal(std::move(n));
}

Goal Goal::guard(Term l, Term r, Type type, Goal body) {
  auto n = std::make_shared<Node>();
  n->kind = GoalKind::Guard;
  n->t1 = std::move(l);
  n->t2 = std::move(r);
  n->type = std::move(type);
  n->g1 = std::move(body);
  return Goal(std::move(n));
}

GoalKind Goal::kind() const { return node_->kind; }
const Term& Goal::atom_term() const { return node_->t1; }
const Term& Goal::lhs() const { return node_->t1; }
const Term& Goal::rhs() const { return node_->t2; }
const Type& Goal::type() const { return node_->type; }
const std::string& Goal::var() const { return node_->var; }
const Goal& Goal::left() const { return node_->g1; }
const Goal& Goal::right() const { return node_->g2; }
const Goal& Goal::body() const { return node_->g1; }

Goal map_terms(const Goal& g, const std::function<Term(const Term&)>& f) {
  switch (g.kind()) {
    case GoalKind::True:
    case GoalKind::False: return g;
    case GoalKind::Atom: return Goal::atom(f(g.atom_term()));
    case GoalKind::And: return Goal::conj(map_terms(g.left(), f), map_terms(g.right(), f));
    case GoalKind::Exists: return Goal::exists(g.var(), g.type(), map_terms(g.body(), f));
    case GoalKind::Forall: return Goal::forall(g.var(), g.type(), map_terms(g.body(), f));
    case GoalKind::Eq: return Goal::eq(f(g.lhs()), f(g.rhs()), g.type());
    case GoalKind::Guard: return Goal::guard(f(g.lhs()), f(g.rhs()), g.type(), map_terms(g.body(), f));
  }
  return g;
}

Goal apply_subst(const Substitution& theta, const Goal& g) {
  if (theta.empty()) return g;
  return map_terms(g, [&](const Term& t) { return apply_subst(theta, t); });
}

namespace {

Goal replace_name(const Goal& g, GoalKind binder, const std::string& name,
                  const std::function<Term(const Term&)>& f) {
  switch (g.kind()) {
    case GoalKind::True:
    case GoalKind::False: return g;
    case GoalKind::Atom: return Goal::atom(f(g.atom_term()));
    case GoalKind::And:
      return Goal::conj(replace_name(g.left(), binder, name, f), replace_name(g.right(), binder, name, f));
    case GoalKind::Exists:
    case GoalKind::Forall:
      if (g.kind() == binder && g.var() == name) return g;
      if (g.kind() == GoalKind::Exists)
        return Goal::exists(g.var(), g.type(), replace_name(g.body(), binder, name, f));
      return Goal::forall(g.var(), g.type(), replace_name(g.body(), binder, name, f));
    case GoalKind::Eq: return Goal::eq(f(g.lhs()), f(g.rhs()), g.type());
    case GoalKind::Guard:
      return Goal::guard(f(g.lhs()), f(g.rhs()), g.type(), replace_name(g.body(), binder, name, f));
  }
  return g;
}

}  // namespace

Goal replace_eigen(const Goal& g, const std::string& name, const Term& by) {
  return replace_name(g, GoalKind::Forall, name,
                      [&](const Term& t) { return beta_normalize(replace_eigen(t, name, by)); });
}

Goal replace_logic_var(const Goal& g, const std::string& name, const Term& by) {
  Substitution s;
  s.bindings[name] = by;
  return replace_name(g, GoalKind::Exists, name, [&](const Term& t) { return apply_subst(s, t); });
}

namespace {

bool alpha_eq(const Goal& a, const Goal& b, unsigned& counter) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case GoalKind::True:
    case GoalKind::False: return true;
    case GoalKind::Atom: return term_eq(a.atom_term(), b.atom_term());
    case GoalKind::And:
      return alpha_eq(a.left(), b.left(), counter) && alpha_eq(a.right(), b.right(), counter);
    case GoalKind::Exists:
    case GoalKind::Forall: {
      if (a.type() != b.type()) return false;
      std::string common = "#" + std::to_string(counter++);
      bool ex = a.kind() == GoalKind::Exists;
      Term c = ex ? Term::logic_var(common) : Term::eigen(common);
      Goal ab = ex ? replace_logic_var(a.body(), a.var(), c) : replace_eigen(a.body(), a.var(), c);
      Goal bb = ex ? replace_logic_var(b.body(), b.var(), c) : replace_eigen(b.body(), b.var(), c);
      return alpha_eq(ab, bb, counter);
    }
    case GoalKind::Eq:
      return a.type() == b.type() && term_eq(a.lhs(), b.lhs()) && term_eq(a.rhs(), b.rhs());
    case GoalKind::Guard:
      return a.type() == b.type() && term_eq(a.lhs(), b.lhs()) && term_eq(a.rhs(), b.rhs()) &&
             alpha_eq(a.body(), b.body(), counter);
  }
  return false;
}

void free_names(const Goal& g, TermKind kind, std::set<std::string>& bound,
                std::set<std::string>& out) {
  auto terms = [&](const Term& t) {
    std::set<std::string> names;
    if (kind == TermKind::LogicVar) collect_logic_vars(t, names);
    else collect_eigens(t, names);
    for (const auto& n : names)
      if (!bound.count(n)) out.insert(n);
  };
  switch (g.kind()) {
    case GoalKind::True:
    case GoalKind::False: return;
    case GoalKind::Atom: terms(g.atom_term()); return;
    case GoalKind::And:
      free_names(g.left(), kind, bound, out);
      free_names(g.right(), kind, bound, out);
      return;
    case GoalKind::Exists:
    case GoalKind::Forall: {
      bool binds = (g.kind() == GoalKind::Exists) == (kind == TermKind::LogicVar);
      bool fresh = binds && bound.insert(g.var()).second;
      free_names(g.body(), kind, bound, out);
      if (fresh) bound.erase(g.var());
      return;
    }
    case GoalKind::Eq: terms(g.lhs()); terms(g.rhs()); return;
    case GoalKind::Guard:
      terms(g.lhs());
      terms(g.rhs());
      free_names(g.body(), kind, bound, out);
      return;
  }
}

}  // namespace

bool goal_alpha_eq(const Goal& a, const Goal& b) {
  unsigned counter = 0;
  return alpha_eq(a, b, counter);
}

bool has_atoms(const Goal& g) {
  switch (g.kind()) {
    case GoalKind::Atom: return true;
    case GoalKind::And: return has_atoms(g.left()) || has_atoms(g.right());
    case GoalKind::Exists:
    case GoalKind::Forall:
    case GoalKind::Guard: return has_atoms(g.body());
    default: return false;
  }
}

bool has_exists(const Goal& g) {
  switch (g.kind()) {
    case GoalKind::Exists: return true;
    case GoalKind::And: return has_exists(g.left()) || has_exists(g.right());
    case GoalKind::Forall:
    case GoalKind::Guard: return has_exists(g.body());
    default: return false;
  }
}

std::set<std::string> free_logic_vars(const Goal& g) {
  std::set<std::string> bound, out;
  free_names(g, TermKind::LogicVar, bound, out);
  return out;
}

std::set<std::string> free_eigens(const Goal& g) {
  std::set<std::string> bound, out;
  free_names(g, TermKind::Eigen, bound, out);
  return out;
}

const std::string& predicate_of(const Term& atom) { return head_of(atom).name(); }

std::vector<std::size_t> Program::clauses_for(const std::string& pred) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < clauses.size(); ++i)
    if (predicate_of(clauses[i].head) == pred) out.push_back(i);
  return out;
}

namespace {

struct GoalChecker {
  const Signature& sig;
  TypeMap vars;
  std::vector<Violation> out;

  void add(std::string m) { out.push_back({std::move(m)}); }

  std::optional<Type> type_of_term(const Term& t) {
    try {
      return type_of(sig, vars, t);
    } catch (const Error& e) {
      add(e.what());
      return std::nullopt;
    }
  }

  void check_equation(const Term& l, const Term& r, const Type& ty, const char* what) {
    if (contains_prop(ty)) add(std::string(what) + " at a type containing o");
    if (order(ty) > 1) add(std::string(what) + " at type " + type_to_string(ty) + " of order > 1");
    auto lt = type_of_term(l);
    auto rt = type_of_term(r);
    if (lt && *lt != ty) add(std::string(what) + " side has type " + type_to_string(*lt));
    if (rt && *rt != ty) add(std::string(what) + " side has type " + type_to_string(*rt));
  }

  void check_atom(const Term& a) {
    const Term& h = head_of(a);
    if (!h.is(TermKind::Const) || !sig.is_predicate(h.name())) {
      add("atom is not headed by a predicate");
      return;
    }
    auto ty = type_of_term(a);
    if (ty && !(ty->is_primitive() && ty->name() == kPropType)) add("atom is not fully applied");
  }

  void check(const Goal& g) {
    switch (g.kind()) {
      case GoalKind::True:
      case GoalKind::False: return;
      case GoalKind::Atom: check_atom(g.atom_term()); return;
      case GoalKind::And:
        check(g.left());
        check(g.right());
        return;
      case GoalKind::Forall:
      case GoalKind::Exists: {
        bool forall = g.kind() == GoalKind::Forall;
        if (contains_prop(g.type())) add("quantifier over a type containing o: " + g.var());
        if (forall && !g.type().is_primitive())
          add("universal " + g.var() + " at non-primitive type " + type_to_string(g.type()));
        if (!forall && order(g.type()) > 1)
          add("existential " + g.var() + " at type " + type_to_string(g.type()) + " of order > 1");
        auto saved = vars.find(g.var()) != vars.end() ? std::optional<Type>(vars[g.var()]) : std::nullopt;
        vars[g.var()] = g.type();
        check(g.body());
        if (saved) vars[g.var()] = *saved;
        else vars.erase(g.var());
        return;
      }
      case GoalKind::Eq: check_equation(g.lhs(), g.rhs(), g.type(), "equality"); return;
      case GoalKind::Guard:
        check_equation(g.lhs(), g.rhs(), g.type(), "guard");
        check(g.body());
        return;
    }
  }
};

}  // namespace

std::vector<Violation> check_goal(const Signature& sig, const Goal& g, const TypeMap& vars) {
  GoalChecker c{sig, vars, {}};
  c.check(g);
  return c.out;
}

std::vector<Violation> check_clause(const Signature& sig, const DefiniteClause& d) {
  TypeMap vars;
  std::vector<Violation> out;
  for (const auto& b : d.universals) {
    if (order(b.type) > 1) out.push_back({"clause variable " + b.name + " has order > 1"});
    if (contains_prop(b.type)) out.push_back({"clause variable " + b.name + " has a type containing o"});
    vars[b.name] = b.type;
  }
  std::set<std::string> free;
  collect_logic_vars(d.head, free);
  for (const auto& v : free_logic_vars(d.body)) free.insert(v);
  for (const auto& v : free)
    if (!vars.count(v)) out.push_back({"free variable " + v + " in clause"});
  std::set<std::string> eigens;
  collect_eigens(d.head, eigens);
  for (const auto& v : free_eigens(d.body)) eigens.insert(v);
  for (const auto& v : eigens)
    if (!sig.eigen(v)) out.push_back({"free eigenvariable " + v + " in clause"});
  GoalChecker c{sig, vars, {}};
  c.check_atom(d.head);
  c.check(d.body);
  out.insert(out.end(), c.out.begin(), c.out.end());
  return out;
}

DefiniteClause rename_clause(const DefiniteClause& d, NameSupply& fresh) {
  DefiniteClause out;
  Substitution s;
  for (const auto& b : d.universals) {
    std::string n = fresh.fresh(b.name);
    out.universals.push_back({n, b.type});
    s.bindings[b.name] = Term::logic_var(n);
  }
  out.head = apply_subst(s, d.head);
  out.body = apply_subst(s, d.body);
  return out;
}

}  // namespace slim
