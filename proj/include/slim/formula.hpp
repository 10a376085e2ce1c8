// Goal formulas, definite clauses and programs.
#pragma once

#include <map>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "slim/term.hpp"

namespace slim {

struct Binding {
  std::string name;
  Type type;
};

enum class GoalKind { True, False, Atom, And, Exists, Forall, Eq, Guard };

// Forall binds an Eigen name, Exists binds a LogicVar name.
class Goal {
 public:
  Goal() = default;
  static Goal truth();
  static Goal falsity();
  static Goal atom(Term a);
  static Goal conj(Goal l, Goal r);
  static Goal exists(std::string var, Type type, Goal body);
  static Goal forall(std::string var, Type type, Goal body);
  static Goal eq(Term l, Term r, Type type);
  static Goal guard(Term l, Term r, Type type, Goal body);

  bool valid() const { return node_ != nullptr; }
  GoalKind kind() const;
  bool is(GoalKind k) const { return kind() == k; }
  const Term& atom_term() const;  // Atom
  const Term& lhs() const;        // Eq, Guard
  const Term& rhs() const;        // Eq, Guard
  const Type& type() const;       // Eq, Guard: equality type; Exists, Forall: binder type
  const std::string& var() const; // Exists, Forall
  const Goal& left() const;       // And
  const Goal& right() const;      // And
  const Goal& body() const;       // Exists, Forall, Guard

 private:
  struct Node;
  explicit Goal(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Applies f to every term of the goal (binder names are left alone).
Goal map_terms(const Goal& g, const std::function<Term(const Term&)>& f);
Goal apply_subst(const Substitution& theta, const Goal& g);
// Replaces free occurrences of an eigen or logic variable, respecting shadowing.
Goal replace_eigen(const Goal& g, const std::string& name, const Term& by);
Goal replace_logic_var(const Goal& g, const std::string& name, const Term& by);

bool goal_alpha_eq(const Goal& a, const Goal& b);
bool has_atoms(const Goal& g);
bool has_exists(const Goal& g);
// Free names not bound by the goal's own quantifiers.
std::set<std::string> free_logic_vars(const Goal& g);
std::set<std::string> free_eigens(const Goal& g);

struct DefiniteClause {
  std::vector<Binding> universals;  // logic variable names
  Term head;
  Goal body;
};

struct Program {
  Signature sig;
  std::vector<DefiniteClause> clauses;

  std::vector<std::size_t> clauses_for(const std::string& pred) const;
};

const std::string& predicate_of(const Term& atom);

struct Violation {
  std::string message;
};

// Checks the goal grammar against sig; vars types free logic variables and eigens.
std::vector<Violation> check_goal(const Signature& sig, const Goal& g, const TypeMap& vars = {});
std::vector<Violation> check_clause(const Signature& sig, const DefiniteClause& d);

DefiniteClause rename_clause(const DefiniteClause& d, NameSupply& fresh);

}  // namespace slim
