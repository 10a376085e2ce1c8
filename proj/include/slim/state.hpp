// State formulas: raising, normalization, reduction, classification.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slim/formula.hpp"
#include "slim/term.hpp"

namespace slim {

// t = s at a primitive type. An equation that came from an arrow-typed guard
// carries the fresh local constants standing for the abstracted arguments.
struct Equation {
  Term lhs, rhs;
  Type type;
  std::vector<Binding> locals;
};

enum class TargetKind { Eq, Atom, False, True };

struct Target {
  TargetKind kind = TargetKind::True;
  Term lhs, rhs;  // Eq; Atom keeps the atom in lhs
  Type type;      // Eq

  static Target eq(Term l, Term r, Type ty) { return {TargetKind::Eq, std::move(l), std::move(r), std::move(ty)}; }
  static Target atom(Term a) { return {TargetKind::Atom, std::move(a), {}, {}}; }
  static Target falsity() { return {TargetKind::False, {}, {}, {}}; }
  static Target truth() { return {}; }
};

struct GuardedGoal {
  std::vector<Binding> universals;  // eigen names
  std::vector<Equation> guards;
  Target target;

  bool has_universal(const std::string& name) const;
};

struct StateFormula {
  std::vector<Binding> existentials;  // logic variable names
  std::vector<GuardedGoal> conjuncts;

  std::optional<Type> existential_type(const std::string& name) const;
};

// x was replaced by raised applied to the universals named in scope.
struct RaisedVar {
  std::string original;
  Type type;
  std::string raised;
  std::vector<std::string> scope;
};

struct Normalization {
  StateFormula state;
  std::vector<RaisedVar> raising;
};

// Process-wide source of fresh names.
NameSupply& global_names();

Goal raise_step(const Goal& g);
Normalization normalize_with_raising(const Goal& g);
StateFormula normalize(const Goal& g);

// Replaces the target of conjunct i by g (under the same universals and
// guards) and re-normalizes; new existentials are appended to the prefix.
StateFormula replace_target(const StateFormula& s, std::size_t i, const Goal& g);
// Applies a substitution for existentials of s and re-normalizes. Bound
// existentials are replaced in the prefix by the fresh ones in fresh_vars.
StateFormula apply_to_state(const StateFormula& s, const Substitution& rho,
                            const std::vector<Binding>& fresh_vars = {});

enum class ReductionRule { DropIdentical, OccursCheck, Clash, Eliminate, Decompose };

struct ReductionStep {
  StateFormula state;
  ReductionRule rule;
  std::size_t conjunct;
  std::size_t guard;
};

// The signature supplies argument types when guards are decomposed.
std::optional<ReductionStep> reduce_step_detail(const Signature& sig, const StateFormula& s);
std::optional<StateFormula> reduce_step(const Signature& sig, const StateFormula& s);
StateFormula reduce(const Signature& sig, const StateFormula& s);
bool is_reduced(const Signature& sig, const StateFormula& s);

enum class Classification { Success, Failure, Active, SuspendedCandidate };
const char* to_string(Classification c);
Classification classify(const StateFormula& s);

bool target_is_flex_flex(const Target& t);

Goal guarded_to_goal(const GuardedGoal& g);
Goal to_goal(const StateFormula& s);
std::string print_state(const StateFormula& s);
// Alpha-canonical rendering: names are replaced positionally and terms eta-contracted.
std::string canonical_key(const StateFormula& s);
bool state_alpha_eq(const StateFormula& a, const StateFormula& b);

// Structural and typing invariants; empty when the state is well formed.
std::vector<std::string> state_violations(const Signature& sig, const StateFormula& s);

}  // namespace slim
