// Test-only oracles, goal generators and brute-force enumerators. None of
// this goes through normalize, reduce or search.
#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "slim/engine.hpp"
#include "slim/syntax.hpp"

namespace slim::testing {

using Assignment = std::map<std::string, Term>;

// Provability of a closed, existential-free, atom-free goal in the sequent
// calculus with equality: the left rule for s = t proceeds under the most
// general unifier of s and t (eigenvariables as unification variables) and
// succeeds outright when there is none. Terms must be first order after
// beta normalization.
bool oracle_provable(const Goal& g);

// theta[g] with the existentials bound in a replaced by their terms.
Goal substitute(const Goal& g, const Assignment& a);

struct ExVar {
  std::string name;
  Type type;
  std::vector<std::string> scope;  // universals in scope, outermost first
};

// Existentials of g with the universals that scope over each.
std::vector<ExVar> existentials_of(const Goal& g);

// All beta-normal terms of the given type (primitive or one arrow over
// primitives) built from sig's constants and the eigens in scope, with spine
// depth at most depth.
std::vector<Term> enumerate_terms(const Signature& sig, const std::vector<std::string>& scope,
                                  const Type& universal_type, const Type& type, unsigned depth);

struct Generated {
  Signature sig;
  Goal goal;
  std::vector<ExVar> ex;
};

// Random atom-free goal: at most 3 constants from {a, b, f, g} over type i, at
// most 2 existentials of type i or i -> i, guards over universals and
// constants only, targets with one existential-free side.
Generated generate(std::mt19937& rng);

// Every assignment of enumerated terms (depth <= depth) to the existentials
// of gen that the oracle proves. Returns false if the candidate space is
// larger than budget.
bool brute_force(const Generated& gen, unsigned depth, std::size_t budget, std::vector<Assignment>& out);
std::size_t candidate_count(const Generated& gen, unsigned depth);

// Whether a is an instance of theta, whose range may contain free variables
// standing for arbitrary terms (applied only to distinct eigenvariables).
bool instance_of(const Substitution& theta, const Assignment& a);

std::string show(const Assignment& a);

}  // namespace slim::testing

namespace slim::testing {

struct SuiteReport {
  std::size_t goals = 0;     // goals examined
  std::size_t skipped = 0;   // over the enumeration budget
  std::size_t checked = 0;   // solutions or candidates compared
  std::vector<std::string> failures;
};

// Criterion-style property runs over generate(); seeds make them repeatable.
SuiteReport soundness_suite(unsigned seed, std::size_t goals);
SuiteReport completeness_suite(unsigned seed, std::size_t goals);
SuiteReport preservation_suite(unsigned seed, std::size_t goals);

// h := \scope. t for a raised variable, given the original binding t.
Term raise_binding(const RaisedVar& r, const Term& t);

}  // namespace slim::testing
