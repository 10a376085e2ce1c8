// Transitions, bounded search, the existential-free decision procedure and
// solution checking.
#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "slim/formula.hpp"
#include "slim/state.hpp"

namespace slim {

enum class TransitionKind { Backchain, UnifIdentical, UnifDecompose, UnifClash, UnifImitate, UnifProject };
const char* to_string(TransitionKind k);

// A transition that has been chosen but not carried out.
struct Move {
  TransitionKind kind;
  std::size_t conjunct = 0;
  std::size_t clause = 0;  // Backchain
  std::size_t arg = 0;     // UnifProject
};

struct Transition {
  TransitionKind kind;
  std::size_t conjunct = 0;
  std::size_t clause = 0;
  std::size_t arg = 0;
  Substitution label;
  StateFormula next;  // normalized and reduced
  std::vector<Binding> fresh;  // existentials introduced by an imitation
};

std::vector<Move> unify_moves(const StateFormula& s, std::size_t conjunct, bool occurs_check_pruning);
std::vector<Move> backchain_moves(const Program& p, const StateFormula& s, std::size_t conjunct);
Transition realize(const Program& p, const StateFormula& s, const Move& m);

std::vector<Transition> unify_transitions(const Signature& sig, const StateFormula& s,
                                          bool occurs_check_pruning = true);
std::vector<Transition> backchain_transitions(const Program& p, const StateFormula& s);
std::vector<Transition> transitions(const Program& p, const StateFormula& s,
                                    bool occurs_check_pruning = true);

struct SearchConfig {
  std::size_t max_transitions = 500;
  std::size_t max_backchain_depth = 16;
  std::size_t max_imitation_per_var = 8;
  bool occurs_check_pruning = true;
  std::size_t max_solutions = 1;
  bool record_trace = false;
};

enum class OutcomeKind { Solution, Suspended, Exhausted };
const char* to_string(OutcomeKind k);

struct Outcome {
  OutcomeKind kind;
  Substitution theta;        // Solution: original existentials only
  StateFormula state;        // Suspended: residual state
  Substitution accumulated;  // composition of the labels along the path
  std::vector<Transition> trace;
  std::string reason;        // Exhausted
};

struct SearchStats {
  std::size_t transitions = 0;
  std::size_t pruned = 0;
  std::size_t iterations = 0;
  std::size_t depth_limit = 0;
  bool bound_hit = false;
};

struct SearchResult {
  std::vector<Outcome> outcomes;
  SearchStats stats;
  StateFormula initial;
  std::vector<RaisedVar> raising;

  std::size_t count(OutcomeKind k) const;
  std::vector<Substitution> solutions() const;
};

// on_outcome may return false to stop the search early.
SearchResult search(const Program& p, const Goal& g, const SearchConfig& cfg = {},
                    const std::function<bool(const Outcome&)>& on_outcome = {});

// Solution for the original existentials given the accumulated labels.
Substitution extract_solution(const std::vector<RaisedVar>& raising, const Substitution& acc,
                              const StateFormula& final_state);

bool decide_existential_free(const Signature& sig, const Goal& g);

enum class Verdict { Verified, Unverifiable, Refuted };
const char* to_string(Verdict v);

// theta[g]: existentials bound by theta are instantiated, free variables in
// the range of theta become outermost existentials.
Goal instantiate_goal(const Signature& sig, const Goal& g, const Substitution& theta);
Verdict check_solution(const Program& p, const Goal& g, const Substitution& theta,
                       const SearchConfig& cfg = {});

}  // namespace slim
