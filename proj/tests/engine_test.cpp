#include <gtest/gtest.h>

#include <filesystem>

#include "slim/engine.hpp"
#include "slim/syntax.hpp"
#include "support.hpp"

using namespace slim;
namespace fs = std::filesystem;

namespace {

const fs::path kCorpus = SLIM_CORPUS_DIR;

SourceFile empty_file() { return load_file(kCorpus / "empty.slim"); }

StateFormula start(const Signature& sig, const std::string& text) {
  return reduce(sig, normalize(parse_goal(text, sig)));
}

SearchConfig bounds(std::size_t max_transitions, std::size_t max_solutions) {
  SearchConfig c;
  c.max_transitions = max_transitions;
  c.max_solutions = max_solutions;
  return c;
}

std::size_t clauses_for(const Program& p, const std::string& pred) {
  std::size_t n = 0;
  for (const auto& c : p.clauses)
    if (head_of(c.head).name() == pred) ++n;
  return n;
}

}  // namespace

TEST(Unify, ImitateAndProject) {
  SourceFile f = empty_file();
  StateFormula s = start(f.sig, "sigma h\\ h a = a");
  auto ts = unify_transitions(f.sig, s);
  ASSERT_EQ(ts.size(), 2u);
  std::set<TransitionKind> kinds;
  for (const auto& t : ts) {
    kinds.insert(t.kind);
    EXPECT_EQ(t.label.bindings.size(), 1u);
    EXPECT_TRUE(state_violations(f.sig, t.next).empty());
  }
  EXPECT_EQ(kinds, (std::set<TransitionKind>{TransitionKind::UnifImitate, TransitionKind::UnifProject}));
}

TEST(Unify, ClashFails) {
  SourceFile f = empty_file();
  auto ts = unify_transitions(f.sig, start(f.sig, "f a = b"));
  ASSERT_EQ(ts.size(), 1u);
  EXPECT_EQ(ts[0].kind, TransitionKind::UnifClash);
  EXPECT_EQ(classify(ts[0].next), Classification::Failure);
}

TEST(Unify, DecomposeSplitsArguments) {
  SourceFile f = empty_file();
  auto ts = unify_transitions(f.sig, start(f.sig, "sigma x\\ g x b = g a b"));
  ASSERT_EQ(ts.size(), 1u);
  EXPECT_EQ(ts[0].kind, TransitionKind::UnifDecompose);
  EXPECT_TRUE(ts[0].label.bindings.empty());
  EXPECT_EQ(ts[0].next.conjuncts.size(), 2u);
}

TEST(Unify, OccursCheckPrunesCycle) {
  SourceFile f = empty_file();
  StateFormula s = start(f.sig, "sigma x\\ x = f x");
  EXPECT_TRUE(unify_transitions(f.sig, s, true).empty());
  EXPECT_FALSE(unify_transitions(f.sig, s, false).empty());
}

TEST(Backchain, SequentWithExistentialOnTheRight) {
  SourceFile f = parse_file("accumulate \"eqlj1.slim\".\ntype p tm -> fm.\n", kCorpus);
  Program p = f.program();
  StateFormula s = start(p.sig, "sigma x\\ pi y\\ (y = x y => seq (p y :: nil) (exists w\\ p w))");
  auto ts = backchain_transitions(p, s);
  EXPECT_EQ(ts.size(), clauses_for(p, "seq"));
  EXPECT_EQ(ts.size(), 17u);
  for (const auto& t : ts) {
    EXPECT_EQ(t.kind, TransitionKind::Backchain);
    EXPECT_TRUE(t.label.bindings.empty());
    EXPECT_TRUE(state_violations(p.sig, t.next).empty()) << print_state(t.next);
  }
  EXPECT_TRUE(backchain_transitions(p, start(p.sig, "sigma x\\ x = c")).empty());
}

TEST(Backchain, TruthOnTheRight) {
  SourceFile f = load_file(kCorpus / "eqlj1.slim");
  SearchResult r = search(f.program(), parse_goal("pi Gam\\ seq Gam tt", f.sig), bounds(50, 1));
  EXPECT_EQ(r.count(OutcomeKind::Solution), 1u);
}

TEST(Search, ExistentialFreeGoalGivesEmptySubstitution) {
  SourceFile f = load_file(kCorpus / "peano.slim");
  SearchResult r = search(f.program(), f.goal("succ_not_zero")->goal, bounds(50, 1));
  ASSERT_EQ(r.count(OutcomeKind::Solution), 1u);
  EXPECT_TRUE(r.solutions()[0].bindings.empty());
  EXPECT_EQ(r.stats.transitions, 0u);
}

TEST(Search, ExampleOne) {
  SourceFile f = load_file(kCorpus / "paper-examples/ex-one.slim");
  SearchResult r = search(f.program(), f.goal("ex_one")->goal, bounds(500, 0));
  ASSERT_EQ(r.count(OutcomeKind::Solution), 1u);
  EXPECT_EQ(print_substitution(r.solutions()[0]), "x := u");
}

TEST(Search, ZeroBudget) {
  SourceFile f = empty_file();
  SearchResult r = search(f.program(), parse_goal("sigma h\\ h a = a", f.sig), bounds(0, 0));
  EXPECT_EQ(r.count(OutcomeKind::Solution), 0u);
  EXPECT_EQ(r.count(OutcomeKind::Exhausted), 1u);
  // a = a still needs one transition; reduction alone discharges the cycle guard
  EXPECT_EQ(search(f.program(), parse_goal("a = a", f.sig), bounds(0, 0)).count(OutcomeKind::Solution), 0u);
  SearchResult t = search(f.program(), parse_goal("pi y\\ (y = f y => ff)", f.sig), bounds(0, 0));
  EXPECT_EQ(t.count(OutcomeKind::Solution), 1u);
}

TEST(Search, FlexFlexSuspends) {
  SourceFile f = empty_file();
  SearchResult r = search(f.program(), parse_goal("sigma x\\ sigma y\\ x a = y b", f.sig), bounds(50, 0));
  ASSERT_EQ(r.count(OutcomeKind::Suspended), 1u);
  EXPECT_EQ(r.count(OutcomeKind::Solution), 0u);
}

TEST(Search, CycleWithoutPruningExhausts) {
  SourceFile f = empty_file();
  SearchConfig c = bounds(50, 1);
  c.occurs_check_pruning = false;
  SearchResult r = search(f.program(), parse_goal("sigma x\\ x = f x", f.sig), c);
  EXPECT_EQ(r.count(OutcomeKind::Solution), 0u);
  EXPECT_EQ(r.count(OutcomeKind::Exhausted), 1u);
  EXPECT_TRUE(r.stats.bound_hit);
}

TEST(Search, CallbackStopsEarly) {
  SourceFile f = load_file(kCorpus / "paper-examples/four-solutions.slim");
  int seen = 0;
  SearchResult r = search(f.program(), f.goal("four")->goal, bounds(200, 0), [&](const Outcome&) {
    return ++seen < 2;
  });
  EXPECT_EQ(seen, 2);
  EXPECT_EQ(r.count(OutcomeKind::Solution), 2u);
}

TEST(Search, TraceLabelsComposeToAccumulated) {
  SourceFile f = empty_file();
  SearchConfig c = bounds(100, 0);
  c.record_trace = true;
  Goal g = parse_goal("sigma x\\ x (f a) = f (x a)", f.sig);
  SearchResult r = search(f.program(), g, c);
  ASSERT_GE(r.count(OutcomeKind::Solution), 2u);
  for (const auto& o : r.outcomes) {
    if (o.kind != OutcomeKind::Solution) continue;
    Substitution acc;
    StateFormula cur = r.initial;
    for (const auto& tr : o.trace) {
      acc = compose(acc, tr.label);
      EXPECT_TRUE(state_violations(f.sig, tr.next).empty()) << print_state(tr.next);
      cur = tr.next;
    }
    EXPECT_EQ(classify(cur), Classification::Success);
    EXPECT_EQ(print_substitution(extract_solution(r.raising, acc, cur)), print_substitution(o.theta));
    EXPECT_EQ(check_solution(f.program(), g, o.theta), Verdict::Verified) << print_substitution(o.theta);
  }
}

TEST(Decide, Examples) {
  SourceFile f = load_file(kCorpus / "peano.slim");
  auto d = [&](const char* text) { return decide_existential_free(f.sig, parse_goal(text, f.sig)); };
  EXPECT_TRUE(d("pi x\\ (s x = z => ff)"));
  EXPECT_TRUE(d("pi x\\ pi y\\ (s x = s y => x = y)"));
  EXPECT_FALSE(d("pi x\\ (x = z => ff)"));
  EXPECT_FALSE(d("a = b"));
  EXPECT_TRUE(d("tt"));
  EXPECT_FALSE(d("ff"));
  EXPECT_TRUE(d("pi x\\ (x = s x => a = b)"));
}

TEST(Decide, RejectsExistentialsAndAtoms) {
  SourceFile f = load_file(kCorpus / "eqlj1.slim");
  for (const char* text : {"sigma x\\ x = c", "seq nil tt"}) {
    try {
      decide_existential_free(f.sig, parse_goal(text, f.sig));
      FAIL() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::PreconditionViolated);
    }
  }
}

TEST(Check, Verdicts) {
  SourceFile f = load_file(kCorpus / "paper-examples/ex-one.slim");
  Program p = f.program();
  const Goal& g = f.goal("ex_one")->goal;
  auto verdict = [&](const char* s) { return check_solution(p, g, parse_substitution(s, f.sig, g)); };
  EXPECT_EQ(verdict("x := u"), Verdict::Verified);
  EXPECT_EQ(verdict("x := v"), Verdict::Refuted);
  EXPECT_EQ(verdict("x := a"), Verdict::Refuted);
  try {
    parse_substitution("x := w", f.sig, g);
    FAIL();
  } catch (const Error&) {
  }
}

TEST(Check, SearchBackedVerdict) {
  SourceFile f = load_file(kCorpus / "eqlj1.slim");
  Program p = f.program();
  Goal g = f.goal("witness")->goal;
  EXPECT_EQ(check_solution(p, g, parse_substitution("X := c", f.sig, g)), Verdict::Verified);
  EXPECT_NE(check_solution(p, g, parse_substitution("X := d", f.sig, g)), Verdict::Verified);
}

TEST(Check, InstantiateClosesDontCares) {
  SourceFile f = empty_file();
  Goal g = parse_goal("sigma x\\ sigma y\\ x = y", f.sig);
  Substitution theta;
  Type i = Type::primitive("i");
  theta.bind("x", i, Term::logic_var("_1"));
  theta.bind("y", i, Term::logic_var("_1"));
  theta.types["_1"] = i;
  Goal inst = instantiate_goal(f.sig, g, theta);
  EXPECT_TRUE(has_exists(inst));
  EXPECT_EQ(check_solution(f.program(), g, theta), Verdict::Verified);
}
