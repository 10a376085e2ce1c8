#include <sstream>

#include "support.hpp"

namespace slim::testing {

namespace {

constexpr unsigned kDepth = 3;
constexpr std::size_t kBudget = 20000;

Term abstract(const Term& t, const std::map<std::string, unsigned>& pos, unsigned n, unsigned depth) {
  switch (t.kind()) {
    case TermKind::Eigen: {
      auto it = pos.find(t.name());
      return it == pos.end() ? t : Term::bound(depth + n - 1 - it->second);
    }
    case TermKind::App:
      return Term::app(abstract(t.fun(), pos, n, depth), abstract(t.arg(), pos, n, depth));
    case TermKind::Lam:
      return Term::lam(t.binder_type(), abstract(t.body(), pos, n, depth + 1));
    default:
      return t;
  }
}

Term closed_inhabitant(const Type& ty) {
  SplitType st = split_type(ty);
  return wrap_lams(st.args, Term::constant("a"));
}

// theta with its don't-care variables replaced by closed terms.
Assignment ground(const Substitution& theta) {
  Assignment out;
  for (const auto& [x, t] : theta.bindings) {
    Term g = replace_leaves(t, [&](const Term& leaf) -> std::optional<Term> {
      if (!leaf.is(TermKind::LogicVar)) return std::nullopt;
      return closed_inhabitant(theta.types.at(leaf.name()));
    });
    out[x] = beta_normalize(g);
  }
  return out;
}

SearchConfig exhaustive(std::size_t max_transitions) {
  SearchConfig cfg;
  cfg.max_transitions = max_transitions;
  cfg.max_solutions = 0;
  return cfg;
}

std::string describe(const Generated& gen) { return print_goal(gen.goal); }

}  // namespace

Term raise_binding(const RaisedVar& r, const Term& t) {
  std::map<std::string, unsigned> pos;
  std::vector<Type> types;
  for (unsigned k = 0; k < r.scope.size(); ++k) {
    pos[r.scope[k]] = k;
    types.push_back(Type::primitive("i"));
  }
  return wrap_lams(types, abstract(t, pos, static_cast<unsigned>(r.scope.size()), 0));
}

SuiteReport soundness_suite(unsigned seed, std::size_t goals) {
  std::mt19937 rng(seed);
  SuiteReport rep;
  while (rep.goals < goals) {
    Generated gen = generate(rng);
    ++rep.goals;
    Program p{gen.sig, {}};
    SearchResult res = search(p, gen.goal, exhaustive(500));
    for (const auto& theta : res.solutions()) {
      ++rep.checked;
      Verdict v = check_solution(p, gen.goal, theta);
      bool oracle = oracle_provable(substitute(gen.goal, ground(theta)));
      if (v != Verdict::Verified || !oracle)
        rep.failures.push_back(describe(gen) + " with " + print_substitution(theta) + ": check_solution " +
                               to_string(v) + ", oracle " + (oracle ? "provable" : "not provable"));
    }
  }
  return rep;
}

SuiteReport completeness_suite(unsigned seed, std::size_t goals) {
  std::mt19937 rng(seed);
  SuiteReport rep;
  while (rep.goals < goals) {
    Generated gen = generate(rng);
    std::vector<Assignment> brute;
    if (!brute_force(gen, kDepth, kBudget, brute)) {
      ++rep.skipped;
      continue;
    }
    ++rep.goals;
    if (brute.empty()) continue;
    SearchResult res = search(Program{gen.sig, {}}, gen.goal, exhaustive(2000));
    auto found = res.solutions();
    for (const auto& a : brute) {
      ++rep.checked;
      bool hit = false;
      for (const auto& theta : found)
        if (instance_of(theta, a)) {
          hit = true;
          break;
        }
      if (!hit) {
        std::ostringstream msg;
        msg << describe(gen) << ": missed " << show(a) << " (search gave " << found.size() << " solutions, "
            << res.count(OutcomeKind::Suspended) << " suspended)";
        rep.failures.push_back(msg.str());
      }
    }
  }
  return rep;
}

SuiteReport preservation_suite(unsigned seed, std::size_t goals) {
  std::mt19937 rng(seed);
  SuiteReport rep;
  const Type i = Type::primitive("i");
  while (rep.goals < goals) {
    Generated gen = generate(rng);
    if (candidate_count(gen, kDepth) > kBudget) {
      ++rep.skipped;
      continue;
    }
    ++rep.goals;
    Normalization n = normalize_with_raising(gen.goal);
    Goal normalized = to_goal(n.state);
    Goal reduced = to_goal(reduce(gen.sig, n.state));
    std::vector<std::vector<Term>> cands;
    for (const auto& x : gen.ex) cands.push_back(enumerate_terms(gen.sig, x.scope, i, x.type, kDepth));
    std::vector<std::size_t> idx(cands.size(), 0);
    while (true) {
      Assignment a, raised;
      for (std::size_t k = 0; k < cands.size(); ++k) a[gen.ex[k].name] = cands[k][idx[k]];
      for (const auto& r : n.raising) raised[r.raised] = raise_binding(r, a.at(r.original));
      bool v0 = oracle_provable(substitute(gen.goal, a));
      bool v1 = oracle_provable(substitute(normalized, raised));
      bool v2 = oracle_provable(substitute(reduced, raised));
      ++rep.checked;
      if (v0 != v1 || v0 != v2) {
        std::ostringstream msg;
        msg << describe(gen) << " at " << show(a) << ": goal " << v0 << ", normalized " << v1 << ", reduced " << v2;
        rep.failures.push_back(msg.str());
      }
      std::size_t k = 0;
      while (k < idx.size() && ++idx[k] == cands[k].size()) idx[k++] = 0;
      if (k == idx.size()) break;
    }
  }
  return rep;
}

}  // namespace slim::testing
