#include <vector>

#include "slim/engine.hpp"
#include "slim/syntax.hpp"

namespace slim {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Verified: return "verified";
    case Verdict::Unverifiable: return "unverifiable";
    case Verdict::Refuted: return "refuted";
  }
  return "?";
}

bool decide_existential_free(const Signature& sig, const Goal& g) {
  if (has_exists(g)) throw Error(ErrorKind::PreconditionViolated, "goal contains an existential quantifier");
  if (has_atoms(g)) throw Error(ErrorKind::PreconditionViolated, "goal contains an atomic formula");
  StateFormula s = reduce(sig, normalize(g));
  for (const auto& c : s.conjuncts) {
    if (!c.guards.empty())
      throw Error(ErrorKind::PreconditionViolated, "guard left unresolved: " + print_goal(guarded_to_goal(c)));
    if (c.target.kind == TargetKind::True) continue;
    if (c.target.kind != TargetKind::Eq || !term_eq(c.target.lhs, c.target.rhs)) return false;
  }
  return true;
}

namespace {

struct Instantiator {
  const Signature& sig;
  const Substitution& theta;
  TypeMap scope;  // universals in scope
  std::vector<std::string> scope_order;

  Goal run(const Goal& g) {
    switch (g.kind()) {
      case GoalKind::True:
      case GoalKind::False:
      case GoalKind::Atom:
      case GoalKind::Eq:
        return g;
      case GoalKind::And:
        return Goal::conj(run(g.left()), run(g.right()));
      case GoalKind::Guard:
        return Goal::guard(g.lhs(), g.rhs(), g.type(), run(g.body()));
      case GoalKind::Forall: {
        scope[g.var()] = g.type();
        Goal b = run(g.body());
        scope.erase(g.var());
        return Goal::forall(g.var(), g.type(), b);
      }
      case GoalKind::Exists: {
        auto it = theta.bindings.find(g.var());
        if (it == theta.bindings.end()) return Goal::exists(g.var(), g.type(), run(g.body()));
        const Term& t = it->second;
        std::set<std::string> eigens;
        collect_eigens(t, eigens);
        for (const auto& y : eigens)
          if (!scope.count(y) && !sig.eigen(y))
            throw Error(ErrorKind::ScopeViolation,
                        "'" + y + "' is not in scope of '" + g.var() + "' in " + g.var() + " := " + print_term(t));
        TypeMap vars = scope;
        for (const auto& [n, ty] : theta.types)
          if (!theta.binds(n)) vars[n] = ty;
        Type ty;
        try {
          ty = type_of(sig, vars, t);
        } catch (const Error& e) {
          throw Error(e.kind(), "in binding for '" + g.var() + "': " + e.what());
        }
        if (!(ty == g.type()))
          throw Error(ErrorKind::TypeMismatch, "binding for '" + g.var() + "' has type " + type_to_string(ty) +
                                                   ", expected " + type_to_string(g.type()));
        return run(replace_logic_var(g.body(), g.var(), t));
      }
    }
    return g;
  }
};

}  // namespace

Goal instantiate_goal(const Signature& sig, const Goal& g, const Substitution& theta) {
  Instantiator ins{sig, theta, {}, {}};
  Goal out = ins.run(g);
  // names left free by theta's range are existentially closed at the top
  std::set<std::string> free = free_logic_vars(out);
  for (auto it = free.rbegin(); it != free.rend(); ++it) {
    auto ty = theta.types.find(*it);
    if (ty == theta.types.end())
      throw Error(ErrorKind::UnknownName, "no type for variable '" + *it + "' in substitution range");
    out = Goal::exists(*it, ty->second, out);
  }
  return out;
}

Verdict check_solution(const Program& p, const Goal& g, const Substitution& theta, const SearchConfig& cfg) {
  Goal inst = instantiate_goal(p.sig, g, theta);
  if (!has_atoms(inst) && !has_exists(inst)) return decide_existential_free(p.sig, inst) ? Verdict::Verified
                                                                                           : Verdict::Refuted;
  SearchConfig c = cfg;
  c.max_solutions = 1;
  c.record_trace = false;
  SearchResult r = search(p, inst, c);
  if (r.count(OutcomeKind::Solution) > 0) return Verdict::Verified;
  // the whole bounded tree failed without suspending or hitting a bound
  if (r.outcomes.empty() && !r.stats.bound_hit) return Verdict::Refuted;
  return Verdict::Unverifiable;
}

}  // namespace slim
