#include "support.hpp"

#include <stdexcept>

namespace slim::testing {

namespace {

struct Fo {
  std::string name;
  bool var = false;
  std::vector<Fo> args;
};

Fo to_fo(const Term& t, const std::set<std::string>& vars) {
  Spine s = spine(beta_normalize(t));
  Fo out;
  switch (s.head.kind()) {
    case TermKind::Const:
      out.name = "c:" + s.head.name();
      break;
    case TermKind::Eigen:
      out.name = s.head.name();
      out.var = vars.count(s.head.name()) > 0;
      break;
    default:
      throw std::logic_error("oracle: term is not first order");
  }
  if (out.var && !s.args.empty()) throw std::logic_error("oracle: applied universal");
  for (const auto& a : s.args) out.args.push_back(to_fo(a, vars));
  return out;
}

using FoSubst = std::map<std::string, Fo>;

Fo apply_fo(const FoSubst& s, const Fo& t) {
  if (t.var) {
    auto it = s.find(t.name);
    return it == s.end() ? t : apply_fo(s, it->second);
  }
  Fo out{t.name, false, {}};
  for (const auto& a : t.args) out.args.push_back(apply_fo(s, a));
  return out;
}

bool occurs(const std::string& v, const Fo& t) {
  if (t.var) return t.name == v;
  for (const auto& a : t.args)
    if (occurs(v, a)) return true;
  return false;
}

bool same(const Fo& a, const Fo& b) {
  if (a.var != b.var || a.name != b.name || a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!same(a.args[i], b.args[i])) return false;
  return true;
}

bool unify(FoSubst& s, const Fo& l, const Fo& r) {
  Fo a = apply_fo(s, l), b = apply_fo(s, r);
  if (a.var && b.var && a.name == b.name) return true;
  if (a.var) {
    if (occurs(a.name, b)) return false;
    s[a.name] = b;
    return true;
  }
  if (b.var) return unify(s, b, a);
  if (a.name != b.name || a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!unify(s, a.args[i], b.args[i])) return false;
  return true;
}

struct Prover {
  std::set<std::string> vars;
  int counter = 0;

  bool prove(const Goal& g, const std::vector<std::pair<Term, Term>>& hyps) {
    switch (g.kind()) {
      case GoalKind::True:
        return true;
      case GoalKind::And:
        return prove(g.left(), hyps) && prove(g.right(), hyps);
      case GoalKind::Forall: {
        std::string fresh = "#u" + std::to_string(counter++);
        vars.insert(fresh);
        return prove(replace_eigen(g.body(), g.var(), Term::eigen(fresh)), hyps);
      }
      case GoalKind::Guard: {
        auto h = hyps;
        h.emplace_back(g.lhs(), g.rhs());
        return prove(g.body(), h);
      }
      case GoalKind::False:
      case GoalKind::Eq: {
        FoSubst s;
        for (const auto& [l, r] : hyps)
          if (!unify(s, to_fo(l, vars), to_fo(r, vars))) return true;
        if (g.is(GoalKind::False)) return false;
        return same(apply_fo(s, to_fo(g.lhs(), vars)), apply_fo(s, to_fo(g.rhs(), vars)));
      }
      case GoalKind::Exists:
      case GoalKind::Atom:
        throw std::logic_error("oracle: goal has existentials or atoms");
    }
    return false;
  }
};

void collect_ex(const Goal& g, std::vector<std::string>& scope, std::vector<ExVar>& out) {
  switch (g.kind()) {
    case GoalKind::And:
      collect_ex(g.left(), scope, out);
      collect_ex(g.right(), scope, out);
      break;
    case GoalKind::Guard:
      collect_ex(g.body(), scope, out);
      break;
    case GoalKind::Forall:
      scope.push_back(g.var());
      collect_ex(g.body(), scope, out);
      scope.pop_back();
      break;
    case GoalKind::Exists:
      out.push_back({g.var(), g.type(), scope});
      collect_ex(g.body(), scope, out);
      break;
    default:
      break;
  }
}

Goal subst_goal(const Goal& g, const Assignment& a) {
  switch (g.kind()) {
    case GoalKind::And:
      return Goal::conj(subst_goal(g.left(), a), subst_goal(g.right(), a));
    case GoalKind::Guard:
      return Goal::guard(g.lhs(), g.rhs(), g.type(), subst_goal(g.body(), a));
    case GoalKind::Forall:
      return Goal::forall(g.var(), g.type(), subst_goal(g.body(), a));
    case GoalKind::Exists: {
      auto it = a.find(g.var());
      if (it == a.end()) return Goal::exists(g.var(), g.type(), subst_goal(g.body(), a));
      return subst_goal(replace_logic_var(g.body(), g.var(), it->second), a);
    }
    default:
      return g;
  }
}

Goal beta_goal(const Goal& g) { return map_terms(g, [](const Term& t) { return beta_normalize(t); }); }

}  // namespace

bool oracle_provable(const Goal& g) {
  Prover p;
  return p.prove(beta_goal(g), {});
}

Goal substitute(const Goal& g, const Assignment& a) { return beta_goal(subst_goal(g, a)); }

std::vector<ExVar> existentials_of(const Goal& g) {
  std::vector<std::string> scope;
  std::vector<ExVar> out;
  collect_ex(g, scope, out);
  return out;
}

std::vector<Term> enumerate_terms(const Signature& sig, const std::vector<std::string>& scope,
                                  const Type& universal_type, const Type& type, unsigned depth) {
  if (type.is_arrow()) {
    const std::string w = "#w";
    std::vector<std::string> inner = scope;
    inner.push_back(w);
    std::vector<Term> out;
    for (const auto& t : enumerate_terms(sig, inner, universal_type, type.codomain(), depth))
      out.push_back(Term::lam(type.domain(), replace_eigen(t, w, Term::bound(0))));
    return out;
  }
  std::vector<Term> atoms;
  for (const auto& [name, ty] : sig.constants())
    if (ty == type) atoms.push_back(Term::constant(name));
  if (universal_type == type)
    for (const auto& y : scope) atoms.push_back(Term::eigen(y));
  std::vector<Term> level = atoms;
  for (unsigned d = 2; d <= depth; ++d) {
    std::vector<Term> next = atoms;
    for (const auto& [name, ty] : sig.constants()) {
      SplitType st = split_type(ty);
      if (st.args.empty() || st.target != type) continue;
      std::vector<std::vector<Term>> partial{{}};
      for (std::size_t k = 0; k < st.args.size(); ++k) {
        std::vector<std::vector<Term>> grown;
        for (const auto& p : partial)
          for (const auto& a : level) {
            auto q = p;
            q.push_back(a);
            grown.push_back(std::move(q));
          }
        partial = std::move(grown);
      }
      for (const auto& args : partial) next.push_back(Term::apply(Term::constant(name), args));
    }
    level = std::move(next);
  }
  return level;
}

namespace {

Term random_closed(std::mt19937& rng, const Signature& sig, const std::vector<std::string>& universals,
                   unsigned depth) {
  const Type i = Type::primitive("i");
  std::vector<Term> atoms;
  std::vector<std::pair<std::string, std::size_t>> fns;
  for (const auto& [name, ty] : sig.constants()) {
    SplitType st = split_type(ty);
    if (st.args.empty()) atoms.push_back(Term::constant(name));
    else fns.emplace_back(name, st.args.size());
  }
  for (const auto& y : universals) atoms.push_back(Term::eigen(y));
  if (depth <= 1 || fns.empty() || rng() % 2 == 0) return atoms[rng() % atoms.size()];
  auto [f, n] = fns[rng() % fns.size()];
  std::vector<Term> args;
  for (std::size_t k = 0; k < n; ++k) args.push_back(random_closed(rng, sig, universals, depth - 1));
  return Term::apply(Term::constant(f), args);
}

Term random_open(std::mt19937& rng, const Signature& sig, const std::vector<std::string>& universals,
                 const std::vector<Binding>& ex) {
  const Binding& x = ex[rng() % ex.size()];
  Term core = Term::logic_var(x.name);
  if (x.type.is_arrow()) core = Term::app(core, random_closed(rng, sig, universals, 1 + rng() % 2));
  std::vector<std::pair<std::string, std::size_t>> fns;
  for (const auto& [name, ty] : sig.constants()) {
    std::size_t n = split_type(ty).args.size();
    if (n > 0) fns.emplace_back(name, n);
  }
  if (fns.empty() || rng() % 3 != 0) return core;
  auto [f, n] = fns[rng() % fns.size()];
  std::vector<Term> args;
  std::size_t hole = rng() % n;
  for (std::size_t k = 0; k < n; ++k)
    args.push_back(k == hole ? core : random_closed(rng, sig, universals, 1));
  return Term::apply(Term::constant(f), args);
}

}  // namespace

Generated generate(std::mt19937& rng) {
  const Type i = Type::primitive("i");
  Generated gen;
  gen.sig.declare_kind("i");
  gen.sig.declare_constant("a", i);
  std::vector<std::pair<std::string, Type>> pool{
      {"b", i}, {"f", Type::arrow(i, i)}, {"g", Type::arrow(i, Type::arrow(i, i))}};
  std::shuffle(pool.begin(), pool.end(), rng);
  std::size_t extra = rng() % 3;
  for (std::size_t k = 0; k < extra; ++k) gen.sig.declare_constant(pool[k].first, pool[k].second);

  std::size_t nu = rng() % 3, ne = 1 + rng() % 2;
  std::vector<std::string> universals;
  std::vector<Binding> ex;
  for (std::size_t k = 0; k < nu; ++k) universals.push_back("y" + std::to_string(k + 1));
  for (std::size_t k = 0; k < ne; ++k)
    ex.push_back({"x" + std::to_string(k + 1), rng() % 10 < 7 ? i : Type::arrow(i, i)});

  std::size_t conjuncts = 1 + rng() % 2;
  Goal body;
  for (std::size_t c = 0; c < conjuncts; ++c) {
    Goal target;
    unsigned r = rng() % 20;
    if (r < 2) {
      target = Goal::falsity();
    } else if (r < 3) {
      target = Goal::truth();
    } else {
      Term open = random_open(rng, gen.sig, universals, ex);
      Term closed = random_closed(rng, gen.sig, universals, 2);
      target = rng() % 2 ? Goal::eq(open, closed, i) : Goal::eq(closed, open, i);
    }
    std::size_t guards = universals.empty() ? rng() % 2 : rng() % 3;
    for (std::size_t k = 0; k < guards; ++k) {
      Term l = !universals.empty() && rng() % 3 != 0 ? Term::eigen(universals[rng() % universals.size()])
                                                     : random_closed(rng, gen.sig, universals, 2);
      Term rr = random_closed(rng, gen.sig, universals, 2);
      target = Goal::guard(l, rr, i, target);
    }
    body = body.valid() ? Goal::conj(body, target) : target;
  }
  // interleave the quantifier prefix
  std::vector<std::pair<bool, std::size_t>> prefix;
  for (std::size_t k = 0; k < nu; ++k) prefix.emplace_back(true, k);
  for (std::size_t k = 0; k < ne; ++k) prefix.emplace_back(false, k);
  std::shuffle(prefix.begin(), prefix.end(), rng);
  Goal g = body;
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) {
    if (it->first) g = Goal::forall(universals[it->second], i, g);
    else g = Goal::exists(ex[it->second].name, ex[it->second].type, g);
  }
  gen.goal = g;
  gen.ex = existentials_of(g);
  return gen;
}

std::size_t candidate_count(const Generated& gen, unsigned depth) {
  const Type i = Type::primitive("i");
  std::size_t total = 1;
  for (const auto& x : gen.ex) total *= enumerate_terms(gen.sig, x.scope, i, x.type, depth).size();
  return total;
}

bool brute_force(const Generated& gen, unsigned depth, std::size_t budget, std::vector<Assignment>& out) {
  const Type i = Type::primitive("i");
  std::vector<std::vector<Term>> cands;
  std::size_t total = 1;
  for (const auto& x : gen.ex) {
    cands.push_back(enumerate_terms(gen.sig, x.scope, i, x.type, depth));
    total *= cands.back().size();
    if (total > budget) return false;
  }
  std::vector<std::size_t> idx(cands.size(), 0);
  while (true) {
    Assignment a;
    for (std::size_t k = 0; k < cands.size(); ++k) a[gen.ex[k].name] = cands[k][idx[k]];
    if (oracle_provable(substitute(gen.goal, a))) out.push_back(a);
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == cands[k].size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  return true;
}

namespace {

struct Matcher {
  std::map<std::string, Term> dont_care;
  int counter = 0;

  bool match(const Term& p, const Term& t) {
    if (p.is(TermKind::Lam) || t.is(TermKind::Lam)) {
      Term e = Term::eigen("#m" + std::to_string(counter++));
      Term p2 = p.is(TermKind::Lam) ? instantiate(p.body(), e) : beta_normalize(Term::app(p, e));
      Term t2 = t.is(TermKind::Lam) ? instantiate(t.body(), e) : beta_normalize(Term::app(t, e));
      return match(beta_normalize(p2), beta_normalize(t2));
    }
    Spine ps = spine(p);
    if (ps.head.is(TermKind::LogicVar)) {
      std::map<std::string, Term> positional;
      for (std::size_t k = 0; k < ps.args.size(); ++k) {
        if (!ps.args[k].is(TermKind::Eigen) || positional.count(ps.args[k].name())) return false;
        positional[ps.args[k].name()] = Term::eigen("$" + std::to_string(k));
      }
      std::set<std::string> used;
      collect_eigens(t, used);
      for (const auto& y : used)
        if (!positional.count(y)) return false;
      Term key = replace_eigens(t, positional);
      auto it = dont_care.find(ps.head.name());
      if (it == dont_care.end()) {
        dont_care.emplace(ps.head.name(), key);
        return true;
      }
      return term_eq(it->second, key);
    }
    Spine ts = spine(t);
    if (ps.head.kind() != ts.head.kind() || ps.args.size() != ts.args.size()) return false;
    if (ps.head.is(TermKind::Bound) ? ps.head.index() != ts.head.index() : ps.head.name() != ts.head.name())
      return false;
    for (std::size_t k = 0; k < ps.args.size(); ++k)
      if (!match(ps.args[k], ts.args[k])) return false;
    return true;
  }
};

}  // namespace

bool instance_of(const Substitution& theta, const Assignment& a) {
  Matcher m;
  for (const auto& [x, t] : a) {
    auto it = theta.bindings.find(x);
    if (it == theta.bindings.end()) return false;
    if (!m.match(beta_normalize(it->second), beta_normalize(t))) return false;
  }
  return true;
}

std::string show(const Assignment& a) {
  std::string out;
  for (const auto& [x, t] : a) {
    if (!out.empty()) out += "; ";
    out += x + " := " + print_term(t);
  }
  return out.empty() ? "{}" : out;
}

}  // namespace slim::testing
