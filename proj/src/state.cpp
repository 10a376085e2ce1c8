#include "slim/state.hpp"

#include <algorithm>
#include <set>

#include "slim/syntax.hpp"

namespace slim {

NameSupply& global_names() {
  static NameSupply names;
  return names;
}

bool GuardedGoal::has_universal(const std::string& name) const {
  for (const auto& u : universals)
    if (u.name == name) return true;
  return false;
}

std::optional<Type> StateFormula::existential_type(const std::string& name) const {
  for (const auto& e : existentials)
    if (e.name == name) return e.type;
  return std::nullopt;
}

namespace {

std::vector<Term> fresh_constants(const std::vector<Type>& types, std::vector<Binding>& into,
                                  const char* base) {
  std::vector<Term> out;
  for (const auto& ty : types) {
    std::string n = global_names().fresh(base);
    into.push_back({n, ty});
    out.push_back(Term::eigen(n));
  }
  return out;
}

// An equation at a possibly arrow type, eta-expanded with fresh local constants.
Equation make_guard(const Term& l, const Term& r, const Type& type, std::vector<Binding> locals) {
  if (type.is_primitive()) return {l, r, type, std::move(locals)};
  SplitType st = split_type(type);
  std::vector<Term> args = fresh_constants(st.args, locals, "l");
  return {beta_normalize(Term::apply(l, args)), beta_normalize(Term::apply(r, args)), st.target,
          std::move(locals)};
}

struct Ctx {
  std::vector<Binding> universals;
  std::vector<std::string> origins;
  std::vector<Equation> guards;
};

struct Emitter {
  std::vector<Binding> existentials;
  std::vector<GuardedGoal> conjuncts;
  std::vector<RaisedVar> raising;

  void push(const Ctx& ctx, Target t) { conjuncts.push_back({ctx.universals, ctx.guards, std::move(t)}); }

  void emit(const Ctx& ctx, const Goal& g) {
    switch (g.kind()) {
      case GoalKind::True: return;
      case GoalKind::False: push(ctx, Target::falsity()); return;
      case GoalKind::Atom: push(ctx, Target::atom(g.atom_term())); return;
      case GoalKind::And:
        emit(ctx, g.left());
        emit(ctx, g.right());
        return;
      case GoalKind::Exists: {
        std::string h = global_names().fresh(g.var());
        std::vector<Type> tys;
        std::vector<Term> args;
        for (const auto& u : ctx.universals) {
          tys.push_back(u.type);
          args.push_back(Term::eigen(u.name));
        }
        existentials.push_back({h, arrows(tys, g.type())});
        raising.push_back({g.var(), g.type(), h, ctx.origins});
        emit(ctx, replace_logic_var(g.body(), g.var(), Term::apply(Term::logic_var(h), args)));
        return;
      }
      case GoalKind::Forall: {
        std::string y = global_names().fresh(g.var());
        Ctx inner = ctx;
        inner.universals.push_back({y, g.type()});
        inner.origins.push_back(g.var());
        emit(inner, replace_eigen(g.body(), g.var(), Term::eigen(y)));
        return;
      }
      case GoalKind::Guard: {
        Ctx inner = ctx;
        inner.guards.push_back(make_guard(g.lhs(), g.rhs(), g.type(), {}));
        emit(inner, g.body());
        return;
      }
      case GoalKind::Eq: {
        if (g.type().is_primitive()) {
          push(ctx, Target::eq(g.lhs(), g.rhs(), g.type()));
          return;
        }
        SplitType st = split_type(g.type());
        Ctx inner = ctx;
        std::vector<Term> args = fresh_constants(st.args, inner.universals, "w");
        inner.origins.resize(inner.universals.size());
        push(inner, Target::eq(beta_normalize(Term::apply(g.lhs(), args)),
                               beta_normalize(Term::apply(g.rhs(), args)), st.target));
        return;
      }
    }
  }
};

template <typename F>
void for_each_term(const GuardedGoal& c, F f) {
  for (const auto& e : c.guards) {
    f(e.lhs);
    f(e.rhs);
  }
  if (c.target.kind == TargetKind::Eq) {
    f(c.target.lhs);
    f(c.target.rhs);
  } else if (c.target.kind == TargetKind::Atom) {
    f(c.target.lhs);
  }
}

GuardedGoal map_conjunct(const GuardedGoal& c, const std::function<Term(const Term&)>& f) {
  GuardedGoal out = c;
  for (auto& e : out.guards) {
    e.lhs = f(e.lhs);
    e.rhs = f(e.rhs);
  }
  if (out.target.kind == TargetKind::Eq) {
    out.target.lhs = f(out.target.lhs);
    out.target.rhs = f(out.target.rhs);
  } else if (out.target.kind == TargetKind::Atom) {
    out.target.lhs = f(out.target.lhs);
  }
  return out;
}

bool conjunct_mentions_eigen(const GuardedGoal& c, const std::string& name) {
  bool hit = false;
  for_each_term(c, [&](const Term& t) { hit = hit || mentions_eigen(t, name); });
  return hit;
}

// Drops true conjuncts and vacuous universals; renames universals and locals
// so that no two conjuncts share a name.
void tidy(StateFormula& s) {
  std::vector<GuardedGoal> kept;
  std::set<std::string> seen;
  for (auto& c : s.conjuncts) {
    if (c.target.kind == TargetKind::True) continue;
    std::vector<Binding> us;
    for (const auto& u : c.universals)
      if (conjunct_mentions_eigen(c, u.name)) us.push_back(u);
    c.universals = std::move(us);
    std::map<std::string, Term> renaming;
    for (auto& u : c.universals) {
      if (!seen.insert(u.name).second) {
        std::string n = global_names().fresh(u.name);
        renaming[u.name] = Term::eigen(n);
        u.name = n;
        seen.insert(n);
      }
    }
    std::set<std::string> local_names;
    for (const auto& e : c.guards)
      for (const auto& l : e.locals) local_names.insert(l.name);
    std::map<std::string, std::string> local_renaming;
    for (const auto& l : local_names) {
      if (!seen.insert(l).second) {
        std::string n = global_names().fresh(l);
        local_renaming[l] = n;
        renaming[l] = Term::eigen(n);
        seen.insert(n);
      }
    }
    if (!renaming.empty()) {
      c = map_conjunct(c, [&](const Term& t) { return replace_eigens(t, renaming); });
      for (auto& e : c.guards)
        for (auto& l : e.locals) {
          auto it = local_renaming.find(l.name);
          if (it != local_renaming.end()) l.name = it->second;
        }
    }
    kept.push_back(std::move(c));
  }
  s.conjuncts = std::move(kept);
}

}  // namespace

Goal raise_step(const Goal& g) {
  struct Item {
    bool forall;
    Goal node;
  };
  std::vector<Item> prefix;
  Goal cur = g;
  while (cur.is(GoalKind::Forall) || cur.is(GoalKind::Guard)) {
    if (cur.is(GoalKind::Forall) && !cur.type().is_primitive())
      throw Error(ErrorKind::NotRaisable, "universal " + cur.var() + " is not primitive");
    prefix.push_back({cur.is(GoalKind::Forall), cur});
    cur = cur.body();
  }
  if (!cur.is(GoalKind::Exists))
    throw Error(ErrorKind::NotRaisable, "goal is not of the form forall/guards then exists");
  std::vector<Type> tys;
  std::vector<Term> args;
  for (const auto& it : prefix)
    if (it.forall) {
      tys.push_back(it.node.type());
      args.push_back(Term::eigen(it.node.var()));
    }
  std::string h = global_names().fresh(cur.var());
  Goal body = replace_logic_var(cur.body(), cur.var(), Term::apply(Term::logic_var(h), args));
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) {
    const Goal& n = it->node;
    body = it->forall ? Goal::forall(n.var(), n.type(), body)
                      : Goal::guard(n.lhs(), n.rhs(), n.type(), body);
  }
  return Goal::exists(h, arrows(tys, cur.type()), body);
}

Normalization normalize_with_raising(const Goal& g) {
  Emitter e;
  e.emit(Ctx{}, g);
  Normalization out;
  out.state.existentials = std::move(e.existentials);
  out.state.conjuncts = std::move(e.conjuncts);
  out.raising = std::move(e.raising);
  tidy(out.state);
  return out;
}

StateFormula normalize(const Goal& g) { return normalize_with_raising(g).state; }

StateFormula replace_target(const StateFormula& s, std::size_t i, const Goal& g) {
  const GuardedGoal& c = s.conjuncts.at(i);
  Ctx ctx{c.universals, std::vector<std::string>(c.universals.size()), c.guards};
  Emitter e;
  e.emit(ctx, g);
  StateFormula out;
  out.existentials = s.existentials;
  out.existentials.insert(out.existentials.end(), e.existentials.begin(), e.existentials.end());
  out.conjuncts.assign(s.conjuncts.begin(), s.conjuncts.begin() + static_cast<long>(i));
  out.conjuncts.insert(out.conjuncts.end(), e.conjuncts.begin(), e.conjuncts.end());
  out.conjuncts.insert(out.conjuncts.end(), s.conjuncts.begin() + static_cast<long>(i) + 1,
                       s.conjuncts.end());
  tidy(out);
  return out;
}

StateFormula apply_to_state(const StateFormula& s, const Substitution& rho,
                            const std::vector<Binding>& fresh_vars) {
  StateFormula out;
  bool inserted = false;
  for (const auto& e : s.existentials) {
    if (rho.binds(e.name)) {
      if (!inserted) {
        out.existentials.insert(out.existentials.end(), fresh_vars.begin(), fresh_vars.end());
        inserted = true;
      }
      continue;
    }
    out.existentials.push_back(e);
  }
  if (!inserted) out.existentials.insert(out.existentials.end(), fresh_vars.begin(), fresh_vars.end());
  for (const auto& c : s.conjuncts)
    out.conjuncts.push_back(map_conjunct(c, [&](const Term& t) { return apply_subst(rho, t); }));
  tidy(out);
  return out;
}

// ---- reduction ----

namespace {

bool is_local(const Term& t, const Equation& e) {
  if (!t.is(TermKind::Eigen)) return false;
  for (const auto& l : e.locals)
    if (l.name == t.name()) return true;
  return false;
}

bool mentions_local(const Term& t, const Equation& e) {
  for (const auto& l : e.locals)
    if (mentions_eigen(t, l.name)) return true;
  return false;
}

bool local_rigidly_in(const Term& t, const Equation& e) {
  if (is_local(t, e)) return true;
  for (const auto& l : e.locals)
    if (occurs_rigidly(t, Term::eigen(l.name))) return true;
  return false;
}

struct Action {
  ReductionRule rule;
  std::string var;  // Eliminate
  Term by;          // Eliminate
};

std::optional<Action> guard_action(const GuardedGoal& c, const Equation& e) {
  const Term& l = e.lhs;
  const Term& r = e.rhs;
  if (term_eq(l, r)) return Action{ReductionRule::DropIdentical, {}, {}};
  auto univ = [&](const Term& t) { return t.is(TermKind::Eigen) && c.has_universal(t.name()); };
  bool ul = univ(l), ur = univ(r);
  if ((ul && occurs_rigidly(r, l)) || (ur && occurs_rigidly(l, r)))
    return Action{ReductionRule::OccursCheck, {}, {}};
  if (!ul && !ur && is_rigid(l) && is_rigid(r)) {
    const Term& hl = head_of(l);
    const Term& hr = head_of(r);
    if (hl.kind() != hr.kind() || hl.name() != hr.name()) return Action{ReductionRule::Clash, {}, {}};
  }
  if ((ul && local_rigidly_in(r, e)) || (ur && local_rigidly_in(l, e)))
    return Action{ReductionRule::Clash, {}, {}};
  if (ul && !mentions_eigen(r, l.name()) && !mentions_local(r, e))
    return Action{ReductionRule::Eliminate, l.name(), r};
  if (ur && !mentions_eigen(l, r.name()) && !mentions_local(l, e))
    return Action{ReductionRule::Eliminate, r.name(), l};
  if (!ul && !ur && is_rigid(l) && is_rigid(r) && head_of(l).is(TermKind::Const))
    return Action{ReductionRule::Decompose, {}, {}};
  return std::nullopt;
}

std::vector<Equation> decompose(const Signature& sig, const Equation& e) {
  Spine sl = spine(e.lhs), sr = spine(e.rhs);
  auto fty = sig.constant(sl.head.name());
  if (!fty) throw Error(ErrorKind::UnknownName, "unknown constant '" + sl.head.name() + "'");
  SplitType st = split_type(*fty);
  std::vector<Equation> out;
  for (std::size_t k = 0; k < sl.args.size(); ++k)
    out.push_back(make_guard(sl.args[k], sr.args[k], st.args.at(k), e.locals));
  return out;
}

}  // namespace

std::optional<ReductionStep> reduce_step_detail(const Signature& sig, const StateFormula& s) {
  for (std::size_t i = 0; i < s.conjuncts.size(); ++i) {
    const GuardedGoal& c = s.conjuncts[i];
    for (std::size_t gi = 0; gi < c.guards.size(); ++gi) {
      auto act = guard_action(c, c.guards[gi]);
      if (!act) continue;
      StateFormula out = s;
      GuardedGoal& oc = out.conjuncts[i];
      switch (act->rule) {
        case ReductionRule::DropIdentical:
          oc.guards.erase(oc.guards.begin() + static_cast<long>(gi));
          break;
        case ReductionRule::OccursCheck:
        case ReductionRule::Clash:
          oc.target = Target::truth();
          break;
        case ReductionRule::Eliminate: {
          oc.guards.erase(oc.guards.begin() + static_cast<long>(gi));
          oc = map_conjunct(oc, [&](const Term& t) { return replace_eigen(t, act->var, act->by); });
          auto& us = oc.universals;
          us.erase(std::remove_if(us.begin(), us.end(), [&](const Binding& b) { return b.name == act->var; }),
                   us.end());
          break;
        }
        case ReductionRule::Decompose: {
          std::vector<Equation> parts = decompose(sig, c.guards[gi]);
          oc.guards.erase(oc.guards.begin() + static_cast<long>(gi));
          oc.guards.insert(oc.guards.begin() + static_cast<long>(gi), parts.begin(), parts.end());
          break;
        }
      }
      tidy(out);
      return ReductionStep{std::move(out), act->rule, i, gi};
    }
  }
  return std::nullopt;
}

std::optional<StateFormula> reduce_step(const Signature& sig, const StateFormula& s) {
  auto step = reduce_step_detail(sig, s);
  if (!step) return std::nullopt;
  return std::move(step->state);
}

StateFormula reduce(const Signature& sig, const StateFormula& s) {
  StateFormula cur = s;
  while (auto next = reduce_step_detail(sig, cur)) cur = std::move(next->state);
  return cur;
}

bool is_reduced(const Signature&, const StateFormula& s) {
  for (const auto& c : s.conjuncts)
    for (const auto& e : c.guards)
      if (guard_action(c, e)) return false;
  return true;
}

// ---- classification ----

const char* to_string(Classification c) {
  switch (c) {
    case Classification::Success: return "success";
    case Classification::Failure: return "failure";
    case Classification::Active: return "active";
    case Classification::SuspendedCandidate: return "suspended";
  }
  return "?";
}

bool target_is_flex_flex(const Target& t) {
  return t.kind == TargetKind::Eq && is_flexible(t.lhs) && is_flexible(t.rhs) && !term_eq(t.lhs, t.rhs);
}

Classification classify(const StateFormula& s) {
  if (s.conjuncts.empty()) return Classification::Success;
  for (const auto& c : s.conjuncts)
    if (c.guards.empty() && c.target.kind == TargetKind::False) return Classification::Failure;
  for (const auto& c : s.conjuncts) {
    if (c.target.kind == TargetKind::Atom) return Classification::Active;
    if (c.target.kind == TargetKind::Eq && !target_is_flex_flex(c.target)) return Classification::Active;
  }
  return Classification::SuspendedCandidate;
}

// ---- rendering ----

namespace {

Term abstract_eigens(const Term& t, const std::vector<Binding>& names, unsigned depth) {
  switch (t.kind()) {
    case TermKind::Eigen:
      for (std::size_t k = 0; k < names.size(); ++k)
        if (names[k].name == t.name())
          return Term::bound(depth + static_cast<unsigned>(names.size() - 1 - k));
      return t;
    case TermKind::App:
      return Term::app(abstract_eigens(t.fun(), names, depth), abstract_eigens(t.arg(), names, depth));
    case TermKind::Lam: return Term::lam(t.binder_type(), abstract_eigens(t.body(), names, depth + 1));
    default: return t;
  }
}

Goal target_goal(const Target& t) {
  switch (t.kind) {
    case TargetKind::Eq: return Goal::eq(t.lhs, t.rhs, t.type);
    case TargetKind::Atom: return Goal::atom(t.lhs);
    case TargetKind::False: return Goal::falsity();
    case TargetKind::True: return Goal::truth();
  }
  return Goal::truth();
}

}  // namespace

Goal guarded_to_goal(const GuardedGoal& c) {
  Goal body = target_goal(c.target);
  for (auto it = c.guards.rbegin(); it != c.guards.rend(); ++it) {
    if (it->locals.empty()) {
      body = Goal::guard(it->lhs, it->rhs, it->type, body);
      continue;
    }
    std::vector<Type> tys;
    for (const auto& l : it->locals) tys.push_back(l.type);
    body = Goal::guard(wrap_lams(tys, abstract_eigens(it->lhs, it->locals, 0)),
                       wrap_lams(tys, abstract_eigens(it->rhs, it->locals, 0)), arrows(tys, it->type), body);
  }
  for (auto it = c.universals.rbegin(); it != c.universals.rend(); ++it)
    body = Goal::forall(it->name, it->type, body);
  return body;
}

Goal to_goal(const StateFormula& s) {
  Goal body;
  for (const auto& c : s.conjuncts) {
    Goal g = guarded_to_goal(c);
    body = body.valid() ? Goal::conj(body, g) : g;
  }
  if (!body.valid()) body = Goal::truth();
  for (auto it = s.existentials.rbegin(); it != s.existentials.rend(); ++it)
    body = Goal::exists(it->name, it->type, body);
  return body;
}

std::string print_state(const StateFormula& s) { return print_goal(to_goal(s)); }

std::string canonical_key(const StateFormula& s) {
  StateFormula r;
  Substitution ex;
  for (std::size_t k = 0; k < s.existentials.size(); ++k) {
    std::string n = "E" + std::to_string(k + 1);
    ex.bindings[s.existentials[k].name] = Term::logic_var(n);
    r.existentials.push_back({n, s.existentials[k].type});
  }
  for (const auto& c : s.conjuncts) {
    std::map<std::string, Term> names;
    GuardedGoal rc = c;
    for (std::size_t k = 0; k < c.universals.size(); ++k) {
      std::string n = "U" + std::to_string(k + 1);
      names[c.universals[k].name] = Term::eigen(n);
      rc.universals[k].name = n;
    }
    rc = map_conjunct(rc, [&](const Term& t) {
      return eta_contract(replace_eigens(apply_subst(ex, t), names));
    });
    r.conjuncts.push_back(std::move(rc));
  }
  return print_state(r);
}

bool state_alpha_eq(const StateFormula& a, const StateFormula& b) {
  return canonical_key(a) == canonical_key(b);
}

std::vector<std::string> state_violations(const Signature& sig, const StateFormula& s) {
  std::vector<std::string> out;
  TypeMap vars;
  std::set<std::string> names;
  for (const auto& e : s.existentials) {
    if (order(e.type) > 1) out.push_back("existential " + e.name + " has order > 1");
    if (contains_prop(e.type)) out.push_back("existential " + e.name + " ranges over formulas");
    if (!names.insert(e.name).second) out.push_back("duplicate name " + e.name);
    vars[e.name] = e.type;
  }
  for (std::size_t i = 0; i < s.conjuncts.size(); ++i) {
    const GuardedGoal& c = s.conjuncts[i];
    std::string at = "conjunct " + std::to_string(i) + ": ";
    TypeMap cv = vars;
    std::set<std::string> scope;
    for (const auto& u : c.universals) {
      if (!u.type.is_primitive()) out.push_back(at + "universal " + u.name + " is not primitive");
      if (!names.insert(u.name).second) out.push_back(at + "shared universal name " + u.name);
      cv[u.name] = u.type;
      scope.insert(u.name);
    }
    if (c.target.kind == TargetKind::True) out.push_back(at + "true conjunct");
    auto check_term = [&](const Term& t, const std::set<std::string>& locals, const Type* expect) {
      if (!beta_normalize(t).same_node(t)) out.push_back(at + "term not beta-normal");
      std::set<std::string> lv, ev;
      collect_logic_vars(t, lv);
      collect_eigens(t, ev);
      for (const auto& v : lv)
        if (!s.existential_type(v)) out.push_back(at + "unbound variable " + v);
      for (const auto& v : ev)
        if (!scope.count(v) && !locals.count(v) && !sig.eigen(v)) out.push_back(at + "eigenvariable " + v + " out of scope");
      try {
        Type ty = type_of(sig, cv, t);
        if (expect && ty != *expect) out.push_back(at + "ill-typed side " + print_term(t));
      } catch (const Error& e) {
        out.push_back(at + e.what());
      }
    };
    std::set<std::string> local_names;
    for (const auto& e : c.guards) {
      if (!e.type.is_primitive()) out.push_back(at + "guard at non-primitive type");
      std::set<std::string> locals;
      for (const auto& l : e.locals) {
        cv[l.name] = l.type;
        locals.insert(l.name);
        local_names.insert(l.name);
      }
      check_term(e.lhs, locals, &e.type);
      check_term(e.rhs, locals, &e.type);
    }
    for (const auto& l : local_names)
      if (!names.insert(l).second && !scope.count(l)) out.push_back(at + "shared local name " + l);
    if (c.target.kind == TargetKind::Eq) {
      if (!c.target.type.is_primitive()) out.push_back(at + "target at non-primitive type");
      check_term(c.target.lhs, {}, &c.target.type);
      check_term(c.target.rhs, {}, &c.target.type);
    } else if (c.target.kind == TargetKind::Atom) {
      Type prop = Type::prop();
      check_term(c.target.lhs, {}, &prop);
      if (!sig.is_predicate(predicate_of(c.target.lhs))) out.push_back(at + "atom without predicate head");
    }
  }
  return out;
}

}  // namespace slim
