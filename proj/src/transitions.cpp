#include <algorithm>

#include "slim/engine.hpp"

namespace slim {

const char* to_string(TransitionKind k) {
  switch (k) {
    case TransitionKind::Backchain: return "backchain";
    case TransitionKind::UnifIdentical: return "identical";
    case TransitionKind::UnifDecompose: return "decompose";
    case TransitionKind::UnifClash: return "clash";
    case TransitionKind::UnifImitate: return "imitate";
    case TransitionKind::UnifProject: return "project";
  }
  return "?";
}

namespace {

struct FlexRigid {
  Term flex, rigid;
};

std::optional<FlexRigid> flex_rigid(const Target& t) {
  if (t.kind != TargetKind::Eq) return std::nullopt;
  if (is_flexible(t.lhs) && is_rigid(t.rhs)) return FlexRigid{t.lhs, t.rhs};
  if (is_flexible(t.rhs) && is_rigid(t.lhs)) return FlexRigid{t.rhs, t.lhs};
  return std::nullopt;
}

bool atomic_args(const std::vector<Term>& args) {
  return std::all_of(args.begin(), args.end(), [](const Term& a) {
    return a.is(TermKind::Const) || a.is(TermKind::Eigen);
  });
}

bool same_head(const Term& a, const Term& b) {
  const Term& x = head_of(a);
  const Term& y = head_of(b);
  return x.kind() == y.kind() && x.name() == y.name();
}

Type existential_type(const StateFormula& s, const std::string& x) {
  auto ty = s.existential_type(x);
  if (!ty) throw Error(ErrorKind::UnknownName, "unknown existential '" + x + "'");
  return *ty;
}

}  // namespace

std::vector<Move> unify_moves(const StateFormula& s, std::size_t i, bool occurs_check_pruning) {
  const GuardedGoal& c = s.conjuncts.at(i);
  const Target& t = c.target;
  if (t.kind != TargetKind::Eq) return {};
  if (term_eq(t.lhs, t.rhs)) return {{TransitionKind::UnifIdentical, i}};
  if (is_rigid(t.lhs) && is_rigid(t.rhs)) {
    if (same_head(t.lhs, t.rhs)) return {{TransitionKind::UnifDecompose, i}};
    return {{TransitionKind::UnifClash, i}};
  }
  auto fr = flex_rigid(t);
  if (!fr) return {};
  Spine fs = spine(fr->flex);
  const std::string& x = fs.head.name();
  SplitType st = split_type(existential_type(s, x));
  std::vector<Move> out;
  for (std::size_t j = 0; j < st.args.size(); ++j)
    if (st.args[j] == st.target) out.push_back({TransitionKind::UnifProject, i, 0, j});
  const Term& h = head_of(fr->rigid);
  bool imitable = h.is(TermKind::Const) || (h.is(TermKind::Eigen) && !c.has_universal(h.name()));
  if (imitable && occurs_check_pruning && atomic_args(fs.args) && flex_head_on_rigid_path(fr->rigid, x))
    imitable = false;
  if (imitable) out.push_back({TransitionKind::UnifImitate, i});
  return out;
}

std::vector<Move> backchain_moves(const Program& p, const StateFormula& s, std::size_t i) {
  const GuardedGoal& c = s.conjuncts.at(i);
  if (c.target.kind != TargetKind::Atom) return {};
  std::vector<Move> out;
  for (std::size_t k : p.clauses_for(predicate_of(c.target.lhs))) out.push_back({TransitionKind::Backchain, i, k});
  return out;
}

Transition realize(const Program& p, const StateFormula& s, const Move& m) {
  const Signature& sig = p.sig;
  const GuardedGoal& c = s.conjuncts.at(m.conjunct);
  Transition tr{m.kind, m.conjunct, m.clause, m.arg, {}, {}, {}};
  switch (m.kind) {
    case TransitionKind::UnifIdentical: {
      tr.next = replace_target(s, m.conjunct, Goal::truth());
      break;
    }
    case TransitionKind::UnifClash: {
      tr.next = replace_target(s, m.conjunct, Goal::falsity());
      break;
    }
    case TransitionKind::UnifDecompose: {
      Spine l = spine(c.target.lhs), r = spine(c.target.rhs);
      auto fty = sig.constant(l.head.name());
      if (!fty) throw Error(ErrorKind::UnknownName, "unknown constant '" + l.head.name() + "'");
      SplitType st = split_type(*fty);
      Goal g;
      for (std::size_t k = 0; k < l.args.size(); ++k) {
        Goal e = Goal::eq(l.args[k], r.args[k], st.args.at(k));
        g = g.valid() ? Goal::conj(g, e) : e;
      }
      if (!g.valid()) g = Goal::truth();
      tr.next = replace_target(s, m.conjunct, g);
      break;
    }
    case TransitionKind::UnifProject:
    case TransitionKind::UnifImitate: {
      auto fr = flex_rigid(c.target);
      const std::string x = head_of(fr->flex).name();
      Type xty = existential_type(s, x);
      SplitType st = split_type(xty);
      const std::size_t arity = st.args.size();
      auto bound_args = [&] {
        std::vector<Term> ws;
        for (std::size_t k = 0; k < arity; ++k) ws.push_back(Term::bound(static_cast<unsigned>(arity - 1 - k)));
        return ws;
      };
      Term body;
      if (m.kind == TransitionKind::UnifProject) {
        body = Term::bound(static_cast<unsigned>(arity - 1 - m.arg));
      } else {
        const Term& h = head_of(fr->rigid);
        Type hty = h.is(TermKind::Const) ? *sig.constant(h.name()) : *sig.eigen(h.name());
        SplitType hs = split_type(hty);
        std::vector<Term> parts;
        for (const auto& aty : hs.args) {
          std::string n = global_names().fresh(x);
          Type nty = arrows(st.args, aty);
          tr.fresh.push_back({n, nty});
          tr.label.types[n] = nty;
          parts.push_back(Term::apply(Term::logic_var(n), bound_args()));
        }
        body = Term::apply(h, parts);
      }
      tr.label.bind(x, xty, wrap_lams(st.args, body));
      tr.next = apply_to_state(s, tr.label, tr.fresh);
      break;
    }
    case TransitionKind::Backchain: {
      DefiniteClause d = rename_clause(p.clauses.at(m.clause), global_names());
      Spine atom = spine(c.target.lhs), head = spine(d.head);
      SplitType st = split_type(*sig.constant(atom.head.name()));
      Goal g;
      for (std::size_t k = 0; k < atom.args.size(); ++k) {
        Goal e = Goal::eq(atom.args[k], head.args.at(k), st.args.at(k));
        g = g.valid() ? Goal::conj(g, e) : e;
      }
      g = g.valid() ? Goal::conj(g, d.body) : d.body;
      for (auto it = d.universals.rbegin(); it != d.universals.rend(); ++it) g = Goal::exists(it->name, it->type, g);
      tr.next = replace_target(s, m.conjunct, g);
      break;
    }
  }
  tr.next = reduce(sig, tr.next);
  return tr;
}

std::vector<Transition> unify_transitions(const Signature& sig, const StateFormula& s, bool occurs_check_pruning) {
  Program p{sig, {}};
  std::vector<Transition> out;
  for (std::size_t i = 0; i < s.conjuncts.size(); ++i)
    for (const auto& m : unify_moves(s, i, occurs_check_pruning)) out.push_back(realize(p, s, m));
  return out;
}

std::vector<Transition> backchain_transitions(const Program& p, const StateFormula& s) {
  std::vector<Transition> out;
  for (std::size_t i = 0; i < s.conjuncts.size(); ++i)
    for (const auto& m : backchain_moves(p, s, i)) out.push_back(realize(p, s, m));
  return out;
}

std::vector<Transition> transitions(const Program& p, const StateFormula& s, bool occurs_check_pruning) {
  std::vector<Transition> out = unify_transitions(p.sig, s, occurs_check_pruning);
  std::vector<Transition> bc = backchain_transitions(p, s);
  out.insert(out.end(), std::make_move_iterator(bc.begin()), std::make_move_iterator(bc.end()));
  return out;
}

}  // namespace slim
