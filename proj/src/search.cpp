#include <algorithm>
#include <set>

#include "slim/engine.hpp"
#include "slim/syntax.hpp"

namespace slim {

const char* to_string(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::Solution: return "solution";
    case OutcomeKind::Suspended: return "suspended";
    case OutcomeKind::Exhausted: return "exhausted";
  }
  return "?";
}

std::size_t SearchResult::count(OutcomeKind k) const {
  return static_cast<std::size_t>(
      std::count_if(outcomes.begin(), outcomes.end(), [&](const Outcome& o) { return o.kind == k; }));
}

std::vector<Substitution> SearchResult::solutions() const {
  std::vector<Substitution> out;
  for (const auto& o : outcomes)
    if (o.kind == OutcomeKind::Solution) out.push_back(o.theta);
  return out;
}

Substitution extract_solution(const std::vector<RaisedVar>& raising, const Substitution& acc,
                              const StateFormula& final_state) {
  Substitution out;
  std::map<std::string, Term> dont_care;
  for (const auto& r : raising) {
    std::vector<Term> args;
    for (const auto& y : r.scope) args.push_back(Term::eigen(y));
    Term h = apply_subst(acc, Term::logic_var(r.raised));
    Term t = beta_normalize(Term::apply(h, args));
    // canonical don't-care names in order of first occurrence
    replace_leaves(t, [&](const Term& leaf) -> std::optional<Term> {
      if (leaf.is(TermKind::LogicVar) && !dont_care.count(leaf.name())) {
        std::string n = "_" + std::to_string(dont_care.size() + 1);
        dont_care[leaf.name()] = Term::logic_var(n);
        auto ty = final_state.existential_type(leaf.name());
        if (!ty) ty = acc.types.count(leaf.name()) ? std::optional<Type>(acc.types.at(leaf.name())) : std::nullopt;
        if (ty) out.types[n] = *ty;
      }
      return std::nullopt;
    });
    t = replace_leaves(t, [&](const Term& leaf) -> std::optional<Term> {
      if (!leaf.is(TermKind::LogicVar)) return std::nullopt;
      return dont_care.at(leaf.name());
    });
    out.bind(r.original, r.type, t);
  }
  return out;
}

namespace {

bool same_solution(const Substitution& a, const Substitution& b) {
  if (a.bindings.size() != b.bindings.size()) return false;
  for (const auto& [v, t] : a.bindings) {
    auto it = b.bindings.find(v);
    if (it == b.bindings.end() || !term_eq(t, it->second)) return false;
  }
  return true;
}

// Existentials that occur in some target; only these can be instantiated by
// later transitions.
std::set<std::string> live_vars(const StateFormula& s) {
  std::set<std::string> out;
  for (const auto& c : s.conjuncts) {
    if (c.target.kind == TargetKind::Eq) {
      collect_logic_vars(c.target.lhs, out);
      collect_logic_vars(c.target.rhs, out);
    } else if (c.target.kind == TargetKind::Atom) {
      collect_logic_vars(c.target.lhs, out);
    }
  }
  return out;
}

// A guarded falsehood whose guards mention no live existential can never be
// discharged, so no solution lies below this state.
bool hopeless(const StateFormula& s) {
  std::set<std::string> live;
  bool computed = false;
  for (const auto& c : s.conjuncts) {
    if (c.target.kind != TargetKind::False || c.guards.empty()) continue;
    if (!computed) {
      live = live_vars(s);
      computed = true;
    }
    std::set<std::string> vars;
    for (const auto& e : c.guards) {
      collect_logic_vars(e.lhs, vars);
      collect_logic_vars(e.rhs, vars);
    }
    if (std::none_of(vars.begin(), vars.end(), [&](const std::string& v) { return live.count(v) > 0; }))
      return true;
  }
  return false;
}

// First-argument style filter for unguarded atoms: a clause whose head has a
// rigid argument clashing with the goal's rigid argument would fail at once.
bool head_may_match(const Term& goal, const Term& head) {
  Spine g = spine(goal), h = spine(head);
  for (std::size_t k = 0; k < g.args.size() && k < h.args.size(); ++k) {
    const Term& a = strip_lams(g.args[k]).second;
    const Term& b = strip_lams(h.args[k]).second;
    if (is_rigid(a) && is_rigid(b) && head_of(a).is(TermKind::Const) && head_of(b).is(TermKind::Const) &&
        head_of(a).name() != head_of(b).name())
      return false;
  }
  return true;
}

struct Choice {
  enum Kind { Moves, Dead, Stuck } kind = Stuck;
  std::vector<Move> moves;
};

class Searcher {
 public:
  Searcher(const Program& p, const SearchConfig& cfg, const std::function<bool(const Outcome&)>& cb)
      : p_(p), cfg_(cfg), cb_(cb) {}

  SearchResult run(const Goal& g) {
    Normalization n = normalize_with_raising(g);
    result_.raising = n.raising;
    result_.initial = reduce(p_.sig, n.state);
    std::size_t limit = std::min<std::size_t>(8, cfg_.max_transitions);
    while (true) {
      depth_cut_ = false;
      ++result_.stats.iterations;
      result_.stats.depth_limit = limit;
      Node root{result_.initial, {}, 0, 0, {}, {}};
      dfs(root, limit);
      if (stop_ || !depth_cut_ || limit >= cfg_.max_transitions) break;
      limit = std::min(limit * 2, cfg_.max_transitions);
    }
    bool enough = solutions_ >= cfg_.max_solutions && cfg_.max_solutions > 0;
    if ((depth_cut_ || cap_cut_) && !enough && !stop_) {
      result_.stats.bound_hit = true;
      Outcome o{OutcomeKind::Exhausted, {}, {}, {}, {}, {}};
      o.reason = depth_cut_ ? "max-transitions " + std::to_string(cfg_.max_transitions) + " reached"
                            : "backchain or imitation bound reached";
      result_.outcomes.push_back(o);
      if (cb_) cb_(o);
    }
    return std::move(result_);
  }

 private:
  struct Node {
    StateFormula state;
    Substitution acc;
    std::size_t depth;
    std::size_t backchains;
    std::map<std::string, std::string> lineage;
    std::map<std::string, std::size_t> imitations;
  };

  Choice select(const StateFormula& s) {
    const auto& cs = s.conjuncts;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const Target& t = cs[i].target;
      if (t.kind == TargetKind::Eq && (term_eq(t.lhs, t.rhs) || (is_rigid(t.lhs) && is_rigid(t.rhs))))
        return {Choice::Moves, unify_moves(s, i, cfg_.occurs_check_pruning)};
    }
    for (bool guarded : {false, true}) {
      std::optional<std::vector<Move>> best;
      for (std::size_t i = 0; i < cs.size(); ++i) {
        if (cs[i].guards.empty() == guarded || cs[i].target.kind != TargetKind::Eq) continue;
        if (target_is_flex_flex(cs[i].target)) continue;
        auto ms = unify_moves(s, i, cfg_.occurs_check_pruning);
        if (ms.empty()) {
          if (!guarded) return {Choice::Dead, {}};
          continue;
        }
        if (!best || ms.size() < best->size()) best = std::move(ms);
      }
      if (best) return {Choice::Moves, std::move(*best)};
      for (std::size_t i = 0; i < cs.size(); ++i) {
        if (cs[i].guards.empty() == guarded || cs[i].target.kind != TargetKind::Atom) continue;
        auto ms = backchain_moves(p_, s, i);
        if (!guarded) {
          const Term& atom = cs[i].target.lhs;
          ms.erase(std::remove_if(ms.begin(), ms.end(),
                                  [&](const Move& m) { return !head_may_match(atom, p_.clauses[m.clause].head); }),
                   ms.end());
          if (ms.empty()) return {Choice::Dead, {}};
          return {Choice::Moves, std::move(ms)};
        }
        if (!ms.empty()) return {Choice::Moves, std::move(ms)};
      }
    }
    return {Choice::Stuck, {}};
  }

  void emit(Outcome o) {
    result_.outcomes.push_back(o);
    if (cb_ && !cb_(result_.outcomes.back())) stop_ = true;
  }

  void suspend(const Node& n) {
    std::string key = canonical_key(n.state);
    if (!suspended_.insert(key).second) return;
    Outcome o{OutcomeKind::Suspended, {}, n.state, n.acc, {}, {}};
    if (cfg_.record_trace) o.trace = path_;
    emit(std::move(o));
  }

  void dfs(const Node& n, std::size_t limit) {
    if (stop_) return;
    Classification cls = classify(n.state);
    if (cls == Classification::Success) {
      Substitution theta = extract_solution(result_.raising, n.acc, n.state);
      for (const auto& seen : seen_)
        if (same_solution(seen, theta)) return;
      seen_.push_back(theta);
      ++solutions_;
      Outcome o{OutcomeKind::Solution, theta, n.state, n.acc, {}, {}};
      if (cfg_.record_trace) o.trace = path_;
      emit(std::move(o));
      if (cfg_.max_solutions > 0 && solutions_ >= cfg_.max_solutions) stop_ = true;
      return;
    }
    if (cls == Classification::Failure) {
      ++result_.stats.pruned;
      return;
    }
    if (hopeless(n.state)) {
      suspend(n);
      return;
    }
    Choice ch = select(n.state);
    if (ch.kind == Choice::Dead) {
      ++result_.stats.pruned;
      return;
    }
    if (ch.kind == Choice::Stuck) {
      suspend(n);
      return;
    }
    if (n.depth >= limit) {
      depth_cut_ = true;
      return;
    }
    for (const Move& m : ch.moves) {
      if (stop_) return;
      Node child{{}, {}, n.depth + 1, n.backchains, n.lineage, n.imitations};
      if (m.kind == TransitionKind::Backchain) {
        if (n.backchains >= cfg_.max_backchain_depth) {
          cap_cut_ = true;
          continue;
        }
        ++child.backchains;
      }
      std::string root;
      if (m.kind == TransitionKind::UnifImitate) {
        const Target& t = n.state.conjuncts[m.conjunct].target;
        const Term& x = is_flexible(t.lhs) ? head_of(t.lhs) : head_of(t.rhs);
        auto it = n.lineage.find(x.name());
        root = it == n.lineage.end() ? x.name() : it->second;
        auto cnt = n.imitations.find(root);
        if (cnt != n.imitations.end() && cnt->second >= cfg_.max_imitation_per_var) {
          cap_cut_ = true;
          continue;
        }
        ++child.imitations[root];
      }
      Transition tr = realize(p_, n.state, m);
      ++result_.stats.transitions;
      for (const auto& f : tr.fresh) child.lineage[f.name] = root;
      child.state = tr.next;
      child.acc = compose(n.acc, tr.label);
      path_.push_back(std::move(tr));
      dfs(child, limit);
      path_.pop_back();
    }
  }

  const Program& p_;
  SearchConfig cfg_;
  std::function<bool(const Outcome&)> cb_;
  SearchResult result_;
  std::vector<Substitution> seen_;
  std::set<std::string> suspended_;
  std::vector<Transition> path_;
  std::size_t solutions_ = 0;
  bool stop_ = false;
  bool depth_cut_ = false;
  bool cap_cut_ = false;
};

}  // namespace

SearchResult search(const Program& p, const Goal& g, const SearchConfig& cfg,
                    const std::function<bool(const Outcome&)>& on_outcome) {
  return Searcher(p, cfg, on_outcome).run(g);
}

}  // namespace slim
