#include "slim/cli.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "slim/syntax.hpp"

namespace slim {

using nlohmann::json;

std::string state_hash(const StateFormula& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : canonical_key(s)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

namespace {

struct Loaded {
  SourceFile file;
  Goal goal;
  std::string goal_text;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Loaded load(const Invocation& inv) {
  Loaded l;
  l.file = load_file(inv.program_path);
  int given = int(inv.goal_text.has_value()) + int(inv.goal_file.has_value()) + int(inv.goal_name.has_value());
  if (given > 1) throw Error(ErrorKind::InvalidInput, "give only one of --goal, --goal-file, --goal-name");
  if (inv.goal_text) {
    l.goal_text = *inv.goal_text;
  } else if (inv.goal_file) {
    l.goal_text = read_text(*inv.goal_file);
  } else {
    const NamedGoal* ng = nullptr;
    if (inv.goal_name) {
      ng = l.file.goal(*inv.goal_name);
      if (!ng) throw Error(ErrorKind::UnknownName, "no goal named '" + *inv.goal_name + "' in " + inv.program_path);
    } else if (l.file.goals.size() == 1) {
      ng = &l.file.goals.front();
    } else {
      throw Error(ErrorKind::InvalidInput, "no goal given");
    }
    l.goal = ng->goal;
    l.goal_text = print_goal(l.goal);
    return l;
  }
  l.goal = parse_goal(l.goal_text, l.file.sig);
  auto vs = check_goal(l.file.sig, l.goal);
  if (!vs.empty()) throw Error(ErrorKind::InvalidInput, "ill-formed goal: " + vs.front().message);
  return l;
}

json bindings_json(const Substitution& theta) {
  json b = json::object();
  for (const auto& [v, t] : theta.bindings) b[v] = print_term(t);
  return b;
}

json stats_json(const SearchStats& st) {
  return {{"transitions", st.transitions}, {"pruned", st.pruned},   {"iterations", st.iterations},
          {"depth_limit", st.depth_limit}, {"bound_hit", st.bound_hit}};
}

void print_trace(const std::vector<Transition>& trace, OutputFormat fmt, std::ostream& out) {
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const Transition& tr = trace[k];
    std::string label = tr.kind == TransitionKind::Backchain ? "eps" : print_substitution(tr.label);
    if (fmt == OutputFormat::Records) {
      json r = {{"kind", "transition"}, {"step", k + 1},   {"rule", to_string(tr.kind)},
                {"conjunct", tr.conjunct}, {"label", label}, {"state", state_hash(tr.next)}};
      if (tr.kind == TransitionKind::Backchain) r["clause"] = tr.clause;
      out << r.dump() << "\n";
    } else {
      out << "  " << k + 1 << ". " << to_string(tr.kind) << " #" << tr.conjunct;
      if (tr.kind == TransitionKind::Backchain) out << " clause " << tr.clause;
      out << " " << label << " -> " << state_hash(tr.next) << "\n";
    }
  }
}

RunReport input_error(RunReport r, const Error& e, std::ostream& err) {
  err << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
  r.classification = "error";
  r.exit_code = 1;
  return r;
}

}  // namespace

RunReport cmd_solve(const Invocation& inv, std::ostream& out, std::ostream& err) {
  RunReport r;
  Loaded l;
  try {
    l = load(inv);
  } catch (const Error& e) {
    return input_error(r, e, err);
  }
  r.goal_text = l.goal_text;
  const bool records = inv.format == OutputFormat::Records;
  std::size_t solution_no = 0;
  auto on_outcome = [&](const Outcome& o) {
    if (!o.trace.empty()) print_trace(o.trace, inv.format, out);
    std::string line;
    if (o.kind == OutcomeKind::Solution) {
      ++solution_no;
      json rec = {{"kind", "solution"},
                  {"index", solution_no},
                  {"substitution", print_substitution(o.theta)},
                  {"bindings", bindings_json(o.theta)}};
      line = records ? rec.dump() : "solution " + std::to_string(solution_no) + ": " + print_substitution(o.theta);
    } else if (o.kind == OutcomeKind::Suspended) {
      json rec = {{"kind", "suspended"},
                  {"state", print_state(o.state)},
                  {"accumulated", print_substitution(o.accumulated)}};
      line = records ? rec.dump() : "suspended: " + print_state(o.state);
    } else {
      json rec = {{"kind", "exhausted"}, {"reason", o.reason}};
      line = records ? rec.dump() : "exhausted: " + o.reason;
    }
    r.outcomes.push_back(line);
    out << line << "\n";
    return true;
  };
  SearchResult res;
  try {
    res = search(l.file.program(), l.goal, inv.cfg, on_outcome);
  } catch (const Error& e) {
    return input_error(r, e, err);
  }
  r.stats = res.stats;
  if (res.count(OutcomeKind::Solution) > 0) {
    r.classification = "solution";
    r.exit_code = 0;
  } else if (res.count(OutcomeKind::Suspended) > 0) {
    r.classification = "suspended";
    r.exit_code = 2;
  } else {
    r.classification = res.count(OutcomeKind::Exhausted) > 0 ? "exhausted" : "failed";
    r.exit_code = 3;
  }
  if (records) {
    json st = stats_json(r.stats);
    st["kind"] = "stats";
    st["classification"] = r.classification;
    out << st.dump() << "\n";
  } else {
    if (r.classification == "failed") out << "no solutions\n";
    out << "stats: transitions=" << r.stats.transitions << " pruned=" << r.stats.pruned
        << " iterations=" << r.stats.iterations << " depth-limit=" << r.stats.depth_limit
        << " bound=" << (r.stats.bound_hit ? "hit" : "ok") << "\n";
  }
  return r;
}

RunReport cmd_check(const Invocation& inv, std::ostream& out, std::ostream& err) {
  RunReport r;
  Verdict v;
  try {
    Loaded l = load(inv);
    r.goal_text = l.goal_text;
    Substitution theta = parse_substitution(inv.subst, l.file.sig, l.goal);
    v = check_solution(l.file.program(), l.goal, theta, inv.cfg);
  } catch (const Error& e) {
    return input_error(r, e, err);
  }
  r.classification = to_string(v);
  r.exit_code = v == Verdict::Verified ? 0 : v == Verdict::Unverifiable ? 2 : 3;
  std::string line = inv.format == OutputFormat::Records
                         ? json{{"kind", "verdict"}, {"verdict", r.classification}}.dump()
                         : r.classification;
  r.outcomes.push_back(line);
  out << line << "\n";
  return r;
}

RunReport cmd_decide(const Invocation& inv, std::ostream& out, std::ostream& err) {
  RunReport r;
  bool provable;
  try {
    Loaded l = load(inv);
    r.goal_text = l.goal_text;
    provable = decide_existential_free(l.file.sig, l.goal);
  } catch (const Error& e) {
    return input_error(r, e, err);
  }
  r.classification = provable ? "provable" : "not-provable";
  r.exit_code = provable ? 0 : 3;
  std::string line = inv.format == OutputFormat::Records
                         ? json{{"kind", "decision"}, {"result", r.classification}}.dump()
                         : r.classification;
  r.outcomes.push_back(line);
  out << line << "\n";
  return r;
}

}  // namespace slim
