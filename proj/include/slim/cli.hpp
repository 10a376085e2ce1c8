// Command drivers behind the slim executable.
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "slim/engine.hpp"

namespace slim {

enum class OutputFormat { Text, Records };

struct Invocation {
  std::string program_path;
  std::optional<std::string> goal_text;
  std::optional<std::string> goal_file;
  std::optional<std::string> goal_name;
  std::string subst;  // check only
  SearchConfig cfg;
  OutputFormat format = OutputFormat::Text;
};

struct RunReport {
  std::string goal_text;
  std::vector<std::string> outcomes;  // rendered lines, in emission order
  SearchStats stats;
  std::string classification;  // solution, suspended, exhausted, failed, verified, ...
  int exit_code = 1;
};

// Exit codes: solve 0 solution / 2 only suspended / 3 exhausted or failed;
// check 0 verified / 2 unverifiable / 3 refuted; decide 0 provable / 3 not.
// Input errors give 1 and a message on err.
RunReport cmd_solve(const Invocation& inv, std::ostream& out, std::ostream& err);
RunReport cmd_check(const Invocation& inv, std::ostream& out, std::ostream& err);
RunReport cmd_decide(const Invocation& inv, std::ostream& out, std::ostream& err);

// FNV-1a over the canonical rendering of a state.
std::string state_hash(const StateFormula& s);

}  // namespace slim
