#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "slim/cli.hpp"

namespace {

void add_goal_options(CLI::App* cmd, slim::Invocation& inv) {
  cmd->add_option("program", inv.program_path, "program file (.slim)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--goal", inv.goal_text, "goal text");
  cmd->add_option("--goal-file", inv.goal_file, "file holding the goal text")->check(CLI::ExistingFile);
  cmd->add_option("--goal-name", inv.goal_name, "named goal declared in the program file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Search for solutions of SLIM goals"};
  app.require_subcommand(1);

  slim::Invocation inv;
  std::string occurs = "on";
  std::string format = "text";
  bool trace = false;

  auto* solve = app.add_subcommand("solve", "search for solutions");
  auto* check = app.add_subcommand("check", "check a candidate substitution");
  auto* decide = app.add_subcommand("decide", "decide an existential-free, atom-free goal");
  for (auto* cmd : {solve, check, decide}) {
    add_goal_options(cmd, inv);
    cmd->add_option("--format", format, "text or records")->check(CLI::IsMember({"text", "records"}));
  }
  for (auto* cmd : {solve, check}) {
    cmd->add_option("--max-transitions", inv.cfg.max_transitions)->capture_default_str();
    cmd->add_option("--max-backchain", inv.cfg.max_backchain_depth)->capture_default_str();
    cmd->add_option("--max-imitation", inv.cfg.max_imitation_per_var)->capture_default_str();
    cmd->add_option("--occurs-check", occurs)->check(CLI::IsMember({"on", "off"}));
  }
  solve->add_option("--max-solutions", inv.cfg.max_solutions, "0 for no limit")->capture_default_str();
  solve->add_flag("--trace", trace, "print the transitions leading to each outcome");
  check->add_option("--subst", inv.subst, "bindings 'x := t; y := s'")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  inv.cfg.occurs_check_pruning = occurs == "on";
  inv.cfg.record_trace = trace;
  inv.format = format == "records" ? slim::OutputFormat::Records : slim::OutputFormat::Text;

  slim::RunReport r;
  if (*solve) r = slim::cmd_solve(inv, std::cout, std::cerr);
  else if (*check) r = slim::cmd_check(inv, std::cout, std::cerr);
  else r = slim::cmd_decide(inv, std::cout, std::cerr);
  return r.exit_code;
}
