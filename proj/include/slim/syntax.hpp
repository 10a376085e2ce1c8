// Concrete syntax: lambda Prolog style declarations, clauses and goals.
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "slim/formula.hpp"
#include "slim/term.hpp"

namespace slim {

struct KindDecl {
  std::vector<std::string> names;
};

struct TypeDecl {
  std::vector<std::string> names;
  Type type;
};

struct ClauseDecl {
  DefiniteClause clause;
  int line = 0;
};

struct NamedGoal {
  std::string name;
  Goal goal;
  int line = 0;
};

// A comment of the form "% @word ..." kept for tooling.
struct Pragma {
  std::string text;
  int line = 0;
};

struct SourceFile {
  std::vector<std::variant<KindDecl, TypeDecl, ClauseDecl>> declarations;
  std::vector<NamedGoal> goals;
  std::vector<Pragma> pragmas;
  Signature sig;
  std::vector<DefiniteClause> clauses;

  Program program() const { return Program{sig, clauses}; }
  const NamedGoal* goal(const std::string& name) const;
};

// `accumulate name.` and `accumulate "path".` are resolved relative to base_dir;
// without a base_dir they are rejected.
SourceFile parse_file(std::string_view text,
                      const std::optional<std::filesystem::path>& base_dir = std::nullopt);
SourceFile load_file(const std::filesystem::path& path);

Goal parse_goal(std::string_view text, const Signature& sig);

struct ParsedTerm {
  Term term;
  Type type;
  TypeMap free_vars;  // capitalized or underscored names, parsed as logic variables
};

// vars maps names usable as eigenvariables to their types.
ParsedTerm parse_term(std::string_view text, const Signature& sig, const TypeMap& vars = {},
                      const std::optional<Type>& expected = std::nullopt);

// Bindings "x := t" separated by ';' or ','. x must be an existential of goal;
// terms may use the goal's universals and capitalized don't-care variables.
Substitution parse_substitution(std::string_view text, const Signature& sig, const Goal& goal);

std::string print_type(const Type& t);
std::string print_term(const Term& t);
std::string print_goal(const Goal& g);
std::string print_substitution(const Substitution& theta);
std::string print_clause(const DefiniteClause& d);

}  // namespace slim
