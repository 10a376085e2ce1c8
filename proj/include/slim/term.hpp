// Simply typed lambda terms: types, signatures, terms, substitutions.
#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace slim {

enum class ErrorKind {
  UnknownName,
  TypeMismatch,
  SyntaxError,
  UndeclaredConstant,
  ReservedName,
  OpenGoal,
  NotRaisable,
  PreconditionViolated,
  ScopeViolation,
  InvalidInput,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// The framework formula type.
inline constexpr std::string_view kPropType = "o";

class Type {
 public:
  Type() = default;
  static Type primitive(std::string name);
  static Type arrow(Type domain, Type codomain);
  static Type prop() { return primitive(std::string(kPropType)); }

  bool valid() const { return node_ != nullptr; }
  bool is_primitive() const;
  bool is_arrow() const { return valid() && !is_primitive(); }
  const std::string& name() const;
  const Type& domain() const;
  const Type& codomain() const;

  friend bool operator==(const Type& a, const Type& b);
  friend bool operator!=(const Type& a, const Type& b) { return !(a == b); }

 private:
  struct Node;
  explicit Type(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct SplitType {
  std::vector<Type> args;
  Type target;
};

unsigned order(const Type& t);
SplitType split_type(const Type& t);
Type arrows(const std::vector<Type>& args, const Type& target);
bool contains_prop(const Type& t);
std::string type_to_string(const Type& t);

class Signature {
 public:
  void declare_kind(const std::string& name);
  void declare_constant(const std::string& name, const Type& type);
  void declare_eigen(const std::string& name, const Type& type);

  bool has_kind(const std::string& name) const { return kinds_.count(name) > 0; }
  std::optional<Type> constant(const std::string& name) const;
  std::optional<Type> eigen(const std::string& name) const;
  bool is_predicate(const std::string& name) const;

  const std::vector<std::string>& kinds() const { return kind_order_; }
  const std::map<std::string, Type>& constants() const { return constants_; }
  const std::map<std::string, Type>& eigenvariables() const { return eigens_; }

 private:
  std::set<std::string> kinds_;
  std::vector<std::string> kind_order_;
  std::map<std::string, Type> constants_;
  std::map<std::string, Type> eigens_;
};

enum class TermKind { Const, Eigen, LogicVar, Bound, App, Lam };

class Term {
 public:
  Term() = default;
  static Term constant(std::string name);
  static Term eigen(std::string name);
  static Term logic_var(std::string name);
  static Term bound(unsigned index);
  static Term app(Term fun, Term arg);
  static Term lam(Type binder, Term body);
  static Term apply(Term head, const std::vector<Term>& args);

  bool valid() const { return node_ != nullptr; }
  TermKind kind() const;
  bool is(TermKind k) const { return kind() == k; }
  const std::string& name() const;
  unsigned index() const;
  const Term& fun() const;
  const Term& arg() const;
  const Type& binder_type() const;
  const Term& body() const;

  // Pointer identity; cheap pre-check before structural comparison.
  bool same_node(const Term& other) const { return node_ == other.node_; }

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Spine {
  Term head;
  std::vector<Term> args;
};

Spine spine(const Term& t);
const Term& head_of(const Term& t);
bool is_rigid(const Term& t);
bool is_flexible(const Term& t);
bool is_name(const Term& t);  // Const, Eigen or LogicVar leaf

// Strips leading abstractions, returning the binder types and the body.
std::pair<std::vector<Type>, Term> strip_lams(const Term& t);
Term wrap_lams(const std::vector<Type>& binders, Term body);

Term shift(const Term& t, int delta, unsigned cutoff = 0);
// Replaces loose Bound(0) in body by value and lowers the other loose indices.
Term instantiate(const Term& body, const Term& value);
Term beta_normalize(const Term& t);
bool term_eq(const Term& a, const Term& b);
bool has_loose_bound(const Term& t, unsigned depth = 0);
// Contracts every eta redex; used for canonical printing.
Term eta_contract(const Term& t);
unsigned term_size(const Term& t);
unsigned term_depth(const Term& t);

using TypeMap = std::map<std::string, Type>;

// Eigen names are looked up in the signature, then in vars; LogicVar names in vars.
Type type_of(const Signature& sig, const TypeMap& vars, const Term& t);

// Replaces free name leaves by terms; fn returns nullopt to keep a leaf.
Term replace_leaves(const Term& t,
                    const std::function<std::optional<Term>(const Term&)>& fn);
Term replace_eigen(const Term& t, const std::string& name, const Term& by);
Term replace_eigens(const Term& t, const std::map<std::string, Term>& by);

void collect_logic_vars(const Term& t, std::set<std::string>& out);
void collect_eigens(const Term& t, std::set<std::string>& out);
void collect_constants(const Term& t, std::set<std::string>& out);
bool mentions_logic_var(const Term& t, const std::string& name);
bool mentions_eigen(const Term& t, const std::string& name);

struct Substitution {
  std::map<std::string, Term> bindings;
  TypeMap types;

  bool empty() const { return bindings.empty(); }
  bool binds(const std::string& v) const { return bindings.count(v) > 0; }
  void bind(const std::string& v, const Type& type, const Term& t);
};

Term apply_subst(const Substitution& theta, const Term& t);
// apply_subst(compose(rho, theta), t) == apply_subst(theta, apply_subst(rho, t)).
Substitution compose(const Substitution& rho, const Substitution& theta);
Substitution restrict_to(const Substitution& theta, const std::set<std::string>& vars);

// Strict rigid path through arguments of constant-headed applications.
bool rigid_subterm(const Term& t, const Term& s);
// Rigid path that may also pass through abstractions and eigen-headed terms;
// this is the occurs relation used by reduction and occurs-check pruning.
bool occurs_rigidly(const Term& t, const Term& s);
// True when a subterm headed by logic variable x lies on a rigid path of t.
bool flex_head_on_rigid_path(const Term& t, const std::string& x);

class NameSupply {
 public:
  // base with any trailing _<digits> removed, then _<counter>.
  std::string fresh(std::string_view base);

 private:
  std::atomic<std::uint64_t> next_{1};
};

}  // namespace slim
