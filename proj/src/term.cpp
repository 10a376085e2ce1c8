#include "slim/term.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace slim {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UndeclaredConstant: return "UndeclaredConstant";
    case ErrorKind::ReservedName: return "ReservedName";
    case ErrorKind::OpenGoal: return "OpenGoal";
    case ErrorKind::NotRaisable: return "NotRaisable";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::ScopeViolation: return "ScopeViolation";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Error";
}

// ---- types ----

struct Type::Node {
  bool primitive = true;
  std::string name;
  Type dom, cod;
};

Type Type::primitive(std::string name) {
  auto n = std::make_shared<Node>();
  n->name = std::move(name);
  return Type(std::move(n));
}

Type Type::arrow(Type domain, Type codomain) {
  auto n = std::make_shared<Node>();
  n->primitive = false;
  n->dom = std::move(domain);
  n->cod = std::move(codomain);
  return Type(std::move(n));
}

bool Type::is_primitive() const { return valid() && node_->primitive; }
const std::string& Type::name() const { return node_->name; }
const Type& Type::domain() const { return node_->dom; }
const Type& Type::codomain() const { return node_->cod; }

bool operator==(const Type& a, const Type& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.node_->primitive != b.node_->primitive) return false;
  if (a.node_->primitive) return a.node_->name == b.node_->name;
  return a.node_->dom == b.node_->dom && a.node_->cod == b.node_->cod;
}

unsigned order(const Type& t) {
  if (t.is_primitive()) return 0;
  return std::max(order(t.domain()) + 1, order(t.codomain()));
}

SplitType split_type(const Type& t) {
  SplitType out;
  Type cur = t;
  while (cur.is_arrow()) {
    out.args.push_back(cur.domain());
    cur = cur.codomain();
  }
  out.target = cur;
  return out;
}

Type arrows(const std::vector<Type>& args, const Type& target) {
  Type out = target;
  for (auto it = args.rbegin(); it != args.rend(); ++it) out = Type::arrow(*it, out);
  return out;
}

bool contains_prop(const Type& t) {
  if (t.is_primitive()) return t.name() == kPropType;
  return contains_prop(t.domain()) || contains_prop(t.codomain());
}

std::string type_to_string(const Type& t) {
  if (!t.valid()) return "?";
  if (t.is_primitive()) return t.name();
  std::string dom = type_to_string(t.domain());
  if (t.domain().is_arrow()) dom = "(" + dom + ")";
  return dom + " -> " + type_to_string(t.codomain());
}

// ---- signatures ----

void Signature::declare_kind(const std::string& name) {
  if (kinds_.insert(name).second) kind_order_.push_back(name);
}

void Signature::declare_constant(const std::string& name, const Type& type) {
  if (eigens_.count(name))
    throw Error(ErrorKind::ReservedName, "'" + name + "' is already an eigenvariable");
  constants_[name] = type;
}

void Signature::declare_eigen(const std::string& name, const Type& type) {
  if (!type.is_primitive())
    throw Error(ErrorKind::TypeMismatch, "eigenvariable '" + name + "' must have primitive type");
  if (constants_.count(name))
    throw Error(ErrorKind::ReservedName, "'" + name + "' is already a constant");
  eigens_[name] = type;
}

std::optional<Type> Signature::constant(const std::string& name) const {
  auto it = constants_.find(name);
  if (it == constants_.end()) return std::nullopt;
  return it->second;
}

std::optional<Type> Signature::eigen(const std::string& name) const {
  auto it = eigens_.find(name);
  if (it == eigens_.end()) return std::nullopt;
  return it->second;
}

bool Signature::is_predicate(const std::string& name) const {
  auto ty = constant(name);
  return ty && split_type(*ty).target.name() == kPropType;
}

// ---- terms ----

struct Term::Node {
  TermKind kind;
  std::string name;
  unsigned index = 0;
  Term a, b;
  Type type;
};

Term Term::constant(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::Const;
  n->name = std::move(name);
  return Term(std::move(n));
}

Term Term::eigen(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::Eigen;
  n->name = std::move(name);
  return Term(std::move(n));
}

Term Term::logic_var(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::LogicVar;
  n->name = std::move(name);
  return Term(std::move(n));
}

Term Term::bound(unsigned index) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::Bound;
  n->index = index;
  return Term(std::move(n));
}

Term Term::app(Term fun, Term arg) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::App;
  n->a = std::move(fun);
  n->b = std::move(arg);
  return Term(std::move(n));
}

Term Term::lam(Type binder, Term body) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::Lam;
  n->type = std::move(binder);
  n->a = std::move(body);
  return Term(std::move(n));
}

Term Term::apply(Term head, const std::vector<Term>& args) {
  for (const auto& a : args) head = app(head, a);
  return head;
}

TermKind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
unsigned Term::index() const { return node_->index; }
const Term& Term::fun() const { return node_->a; }
const Term& Term::arg() const { return node_->b; }
const Type& Term::binder_type() const { return node_->type; }
const Term& Term::body() const { return node_->a; }

Spine spine(const Term& t) {
  Spine s;
  Term cur = t;
  while (cur.is(TermKind::App)) {
    s.args.push_back(cur.arg());
    cur = cur.fun();
  }
  std::reverse(s.args.begin(), s.args.end());
  s.head = cur;
  return s;
}

const Term& head_of(const Term& t) {
  const Term* cur = &t;
  while (cur->is(TermKind::App)) cur = &cur->fun();
  return *cur;
}

bool is_rigid(const Term& t) {
  const Term& h = head_of(t);
  return h.is(TermKind::Const) || h.is(TermKind::Eigen);
}

bool is_flexible(const Term& t) { return head_of(t).is(TermKind::LogicVar); }

bool is_name(const Term& t) {
  return t.is(TermKind::Const) || t.is(TermKind::Eigen) || t.is(TermKind::LogicVar);
}

std::pair<std::vector<Type>, Term> strip_lams(const Term& t) {
  std::vector<Type> binders;
  Term cur = t;
  while (cur.is(TermKind::Lam)) {
    binders.push_back(cur.binder_type());
    cur = cur.body();
  }
  return {binders, cur};
}

Term wrap_lams(const std::vector<Type>& binders, Term body) {
  for (auto it = binders.rbegin(); it != binders.rend(); ++it) body = Term::lam(*it, body);
  return body;
}

bool has_loose_bound(const Term& t, unsigned depth) {
  switch (t.kind()) {
    case TermKind::Bound: return t.index() >= depth;
    case TermKind::App: return has_loose_bound(t.fun(), depth) || has_loose_bound(t.arg(), depth);
    case TermKind::Lam: return has_loose_bound(t.body(), depth + 1);
    default: return false;
  }
}

Term shift(const Term& t, int delta, unsigned cutoff) {
  switch (t.kind()) {
    case TermKind::Bound:
      if (t.index() >= cutoff) return Term::bound(static_cast<unsigned>(static_cast<int>(t.index()) + delta));
      return t;
    case TermKind::App: {
      Term f = shift(t.fun(), delta, cutoff);
      Term a = shift(t.arg(), delta, cutoff);
      if (f.same_node(t.fun()) && a.same_node(t.arg())) return t;
      return Term::app(f, a);
    }
    case TermKind::Lam: {
      Term b = shift(t.body(), delta, cutoff + 1);
      if (b.same_node(t.body())) return t;
      return Term::lam(t.binder_type(), b);
    }
    default: return t;
  }
}

namespace {

Term subst_at(const Term& t, const Term& value, unsigned depth) {
  switch (t.kind()) {
    case TermKind::Bound:
      if (t.index() == depth) return shift(value, static_cast<int>(depth));
      if (t.index() > depth) return Term::bound(t.index() - 1);
      return t;
    case TermKind::App: {
      Term f = subst_at(t.fun(), value, depth);
      Term a = subst_at(t.arg(), value, depth);
      if (f.same_node(t.fun()) && a.same_node(t.arg())) return t;
      return Term::app(f, a);
    }
    case TermKind::Lam: {
      Term b = subst_at(t.body(), value, depth + 1);
      if (b.same_node(t.body())) return t;
      return Term::lam(t.binder_type(), b);
    }
    default: return t;
  }
}

}  // namespace

Term instantiate(const Term& body, const Term& value) { return subst_at(body, value, 0); }

Term beta_normalize(const Term& t) {
  switch (t.kind()) {
    case TermKind::App: {
      Term f = beta_normalize(t.fun());
      Term a = beta_normalize(t.arg());
      if (f.is(TermKind::Lam)) return beta_normalize(instantiate(f.body(), a));
      if (f.same_node(t.fun()) && a.same_node(t.arg())) return t;
      return Term::app(f, a);
    }
    case TermKind::Lam: {
      Term b = beta_normalize(t.body());
      if (b.same_node(t.body())) return t;
      return Term::lam(t.binder_type(), b);
    }
    default: return t;
  }
}

bool term_eq(const Term& a, const Term& b) {
  if (a.same_node(b)) return true;
  bool la = a.is(TermKind::Lam), lb = b.is(TermKind::Lam);
  if (la && lb) return term_eq(a.body(), b.body());
  if (la) return term_eq(a.body(), Term::app(shift(b, 1), Term::bound(0)));
  if (lb) return term_eq(Term::app(shift(a, 1), Term::bound(0)), b.body());
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TermKind::Bound: return a.index() == b.index();
    case TermKind::App: return term_eq(a.fun(), b.fun()) && term_eq(a.arg(), b.arg());
    default: return a.name() == b.name();
  }
}

namespace {

bool uses_bound(const Term& t, unsigned i) {
  switch (t.kind()) {
    case TermKind::Bound: return t.index() == i;
    case TermKind::App: return uses_bound(t.fun(), i) || uses_bound(t.arg(), i);
    case TermKind::Lam: return uses_bound(t.body(), i + 1);
    default: return false;
  }
}

}  // namespace

Term eta_contract(const Term& t) {
  switch (t.kind()) {
    case TermKind::App: {
      Term f = eta_contract(t.fun());
      Term a = eta_contract(t.arg());
      if (f.same_node(t.fun()) && a.same_node(t.arg())) return t;
      return Term::app(f, a);
    }
    case TermKind::Lam: {
      Term b = eta_contract(t.body());
      if (b.is(TermKind::App) && b.arg().is(TermKind::Bound) && b.arg().index() == 0 &&
          !uses_bound(b.fun(), 0)) {
        return shift(b.fun(), -1, 0);
      }
      if (b.same_node(t.body())) return t;
      return Term::lam(t.binder_type(), b);
    }
    default: return t;
  }
}

unsigned term_size(const Term& t) {
  switch (t.kind()) {
    case TermKind::App: return term_size(t.fun()) + term_size(t.arg());
    case TermKind::Lam: return 1 + term_size(t.body());
    default: return 1;
  }
}

unsigned term_depth(const Term& t) {
  if (t.is(TermKind::Lam)) return term_depth(t.body());
  Spine s = spine(t);
  unsigned d = 0;
  for (const auto& a : s.args) d = std::max(d, term_depth(a));
  return d + 1;
}

Type type_of(const Signature& sig, const TypeMap& vars, const Term& t) {
  std::vector<Type> ctx;
  std::function<Type(const Term&)> go = [&](const Term& u) -> Type {
    switch (u.kind()) {
      case TermKind::Const: {
        if (auto ty = sig.constant(u.name())) return *ty;
        throw Error(ErrorKind::UnknownName, "unknown constant '" + u.name() + "'");
      }
      case TermKind::Eigen: {
        if (auto ty = sig.eigen(u.name())) return *ty;
        auto it = vars.find(u.name());
        if (it != vars.end()) return it->second;
        throw Error(ErrorKind::UnknownName, "unknown eigenvariable '" + u.name() + "'");
      }
      case TermKind::LogicVar: {
        auto it = vars.find(u.name());
        if (it != vars.end()) return it->second;
        throw Error(ErrorKind::UnknownName, "unknown variable '" + u.name() + "'");
      }
      case TermKind::Bound:
        if (u.index() >= ctx.size()) throw Error(ErrorKind::UnknownName, "loose bound variable");
        return ctx[ctx.size() - 1 - u.index()];
      case TermKind::App: {
        Type f = go(u.fun());
        if (!f.is_arrow())
          throw Error(ErrorKind::TypeMismatch, "application of a term of type " + type_to_string(f));
        Type a = go(u.arg());
        if (a != f.domain())
          throw Error(ErrorKind::TypeMismatch, "argument of type " + type_to_string(a) +
                                                   " where " + type_to_string(f.domain()) +
                                                   " was expected");
        return f.codomain();
      }
      case TermKind::Lam: {
        ctx.push_back(u.binder_type());
        Type b = go(u.body());
        ctx.pop_back();
        return Type::arrow(u.binder_type(), b);
      }
    }
    return {};
  };
  return go(t);
}

Term replace_leaves(const Term& t, const std::function<std::optional<Term>(const Term&)>& fn) {
  switch (t.kind()) {
    case TermKind::App: {
      Term f = replace_leaves(t.fun(), fn);
      Term a = replace_leaves(t.arg(), fn);
      if (f.same_node(t.fun()) && a.same_node(t.arg())) return t;
      return Term::app(f, a);
    }
    case TermKind::Lam: {
      Term b = replace_leaves(t.body(), fn);
      if (b.same_node(t.body())) return t;
      return Term::lam(t.binder_type(), b);
    }
    case TermKind::Bound: return t;
    default:
      if (auto r = fn(t)) return *r;
      return t;
  }
}

Term replace_eigen(const Term& t, const std::string& name, const Term& by) {
  return replace_leaves(t, [&](const Term& leaf) -> std::optional<Term> {
    if (leaf.is(TermKind::Eigen) && leaf.name() == name) return by;
    return std::nullopt;
  });
}

Term replace_eigens(const Term& t, const std::map<std::string, Term>& by) {
  if (by.empty()) return t;
  return replace_leaves(t, [&](const Term& leaf) -> std::optional<Term> {
    if (!leaf.is(TermKind::Eigen)) return std::nullopt;
    auto it = by.find(leaf.name());
    if (it == by.end()) return std::nullopt;
    return it->second;
  });
}

namespace {

void collect(const Term& t, TermKind kind, std::set<std::string>& out) {
  switch (t.kind()) {
    case TermKind::App:
      collect(t.fun(), kind, out);
      collect(t.arg(), kind, out);
      return;
    case TermKind::Lam: collect(t.body(), kind, out); return;
    case TermKind::Bound: return;
    default:
      if (t.kind() == kind) out.insert(t.name());
  }
}

bool mentions(const Term& t, TermKind kind, const std::string& name) {
  switch (t.kind()) {
    case TermKind::App: return mentions(t.fun(), kind, name) || mentions(t.arg(), kind, name);
    case TermKind::Lam: return mentions(t.body(), kind, name);
    case TermKind::Bound: return false;
    default: return t.kind() == kind && t.name() == name;
  }
}

}  // namespace

void collect_logic_vars(const Term& t, std::set<std::string>& out) { collect(t, TermKind::LogicVar, out); }
void collect_eigens(const Term& t, std::set<std::string>& out) { collect(t, TermKind::Eigen, out); }
void collect_constants(const Term& t, std::set<std::string>& out) { collect(t, TermKind::Const, out); }
bool mentions_logic_var(const Term& t, const std::string& name) { return mentions(t, TermKind::LogicVar, name); }
bool mentions_eigen(const Term& t, const std::string& name) { return mentions(t, TermKind::Eigen, name); }

// ---- substitutions ----

void Substitution::bind(const std::string& v, const Type& type, const Term& t) {
  bindings[v] = t;
  types[v] = type;
}

Term apply_subst(const Substitution& theta, const Term& t) {
  if (theta.bindings.empty()) return t;
  bool hit = false;
  Term r = replace_leaves(t, [&](const Term& leaf) -> std::optional<Term> {
    if (!leaf.is(TermKind::LogicVar)) return std::nullopt;
    auto it = theta.bindings.find(leaf.name());
    if (it == theta.bindings.end()) return std::nullopt;
    hit = true;
    return it->second;
  });
  return hit ? beta_normalize(r) : t;
}

Substitution compose(const Substitution& rho, const Substitution& theta) {
  Substitution out;
  for (const auto& [v, t] : rho.bindings) out.bindings[v] = apply_subst(theta, t);
  for (const auto& [v, t] : theta.bindings)
    if (!out.bindings.count(v)) out.bindings[v] = t;
  out.types = theta.types;
  for (const auto& [v, ty] : rho.types) out.types[v] = ty;
  return out;
}

Substitution restrict_to(const Substitution& theta, const std::set<std::string>& vars) {
  Substitution out;
  for (const auto& [v, t] : theta.bindings)
    if (vars.count(v)) {
      out.bindings[v] = t;
      auto it = theta.types.find(v);
      if (it != theta.types.end()) out.types[v] = it->second;
    }
  return out;
}

// ---- rigid paths ----

bool rigid_subterm(const Term& t, const Term& s) {
  Spine sp = spine(t);
  if (!sp.head.is(TermKind::Const)) return false;
  for (const auto& a : sp.args)
    if (term_eq(a, s) || rigid_subterm(a, s)) return true;
  return false;
}

bool occurs_rigidly(const Term& t, const Term& s) {
  Spine sp = spine(strip_lams(t).second);
  if (sp.head.is(TermKind::LogicVar)) return false;
  for (const auto& a : sp.args)
    if ((!has_loose_bound(a) && term_eq(a, s)) || occurs_rigidly(a, s)) return true;
  return false;
}

bool flex_head_on_rigid_path(const Term& t, const std::string& x) {
  Spine sp = spine(strip_lams(t).second);
  if (sp.head.is(TermKind::LogicVar)) return false;
  for (const auto& a : sp.args) {
    const Term& h = head_of(strip_lams(a).second);
    if (h.is(TermKind::LogicVar)) {
      if (h.name() == x) return true;
    } else if (flex_head_on_rigid_path(a, x)) {
      return true;
    }
  }
  return false;
}

std::string NameSupply::fresh(std::string_view base) {
  std::string b(base);
  auto us = b.rfind('_');
  if (us != std::string::npos && us + 1 < b.size() && us > 0 &&
      std::all_of(b.begin() + static_cast<long>(us) + 1, b.end(),
                  [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }))
    b.resize(us);
  if (b.empty()) b = "v";
  return b + "_" + std::to_string(next_.fetch_add(1));
}

}  // namespace slim
