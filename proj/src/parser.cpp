#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "slim/syntax.hpp"

namespace slim {

const NamedGoal* SourceFile::goal(const std::string& name) const {
  for (const auto& g : goals)
    if (g.name == name) return &g;
  return nullptr;
}

namespace {

enum class Tok { Ident, String, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  int line = 0;
  int col = 0;
};

std::string where(int line, int col) {
  return std::to_string(line) + ":" + std::to_string(col) + ": ";
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> tokenize(std::string_view src, std::vector<Pragma>* pragmas) {
  static const char* const kSymbols[] = {"::", ":-", ":=", "=>", "->", ":", "=", ",",
                                         ".",  "(",  ")",  "\\", ";"};
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '%') {
      std::size_t end = src.find('\n', i);
      if (end == std::string_view::npos) end = src.size();
      std::string_view body = src.substr(i + 1, end - i - 1);
      auto first = body.find_first_not_of(" \t");
      if (pragmas && first != std::string_view::npos && body[first] == '@')
        pragmas->push_back({std::string(body.substr(first + 1)), line});
      advance(end - i);
      continue;
    }
    Token t{Tok::Ident, "", line, col};
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
      out.push_back(t);
      continue;
    }
    if (c == '"') {
      std::size_t end = src.find('"', i + 1);
      if (end == std::string_view::npos)
        throw Error(ErrorKind::SyntaxError, where(line, col) + "unterminated string");
      t.kind = Tok::String;
      t.text = std::string(src.substr(i + 1, end - i - 1));
      advance(end + 1 - i);
      out.push_back(t);
      continue;
    }
    bool matched = false;
    for (const char* sym : kSymbols) {
      std::string_view s(sym);
      if (src.substr(i, s.size()) == s) {
        t.kind = Tok::Sym;
        t.text = std::string(s);
        advance(s.size());
        out.push_back(t);
        matched = true;
        break;
      }
    }
    if (!matched)
      throw Error(ErrorKind::SyntaxError, where(line, col) + "unexpected character '" + std::string(1, c) + "'");
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

struct Expr;
using ExprP = std::shared_ptr<Expr>;

struct Expr {
  enum Kind { Ident, App, Abs, Infix } kind;
  std::string text;
  std::vector<ExprP> kids;
  std::optional<Type> annot;
  int line = 0, col = 0;
};

const std::set<std::string>& reserved_names() {
  static const std::set<std::string> names = {"pi", "sigma", "kind", "type", "goal",
                                              "accumulate", "o", "oo", "=", ",", "=>"};
  return names;
}

bool is_var_name(const std::string& s) {
  return !s.empty() && (std::isupper(static_cast<unsigned char>(s[0])) || s[0] == '_');
}

class Parser {
 public:
  Parser(std::vector<Token> toks, const Signature* sig) : toks_(std::move(toks)), sig_(sig) {}

  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool at_sym(const char* s, std::size_t k = 0) const {
    return peek(k).kind == Tok::Sym && peek(k).text == s;
  }
  bool at_ident(const char* s) const { return peek().kind == Tok::Ident && peek().text == s; }
  bool at_end() const { return peek().kind == Tok::End; }
  Token next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const Token& at, const std::string& msg) const {
    throw Error(ErrorKind::SyntaxError, where(at.line, at.col) + msg);
  }

  void expect_sym(const char* s) {
    if (!at_sym(s)) fail(peek(), std::string("expected '") + s + "'" + found());
    next();
  }

  std::string expect_ident() {
    if (peek().kind != Tok::Ident) fail(peek(), "expected an identifier" + found());
    return next().text;
  }

  std::string found() const {
    if (at_end()) return " but reached end of input";
    return " but found '" + peek().text + "'";
  }

  void set_signature(const Signature* sig) { sig_ = sig; }

  Type parse_type() {
    Type dom = parse_atomic_type();
    if (at_sym("->")) {
      next();
      return Type::arrow(dom, parse_type());
    }
    return dom;
  }

  Type parse_atomic_type() {
    if (at_sym("(")) {
      next();
      Type t = parse_type();
      expect_sym(")");
      return t;
    }
    Token t = peek();
    std::string name = expect_ident();
    if (name == "o" || name == "oo") return Type::prop();
    if (!sig_ || !sig_->has_kind(name))
      throw Error(ErrorKind::UndeclaredConstant, where(t.line, t.col) + "undeclared type '" + name + "'");
    return Type::primitive(name);
  }

  bool at_abs_start() const {
    return peek().kind == Tok::Ident && (at_sym("\\", 1) || at_sym(":", 1));
  }

  bool at_atom_start() const {
    if (peek().kind == Tok::Ident) return !reserved_keyword(peek().text);
    return at_sym("(");
  }

  static bool reserved_keyword(const std::string& s) {
    return s == "kind" || s == "type" || s == "goal" || s == "accumulate";
  }

  ExprP make(Expr::Kind k, const Token& at, std::string text = "") {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->text = std::move(text);
    e->line = at.line;
    e->col = at.col;
    return e;
  }

  ExprP infix(const Token& at, const std::string& op, ExprP l, ExprP r) {
    ExprP e = make(Expr::Infix, at, op);
    e->kids = {std::move(l), std::move(r)};
    return e;
  }

  // ',' level
  ExprP parse_expr() {
    ExprP left = parse_imp();
    while (at_sym(",")) {
      Token op = next();
      left = infix(op, ",", left, parse_imp());
    }
    return left;
  }

  // '=>' level, right associative
  ExprP parse_imp() {
    ExprP left = parse_eq();
    if (at_sym("=>")) {
      Token op = next();
      return infix(op, "=>", left, parse_imp());
    }
    return left;
  }

  ExprP parse_eq() {
    ExprP left = parse_cons();
    if (at_sym("=")) {
      Token op = next();
      return infix(op, "=", left, parse_cons());
    }
    return left;
  }

  ExprP parse_cons() {
    ExprP left = parse_app();
    if (at_sym("::")) {
      Token op = next();
      return infix(op, "::", left, parse_cons());
    }
    return left;
  }

  ExprP parse_app() {
    if (at_abs_start()) return parse_abs();
    Token start = peek();
    ExprP head = parse_atom();
    std::vector<ExprP> args;
    while (true) {
      if (at_abs_start()) {
        args.push_back(parse_abs());
        break;
      }
      if (!at_atom_start()) break;
      args.push_back(parse_atom());
    }
    if (args.empty()) return head;
    ExprP e = make(Expr::App, start);
    e->kids.push_back(head);
    for (auto& a : args) e->kids.push_back(a);
    return e;
  }

  ExprP parse_abs() {
    Token t = peek();
    std::string name = expect_ident();
    ExprP e = make(Expr::Abs, t, name);
    if (at_sym(":")) {
      next();
      e->annot = parse_type();
    }
    expect_sym("\\");
    e->kids.push_back(parse_expr());
    return e;
  }

  ExprP parse_atom() {
    Token t = peek();
    if (at_sym("(")) {
      next();
      if (at_sym("::") && at_sym(")", 1)) {
        next();
        next();
        return make(Expr::Ident, t, "::");
      }
      ExprP e = parse_expr();
      expect_sym(")");
      return e;
    }
    if (peek().kind == Tok::Ident && !reserved_keyword(peek().text)) {
      next();
      return make(Expr::Ident, t, t.text);
    }
    fail(t, "expected a term" + found());
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Signature* sig_;
};

// Type inference and construction of terms and goals from expressions.
class Elaborator {
 public:
  enum class FreeVars { Reject, Collect };

  Elaborator(const Signature& sig, FreeVars free, TypeMap eigens = {})
      : sig_(sig), free_mode_(free), extra_eigens_(std::move(eigens)) {}

  Term term(const Expr& e, Type& ty) { return elab_term(e, ty); }

  Goal goal(const Expr& e) { return elab_goal(e); }

  Term atom(const Expr& e) {
    Type ty;
    Term t = elab_term(e, ty);
    unify(ty, Type::prop(), e);
    check_atom_head(t, e);
    return t;
  }

  void unify(const Type& a, const Type& b, const Expr& at) {
    if (!unify_types(a, b))
      throw Error(ErrorKind::TypeMismatch, where(at.line, at.col) + "type mismatch: " +
                                               type_to_string(resolve(a)) + " vs " +
                                               type_to_string(resolve(b)));
  }

  Type resolve(const Type& t) const {
    Type s = shallow(t);
    if (s.is_arrow()) return Type::arrow(resolve(s.domain()), resolve(s.codomain()));
    return s;
  }

  // Final types: unresolved metavariables default to the first declared kind.
  Type finalize(const Type& t) const {
    Type s = shallow(t);
    if (s.is_arrow()) return Type::arrow(finalize(s.domain()), finalize(s.codomain()));
    if (is_meta(s)) {
      for (const auto& k : sig_.kinds())
        if (k != kPropType) return Type::primitive(k);
      throw Error(ErrorKind::TypeMismatch, "cannot infer a type: no kinds declared");
    }
    return s;
  }

  Term fix(const Term& t) const {
    switch (t.kind()) {
      case TermKind::App: return Term::app(fix(t.fun()), fix(t.arg()));
      case TermKind::Lam: return Term::lam(finalize(t.binder_type()), fix(t.body()));
      default: return t;
    }
  }

  Goal fix(const Goal& g) const {
    switch (g.kind()) {
      case GoalKind::True:
      case GoalKind::False: return g;
      case GoalKind::Atom: return Goal::atom(fix(g.atom_term()));
      case GoalKind::And: return Goal::conj(fix(g.left()), fix(g.right()));
      case GoalKind::Exists: return Goal::exists(g.var(), finalize(g.type()), fix(g.body()));
      case GoalKind::Forall: return Goal::forall(g.var(), finalize(g.type()), fix(g.body()));
      case GoalKind::Eq: return Goal::eq(fix(g.lhs()), fix(g.rhs()), finalize(g.type()));
      case GoalKind::Guard:
        return Goal::guard(fix(g.lhs()), fix(g.rhs()), finalize(g.type()), fix(g.body()));
    }
    return g;
  }

  const std::vector<std::string>& free_order() const { return free_order_; }
  const std::map<std::string, Type>& free_types() const { return free_; }

  void reserve_name(const std::string& n) { used_.insert(n); }

 private:
  struct Scope {
    std::string source;
    enum Kind { Lambda, Pi, Sigma } kind;
    std::string internal;
    Type type;
  };

  static bool is_meta(const Type& t) { return t.is_primitive() && t.name()[0] == '?'; }

  Type fresh_meta() { return Type::primitive("?" + std::to_string(next_meta_++)); }

  Type shallow(const Type& t) const {
    Type cur = t;
    while (is_meta(cur)) {
      auto it = metas_.find(cur.name());
      if (it == metas_.end()) break;
      cur = it->second;
    }
    return cur;
  }

  bool occurs(const std::string& meta, const Type& t) const {
    Type s = shallow(t);
    if (s.is_arrow()) return occurs(meta, s.domain()) || occurs(meta, s.codomain());
    return is_meta(s) && s.name() == meta;
  }

  bool unify_types(const Type& a, const Type& b) {
    Type x = shallow(a), y = shallow(b);
    if (is_meta(x) && is_meta(y) && x.name() == y.name()) return true;
    if (is_meta(x)) {
      if (occurs(x.name(), y)) return false;
      metas_[x.name()] = y;
      return true;
    }
    if (is_meta(y)) return unify_types(y, x);
    if (x.is_primitive() != y.is_primitive()) return false;
    if (x.is_primitive()) return x.name() == y.name();
    return unify_types(x.domain(), y.domain()) && unify_types(x.codomain(), y.codomain());
  }

  [[noreturn]] void fail(ErrorKind k, const Expr& at, const std::string& msg) const {
    throw Error(k, where(at.line, at.col) + msg);
  }

  const Scope* lookup(const std::string& name, unsigned& lambda_depth) const {
    lambda_depth = 0;
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      if (it->source == name) return &*it;
      if (it->kind == Scope::Lambda) ++lambda_depth;
    }
    return nullptr;
  }

  Term elab_term(const Expr& e, Type& ty) {
    switch (e.kind) {
      case Expr::Ident: return elab_ident(e, ty);
      case Expr::App: {
        const Expr& head = *e.kids[0];
        if (head.kind == Expr::Ident && (head.text == "pi" || head.text == "sigma")) {
          unsigned d;
          if (!lookup(head.text, d)) fail(ErrorKind::SyntaxError, e, "quantifier in term position");
        }
        Type fty;
        Term t = elab_term(head, fty);
        for (std::size_t i = 1; i < e.kids.size(); ++i) {
          Type aty;
          Term a = elab_term(*e.kids[i], aty);
          Type res = fresh_meta();
          unify(fty, Type::arrow(aty, res), *e.kids[i]);
          fty = res;
          t = Term::app(t, a);
        }
        ty = fty;
        return t;
      }
      case Expr::Abs: {
        Type bty = e.annot ? *e.annot : fresh_meta();
        scopes_.push_back({e.text, Scope::Lambda, e.text, bty});
        Type body_ty;
        Term body = elab_term(*e.kids[0], body_ty);
        scopes_.pop_back();
        ty = Type::arrow(bty, body_ty);
        return Term::lam(bty, body);
      }
      case Expr::Infix: {
        if (e.text != "::") fail(ErrorKind::SyntaxError, e, "formula '" + e.text + "' where a term was expected");
        auto cons = sig_.constant("::");
        if (!cons) fail(ErrorKind::UndeclaredConstant, e, "undeclared constant '::'");
        Type lt, rt;
        Term l = elab_term(*e.kids[0], lt);
        Term r = elab_term(*e.kids[1], rt);
        Type res = fresh_meta();
        unify(*cons, Type::arrow(lt, Type::arrow(rt, res)), e);
        ty = res;
        return Term::apply(Term::constant("::"), {l, r});
      }
    }
    fail(ErrorKind::SyntaxError, e, "unexpected expression");
  }

  Term elab_ident(const Expr& e, Type& ty) {
    const std::string& name = e.text;
    unsigned depth;
    if (const Scope* s = lookup(name, depth)) {
      ty = s->type;
      switch (s->kind) {
        case Scope::Lambda: return Term::bound(depth);
        case Scope::Pi: return Term::eigen(s->internal);
        case Scope::Sigma: return Term::logic_var(s->internal);
      }
    }
    if (name == "pi" || name == "sigma") fail(ErrorKind::SyntaxError, e, "quantifier in term position");
    if (is_var_name(name)) {
      if (free_mode_ == FreeVars::Reject)
        fail(ErrorKind::OpenGoal, e, "free variable '" + name + "' in a goal");
      std::string key = name;
      if (name == "_") key = "_" + std::to_string(++anonymous_);
      auto it = free_.find(key);
      if (it == free_.end()) {
        it = free_.emplace(key, fresh_meta()).first;
        free_order_.push_back(key);
      }
      ty = it->second;
      return Term::logic_var(key);
    }
    if (auto c = sig_.constant(name)) {
      ty = *c;
      return Term::constant(name);
    }
    if (auto v = sig_.eigen(name)) {
      ty = *v;
      return Term::eigen(name);
    }
    auto it = extra_eigens_.find(name);
    if (it != extra_eigens_.end()) {
      ty = it->second;
      return Term::eigen(name);
    }
    fail(ErrorKind::UndeclaredConstant, e, "undeclared constant '" + name + "'");
  }

  std::string unique_name(const std::string& source) {
    auto taken = [&](const std::string& n) {
      return used_.count(n) || sig_.constant(n) || sig_.eigen(n) || extra_eigens_.count(n) ||
             free_.count(n);
    };
    std::string n = source;
    for (int k = 1; taken(n); ++k) n = source + std::to_string(k);
    used_.insert(n);
    return n;
  }

  bool prop_constant(const std::string& name) const {
    auto c = sig_.constant(name);
    return c && c->is_primitive() && c->name() == kPropType;
  }

  void check_atom_head(const Term& t, const Expr& e) const {
    const Term& h = head_of(t);
    if (!h.is(TermKind::Const) || !sig_.is_predicate(h.name()))
      fail(ErrorKind::SyntaxError, e, "atom must be headed by a predicate constant");
  }

  Goal elab_goal(const Expr& e) {
    if (e.kind == Expr::Infix) {
      if (e.text == ",") return Goal::conj(elab_goal(*e.kids[0]), elab_goal(*e.kids[1]));
      if (e.text == "=>") {
        const Expr& g = *e.kids[0];
        if (g.kind != Expr::Infix || g.text != "=")
          fail(ErrorKind::SyntaxError, g, "only an equality may appear to the left of '=>'");
        Type ty;
        auto [l, r] = elab_equation(g, ty);
        return Goal::guard(l, r, ty, elab_goal(*e.kids[1]));
      }
      if (e.text == "=") {
        Type ty;
        auto [l, r] = elab_equation(e, ty);
        return Goal::eq(l, r, ty);
      }
    }
    if (e.kind == Expr::App && e.kids.size() == 2 && e.kids[0]->kind == Expr::Ident &&
        (e.kids[0]->text == "pi" || e.kids[0]->text == "sigma")) {
      unsigned d;
      if (!lookup(e.kids[0]->text, d)) {
        const Expr& abs = *e.kids[1];
        if (abs.kind != Expr::Abs)
          fail(ErrorKind::SyntaxError, abs, "expected 'x\\ goal' after " + e.kids[0]->text);
        bool pi = e.kids[0]->text == "pi";
        Type bty = abs.annot ? *abs.annot : fresh_meta();
        std::string internal = unique_name(abs.text);
        scopes_.push_back({abs.text, pi ? Scope::Pi : Scope::Sigma, internal, bty});
        Goal body = elab_goal(*abs.kids[0]);
        scopes_.pop_back();
        return pi ? Goal::forall(internal, bty, body) : Goal::exists(internal, bty, body);
      }
    }
    if (e.kind == Expr::Ident) {
      unsigned d;
      bool shadowed = lookup(e.text, d) != nullptr;
      if (!shadowed && (e.text == "tt" || e.text == "true") && !prop_constant(e.text)) return Goal::truth();
      if (!shadowed && (e.text == "ff" || e.text == "false") && !prop_constant(e.text)) return Goal::falsity();
    }
    if (e.kind == Expr::Abs) fail(ErrorKind::SyntaxError, e, "abstraction where a goal was expected");
    return Goal::atom(atom(e));
  }

  std::pair<Term, Term> elab_equation(const Expr& e, Type& ty) {
    Type lt, rt;
    Term l = elab_term(*e.kids[0], lt);
    Term r = elab_term(*e.kids[1], rt);
    unify(lt, rt, e);
    ty = lt;
    return {l, r};
  }

  const Signature& sig_;
  FreeVars free_mode_;
  TypeMap extra_eigens_;
  std::map<std::string, Type> metas_;
  int next_meta_ = 0;
  std::vector<Scope> scopes_;
  std::map<std::string, Type> free_;
  std::vector<std::string> free_order_;
  std::set<std::string> used_;
  int anonymous_ = 0;
};

void check_declared_name(const Token& at, const std::string& name) {
  if (reserved_names().count(name))
    throw Error(ErrorKind::ReservedName, where(at.line, at.col) + "'" + name + "' is reserved");
}

class FileParser {
 public:
  FileParser(std::string_view text, std::optional<std::filesystem::path> base)
      : base_(std::move(base)) {
    parser_ = std::make_unique<Parser>(tokenize(text, &out_.pragmas), &out_.sig);
  }

  SourceFile run() {
    Parser& p = *parser_;
    while (!p.at_end()) {
      if (p.at_ident("kind")) kind_decl();
      else if (p.at_ident("type")) type_decl();
      else if (p.at_ident("goal")) goal_decl();
      else if (p.at_ident("accumulate")) accumulate();
      else clause();
    }
    return std::move(out_);
  }

 private:
  std::vector<std::pair<Token, std::string>> names() {
    Parser& p = *parser_;
    std::vector<std::pair<Token, std::string>> out;
    do {
      Token t = p.peek();
      if (p.at_sym("::")) {
        p.next();
        out.emplace_back(t, "::");
      } else {
        out.emplace_back(t, p.expect_ident());
      }
      if (!p.at_sym(",")) break;
      p.next();
    } while (true);
    return out;
  }

  void kind_decl() {
    Parser& p = *parser_;
    p.next();
    auto ns = names();
    if (!p.at_ident("type")) p.fail(p.peek(), "expected 'type'" + p.found());
    p.next();
    p.expect_sym(".");
    KindDecl d;
    for (auto& [tok, n] : ns) {
      check_declared_name(tok, n);
      out_.sig.declare_kind(n);
      d.names.push_back(n);
    }
    out_.declarations.emplace_back(std::move(d));
  }

  void type_decl() {
    Parser& p = *parser_;
    p.next();
    auto ns = names();
    Type ty = p.parse_type();
    p.expect_sym(".");
    TypeDecl d{{}, ty};
    for (auto& [tok, n] : ns) {
      check_declared_name(tok, n);
      if (is_var_name(n))
        throw Error(ErrorKind::ReservedName,
                    where(tok.line, tok.col) + "constant '" + n + "' would read as a variable");
      out_.sig.declare_constant(n, ty);
      d.names.push_back(n);
    }
    out_.declarations.emplace_back(std::move(d));
  }

  void goal_decl() {
    Parser& p = *parser_;
    Token start = p.next();
    std::string name = p.expect_ident();
    p.expect_sym(":");
    ExprP e = p.parse_expr();
    p.expect_sym(".");
    Elaborator el(out_.sig, Elaborator::FreeVars::Reject);
    Goal g = el.fix(el.goal(*e));
    out_.goals.push_back({name, g, start.line});
  }

  void accumulate() {
    Parser& p = *parser_;
    Token start = p.next();
    Token t = p.next();
    p.expect_sym(".");
    if (!base_)
      throw Error(ErrorKind::InvalidInput, where(start.line, start.col) + "accumulate needs a file context");
    std::filesystem::path path;
    if (t.kind == Tok::String) path = *base_ / t.text;
    else if (t.kind == Tok::Ident) path = *base_ / (t.text + ".slim");
    else p.fail(t, "expected a module name");
    SourceFile inc = load_file(path);
    for (const auto& k : inc.sig.kinds()) out_.sig.declare_kind(k);
    for (const auto& [n, ty] : inc.sig.constants()) out_.sig.declare_constant(n, ty);
    for (const auto& [n, ty] : inc.sig.eigenvariables()) out_.sig.declare_eigen(n, ty);
    for (auto& d : inc.declarations) out_.declarations.push_back(std::move(d));
    for (auto& c : inc.clauses) out_.clauses.push_back(std::move(c));
  }

  void clause() {
    Parser& p = *parser_;
    Token start = p.peek();
    ExprP head = p.parse_expr();
    ExprP body;
    if (p.at_sym(":-")) {
      p.next();
      body = p.parse_expr();
    }
    p.expect_sym(".");
    Elaborator el(out_.sig, Elaborator::FreeVars::Collect);
    Term h = el.atom(*head);
    Goal b = body ? el.goal(*body) : Goal::truth();
    DefiniteClause d;
    d.head = el.fix(h);
    d.body = el.fix(b);
    for (const auto& v : el.free_order()) d.universals.push_back({v, el.finalize(el.free_types().at(v))});
    for (const auto& u : d.universals)
      if (contains_prop(u.type))
        throw Error(ErrorKind::TypeMismatch,
                    where(start.line, start.col) + "clause variable " + u.name + " ranges over formulas");
    out_.clauses.push_back(d);
    out_.declarations.emplace_back(ClauseDecl{d, start.line});
  }

  std::optional<std::filesystem::path> base_;
  SourceFile out_;
  std::unique_ptr<Parser> parser_;
};

}  // namespace

SourceFile parse_file(std::string_view text, const std::optional<std::filesystem::path>& base_dir) {
  return FileParser(text, base_dir).run();
}

SourceFile load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_file(ss.str(), path.parent_path());
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ":" + e.what());
  }
}

Goal parse_goal(std::string_view text, const Signature& sig) {
  Parser p(tokenize(text, nullptr), &sig);
  ExprP e = p.parse_expr();
  if (p.at_sym(".")) p.next();
  if (!p.at_end()) p.fail(p.peek(), "unexpected '" + p.peek().text + "' after goal");
  Elaborator el(sig, Elaborator::FreeVars::Reject);
  return el.fix(el.goal(*e));
}

ParsedTerm parse_term(std::string_view text, const Signature& sig, const TypeMap& vars,
                      const std::optional<Type>& expected) {
  Parser p(tokenize(text, nullptr), &sig);
  ExprP e = p.parse_cons();
  if (!p.at_end()) p.fail(p.peek(), "unexpected '" + p.peek().text + "' after term");
  Elaborator el(sig, Elaborator::FreeVars::Collect, vars);
  Type ty;
  Term t = el.term(*e, ty);
  if (expected) el.unify(ty, *expected, *e);
  ParsedTerm out;
  out.term = beta_normalize(el.fix(t));
  out.type = el.finalize(ty);
  for (const auto& v : el.free_order()) out.free_vars[v] = el.finalize(el.free_types().at(v));
  return out;
}

namespace {

void goal_binders(const Goal& g, TypeMap& exists, TypeMap& foralls) {
  switch (g.kind()) {
    case GoalKind::And:
      goal_binders(g.left(), exists, foralls);
      goal_binders(g.right(), exists, foralls);
      return;
    case GoalKind::Exists:
      exists[g.var()] = g.type();
      goal_binders(g.body(), exists, foralls);
      return;
    case GoalKind::Forall:
      foralls[g.var()] = g.type();
      goal_binders(g.body(), exists, foralls);
      return;
    case GoalKind::Guard: goal_binders(g.body(), exists, foralls); return;
    default: return;
  }
}

}  // namespace

Substitution parse_substitution(std::string_view text, const Signature& sig, const Goal& goal) {
  TypeMap exists, foralls;
  goal_binders(goal, exists, foralls);
  Substitution out;
  std::string trimmed(text);
  trimmed.erase(0, trimmed.find_first_not_of(" \t\n"));
  trimmed.erase(trimmed.find_last_not_of(" \t\n") + 1);
  if (trimmed.empty() || trimmed == "{}") return out;
  Parser p(tokenize(trimmed, nullptr), &sig);
  Elaborator el(sig, Elaborator::FreeVars::Collect, foralls);
  std::vector<std::pair<std::string, Term>> raw;
  while (!p.at_end()) {
    Token at = p.peek();
    std::string name = p.expect_ident();
    auto it = exists.find(name);
    if (it == exists.end())
      throw Error(ErrorKind::ScopeViolation,
                  where(at.line, at.col) + "'" + name + "' is not an existential variable of the goal");
    p.expect_sym(":=");
    ExprP e = p.parse_cons();
    Type ty;
    Term t = el.term(*e, ty);
    el.unify(ty, it->second, *e);
    raw.emplace_back(name, t);
    if (p.at_sym(";")) p.next();
    else if (!p.at_end()) p.fail(p.peek(), "expected ';' between bindings" + p.found());
  }
  for (auto& [name, t] : raw) out.bind(name, exists.at(name), beta_normalize(el.fix(t)));
  for (const auto& v : el.free_order()) out.types[v] = el.finalize(el.free_types().at(v));
  return out;
}

}  // namespace slim
