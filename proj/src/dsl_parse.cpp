#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <set>

#include "hyperset/dsl.hpp"

namespace hyperset::dsl {
namespace {

constexpr std::size_t kMaxDepth = 2000;

enum class Tok { Name, Nat, LBrace, RBrace, Less, Greater, Comma, Semi, Equals, End };

std::string_view describe(Tok t) {
  switch (t) {
    case Tok::Name: return "name";
    case Tok::Nat: return "number";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Less: return "'<'";
    case Tok::Greater: return "'>'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Equals: return "'='";
    case Tok::End: return "end of input";
  }
  return "token";
}

bool is_keyword(std::string_view s) { return s == "atoms" || s == "let" || s == "in"; }

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceLocation at;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip();
    SourceLocation at{line_, col_};
    if (pos_ >= text_.size()) return {Tok::End, "", at};
    const char c = text_[pos_];
    auto single = [&](Tok t) {
      advance();
      return Token{t, std::string(1, c), at};
    };
    switch (c) {
      case '{': return single(Tok::LBrace);
      case '}': return single(Tok::RBrace);
      case '<': return single(Tok::Less);
      case '>': return single(Tok::Greater);
      case ',': return single(Tok::Comma);
      case ';': return single(Tok::Semi);
      case '=': return single(Tok::Equals);
      default: break;
    }
    const auto uc = static_cast<unsigned char>(c);
    if (std::isdigit(uc)) {
      std::string s;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        s.push_back(text_[pos_]);
        advance();
      }
      return {Tok::Nat, std::move(s), at};
    }
    if (std::isalpha(uc) || c == '_') {
      std::string s;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        s.push_back(text_[pos_]);
        advance();
      }
      return {Tok::Name, std::move(s), at};
    }
    throw Error(Errc::ParseError, "unexpected character '" + std::string(1, c) + "'", at);
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) { tok_ = lex_.next(); }

  std::vector<AtomDecl> declarations() {
    std::vector<AtomDecl> out;
    while (tok_.kind == Tok::Name && tok_.text == "atoms") {
      take();
      for (;;) {
        const Token name = name_token();
        out.push_back({name.text, name.at});
        if (tok_.kind != Tok::Comma) break;
        take();
      }
      expect(Tok::Semi);
    }
    return out;
  }

  std::vector<LetBinding> bindings() {
    std::vector<LetBinding> out;
    do {
      if (tok_.kind == Tok::Name && tok_.text == "atoms")
        throw Error(Errc::ParseError, "atom declarations must precede bindings", tok_.at);
      const Token name = name_token();
      expect(Tok::Equals);
      ExprAst rhs = expr(0);
      expect(Tok::Semi);
      out.push_back({name.text, std::move(rhs), name.at});
    } while (tok_.kind != Tok::End);
    return out;
  }

  ExprAst expr(std::size_t depth) {
    if (depth > kMaxDepth) throw Error(Errc::ParseError, "expression nested too deeply", tok_.at);
    const SourceLocation at = tok_.at;
    switch (tok_.kind) {
      case Tok::LBrace: {
        take();
        BraceExpr brace;
        if (tok_.kind != Tok::RBrace) {
          brace.items.push_back(expr(depth + 1));
          while (tok_.kind == Tok::Comma) {
            take();
            brace.items.push_back(expr(depth + 1));
          }
        }
        expect(Tok::RBrace);
        return {std::move(brace), at};
      }
      case Tok::Less: {
        take();
        auto first = std::make_shared<const ExprAst>(expr(depth + 1));
        expect(Tok::Comma);
        auto second = std::make_shared<const ExprAst>(expr(depth + 1));
        expect(Tok::Greater);
        return {PairExpr{std::move(first), std::move(second)}, at};
      }
      case Tok::Nat: {
        const Token t = take();
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc{}) throw Error(Errc::ParseError, "number too large", t.at);
        return {NatExpr{v}, at};
      }
      case Tok::Name: {
        if (tok_.text == "let") return let_expr(depth);
        const Token t = name_token();
        return {NameExpr{t.text}, at};
      }
      default:
        throw Error(Errc::ParseError,
                    "expected expression, found " + std::string(describe(tok_.kind)), tok_.at);
    }
  }

  void finish() {
    if (tok_.kind != Tok::End)
      throw Error(Errc::ParseError, "expected end of input, found " + std::string(describe(tok_.kind)),
                  tok_.at);
  }

  Tok peek() const { return tok_.kind; }

 private:
  ExprAst let_expr(std::size_t depth) {
    const SourceLocation at = tok_.at;
    take();  // let
    LetExpr let;
    for (;;) {
      const Token name = name_token();
      expect(Tok::Equals);
      ExprAst rhs = expr(depth + 1);
      let.bindings.push_back({name.text, std::move(rhs), name.at});
      if (tok_.kind == Tok::Semi) {
        take();
        continue;
      }
      break;
    }
    if (!(tok_.kind == Tok::Name && tok_.text == "in"))
      throw Error(Errc::ParseError, "expected 'in' or ';', found " + std::string(describe(tok_.kind)),
                  tok_.at);
    take();
    const Token result = name_token();
    let.result = result.text;
    let.result_at = result.at;
    return {std::move(let), at};
  }

  Token take() {
    Token t = std::move(tok_);
    tok_ = lex_.next();
    return t;
  }

  Token expect(Tok kind) {
    if (tok_.kind != kind)
      throw Error(Errc::ParseError,
                  "expected " + std::string(describe(kind)) + ", found " +
                      (tok_.kind == Tok::Name ? "'" + tok_.text + "'" : std::string(describe(tok_.kind))),
                  tok_.at);
    return take();
  }

  Token name_token() {
    if (tok_.kind == Tok::Name && is_keyword(tok_.text))
      throw Error(Errc::ParseError, "expected name, found keyword '" + tok_.text + "'", tok_.at);
    return expect(Tok::Name);
  }

  Lexer lex_;
  Token tok_;
};

// Static checks shared by systems and standalone expressions.
class Resolver {
 public:
  explicit Resolver(const std::vector<AtomDecl>& atoms) {
    for (const auto& a : atoms) {
      if (atoms_.contains(a.name))
        throw Error(Errc::DuplicateBinding, "atom '" + a.name + "' declared twice", a.at);
      atoms_.insert(a.name);
    }
  }

  void open_scope(const std::vector<LetBinding>& bindings) {
    std::set<std::string> scope;
    for (const auto& b : bindings) {
      if (atoms_.contains(b.name))
        throw Error(Errc::NameClash, "'" + b.name + "' is declared as an atom", b.at);
      if (!scope.insert(b.name).second)
        throw Error(Errc::DuplicateBinding, "'" + b.name + "' is bound twice", b.at);
    }
    scopes_.push_back(std::move(scope));
  }
  void close_scope() { scopes_.pop_back(); }

  void check(const ExprAst& e) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, BraceExpr>) {
            for (const auto& item : n.items) check(item);
          } else if constexpr (std::is_same_v<T, PairExpr>) {
            check(*n.first);
            check(*n.second);
          } else if constexpr (std::is_same_v<T, NameExpr>) {
            resolve(n.name, e.at);
          } else if constexpr (std::is_same_v<T, LetExpr>) {
            open_scope(n.bindings);
            for (const auto& b : n.bindings) check(b.expr);
            resolve(n.result, n.result_at);
            close_scope();
          }
        },
        e.node);
  }

 private:
  void resolve(const std::string& name, SourceLocation at) const {
    for (const auto& s : scopes_)
      if (s.contains(name)) return;
    if (atoms_.contains(name)) return;
    throw Error(Errc::UnknownName, "unknown name '" + name + "'", at);
  }

  std::set<std::string> atoms_;
  std::vector<std::set<std::string>> scopes_;
};

// Compiles ASTs into a generalized system. Every binding, top-level or
// let-bound, becomes an indeterminate.
class Compiler {
 public:
  Compiler(const std::vector<AtomDecl>& atoms, const Limits& limits) : limits_(limits) {
    for (const auto& a : atoms) {
      const Atom atom = AtomTable::intern(a.name);
      system_.atoms.insert(atom);
      atom_names_.emplace(a.name, atom);
    }
  }

  // Binds names in a new scope, with the given system-level names.
  void open_scope(const std::vector<LetBinding>& bindings, bool top_level) {
    std::map<std::string, std::string> scope;
    std::vector<Atom> avoid(system_.atoms.begin(), system_.atoms.end());
    for (const auto& b : bindings) {
      const std::string var = top_level ? b.name : fresh(b.name, avoid).name();
      scope.emplace(b.name, var);
      system_.variables.insert(var);
      system_.stand_ins.emplace(var, fresh(b.name, avoid));
    }
    scopes_.push_back(std::move(scope));
  }
  void close_scope() { scopes_.pop_back(); }

  void define(const LetBinding& b) {
    const std::string& var = lookup_var(b.name);
    Element value = compile(b.expr);
    if (const HSet* s = as_set(value)) {
      system_.equations.emplace(var, *s);
      return;
    }
    const Atom a = std::get<Atom>(value);
    auto alias = var_of_stand_in_.find(a);
    if (alias == var_of_stand_in_.end())
      throw Error(Errc::NotASet, "'" + b.name + "' is bound to the atom '" + a.name() + "'", b.at);
    aliases_.emplace(var, std::make_pair(alias->second, b.at));
  }

  Element compile(const ExprAst& e) {
    return std::visit(
        [&](const auto& n) -> Element {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, BraceExpr>) {
            std::vector<Element> members;
            members.reserve(n.items.size());
            for (const auto& item : n.items) members.push_back(compile(item));
            return set_of(members, limits_);
          } else if constexpr (std::is_same_v<T, PairExpr>) {
            return kpair(compile(*n.first), compile(*n.second));
          } else if constexpr (std::is_same_v<T, NatExpr>) {
            return natural(n.value, limits_);
          } else if constexpr (std::is_same_v<T, NameExpr>) {
            return resolve(n.name);
          } else {
            open_scope(n.bindings, false);
            for (const auto& b : n.bindings) define(b);
            Element result = resolve(n.result);
            close_scope();
            return result;
          }
        },
        e.node);
  }

  GenSystem finish() && {
    // x = y shares y's equation; chains are followed, cycles rejected
    for (const auto& [var, target] : aliases_) {
      std::set<std::string> seen{var};
      std::string t = target.first;
      while (!system_.equations.contains(t)) {
        if (!seen.insert(t).second)
          throw Error(Errc::AliasCycle, "'" + var + "' is bound only to itself through aliases",
                      target.second);
        t = aliases_.at(t).first;
      }
      system_.equations.emplace(var, system_.equations.at(t));
    }
    return std::move(system_);
  }

 private:
  const std::string& lookup_var(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
      if (auto f = it->find(name); f != it->end()) return f->second;
    throw Error(Errc::UnknownName, "unknown name '" + name + "'");
  }

  Element resolve(const std::string& name) {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
      if (auto f = it->find(name); f != it->end()) {
        const Atom stand_in = system_.stand_ins.at(f->second);
        var_of_stand_in_.emplace(stand_in, f->second);
        return stand_in;
      }
    if (auto a = atom_names_.find(name); a != atom_names_.end()) return a->second;
    throw Error(Errc::UnknownName, "unknown name '" + name + "'");
  }

  Limits limits_;
  GenSystem system_;
  std::map<std::string, Atom> atom_names_;
  std::map<Atom, std::string> var_of_stand_in_;
  std::vector<std::map<std::string, std::string>> scopes_;
  std::map<std::string, std::pair<std::string, SourceLocation>> aliases_;
};

}  // namespace

SystemAst parse_system(std::string_view text) {
  Parser p(text);
  SystemAst ast;
  ast.atoms = p.declarations();
  if (p.peek() == Tok::End) throw Error(Errc::ParseError, "expected at least one binding", {1, 1});
  ast.bindings = p.bindings();
  p.finish();

  Resolver r(ast.atoms);
  r.open_scope(ast.bindings);
  for (const auto& b : ast.bindings) r.check(b.expr);
  return ast;
}

ExpressionAst parse_expression(std::string_view text) {
  Parser p(text);
  ExpressionAst ast{p.declarations(), {}};
  ast.expr = p.expr(0);
  p.finish();
  Resolver r(ast.atoms);
  r.check(ast.expr);
  return ast;
}

GenSystem to_gen_system(const SystemAst& ast, const Limits& limits) {
  Compiler c(ast.atoms, limits);
  c.open_scope(ast.bindings, true);
  for (const auto& b : ast.bindings) c.define(b);
  GenSystem out = std::move(c).finish();
  validate_generalized(out);
  return out;
}

bool is_flat(const SystemAst& ast) {
  for (const auto& b : ast.bindings) {
    const auto* brace = std::get_if<BraceExpr>(&b.expr.node);
    if (!brace) return false;
    for (const auto& item : brace->items)
      if (!std::holds_alternative<NameExpr>(item.node)) return false;
  }
  return true;
}

HSet evaluate(const ExpressionAst& ast, const Limits& limits) {
  Compiler c(ast.atoms, limits);
  const Element value = c.compile(ast.expr);
  GenSystem system = std::move(c).finish();
  const std::string result = "_result";
  if (const HSet* s = as_set(value)) {
    if (system.variables.empty()) return *s;
    system.variables.insert(result);
    std::vector<Atom> avoid(system.atoms.begin(), system.atoms.end());
    system.stand_ins.emplace(result, fresh(result, avoid));
    system.equations.emplace(result, *s);
    return solve_generalized(system, limits).at(result);
  }
  const Atom a = std::get<Atom>(value);
  for (const auto& [var, stand_in] : system.stand_ins)
    if (stand_in == a) return solve_generalized(system, limits).at(var);
  throw Error(Errc::NotASet, "expression denotes the atom '" + a.name() + "', not a set");
}

}  // namespace hyperset::dsl
