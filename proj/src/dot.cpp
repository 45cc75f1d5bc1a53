#include "hyperset/dot.hpp"

#include <cctype>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "hyperset/error.hpp"

namespace hyperset {
namespace {

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

enum class Tok { Ident, String, LBrace, RBrace, LBracket, RBracket, Comma, Semi, Equals, Arrow, End };

struct Token {
  Tok kind;
  std::string text;
  SourceLocation at;
};

class DotLexer {
 public:
  explicit DotLexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_space();
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
      case '[': return single(Tok::LBracket);
      case ']': return single(Tok::RBracket);
      case ',': return single(Tok::Comma);
      case ';': return single(Tok::Semi);
      case '=': return single(Tok::Equals);
      default: break;
    }
    if (c == '-') {
      if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
        advance();
        advance();
        return {Tok::Arrow, "->", at};
      }
      throw Error(Errc::ParseError, "expected '->'", at);
    }
    if (c == '"') {
      advance();
      std::string s;
      for (;;) {
        if (pos_ >= text_.size()) throw Error(Errc::ParseError, "unterminated string", at);
        char d = text_[pos_];
        advance();
        if (d == '"') break;
        if (d == '\\') {
          if (pos_ >= text_.size()) throw Error(Errc::ParseError, "unterminated string", at);
          d = text_[pos_];
          advance();
        }
        s.push_back(d);
      }
      return {Tok::String, std::move(s), at};
    }
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      std::string s;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        s.push_back(text_[pos_]);
        advance();
      }
      return {Tok::Ident, std::move(s), at};
    }
    throw Error(Errc::ParseError, std::string("unexpected character '") + c + "'", at);
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

  void skip_space() {
    for (;;) {
      while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
      if (pos_ + 1 < text_.size() && text_[pos_] == '/' && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
        continue;
      }
      return;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class DotParser {
 public:
  DotParser(std::string_view text, const Limits& limits) : lex_(text), limits_(limits) {
    tok_ = lex_.next();
  }

  DotGraph parse() {
    const Token head = expect(Tok::Ident, "'digraph'");
    if (head.text != "digraph") throw Error(Errc::ParseError, "expected 'digraph'", head.at);
    if (tok_.kind == Tok::Ident || tok_.kind == Tok::String) take();
    expect(Tok::LBrace, "'{'");
    while (tok_.kind != Tok::RBrace) {
      if (tok_.kind == Tok::End) throw Error(Errc::ParseError, "expected '}'", tok_.at);
      statement();
    }
    take();
    if (tok_.kind != Tok::End) throw Error(Errc::ParseError, "trailing input after '}'", tok_.at);

    if (!root_) throw Error(Errc::MissingRoot, "no node has root=true");
    for (const auto& [from, to] : edge_refs_) {
      auto f = ids_.find(from.text);
      if (f == ids_.end()) throw Error(Errc::ParseError, "undeclared node '" + from.text + "'", from.at);
      auto t = ids_.find(to.text);
      if (t == ids_.end()) throw Error(Errc::ParseError, "undeclared node '" + to.text + "'", to.at);
      if (is_atom(kinds_[f->second]))
        throw Error(Errc::EdgeFromAtom, "edge leaves atom node '" + from.text + "'", from.at);
      edges_.emplace_back(f->second, t->second);
    }

    // build_graph keeps relative order, so reachable names can be filtered in place
    DotGraph out{build_graph(kinds_, edges_, *root_, limits_), {}};
    std::vector<bool> seen(kinds_.size(), false);
    std::vector<NodeId> stack{*root_};
    seen[*root_] = true;
    std::vector<std::vector<NodeId>> adj(kinds_.size());
    for (const auto& [f, t] : edges_) adj[f].push_back(t);
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      for (NodeId c : adj[v])
        if (!seen[c]) {
          seen[c] = true;
          stack.push_back(c);
        }
    }
    for (NodeId v = 0; v < kinds_.size(); ++v)
      if (seen[v]) out.names.push_back(names_[v]);
    return out;
  }

 private:
  Token take() {
    Token t = std::move(tok_);
    tok_ = lex_.next();
    return t;
  }

  Token expect(Tok kind, const char* what) {
    if (tok_.kind != kind) throw Error(Errc::ParseError, std::string("expected ") + what, tok_.at);
    return take();
  }

  void statement() {
    const Token id = expect(Tok::Ident, "node identifier");
    if (tok_.kind == Tok::Arrow) {
      take();
      const Token target = expect(Tok::Ident, "node identifier");
      edge_refs_.emplace_back(id, target);
    } else {
      node(id);
    }
    if (tok_.kind == Tok::Semi) take();
  }

  void node(const Token& id) {
    if (ids_.contains(id.text)) throw Error(Errc::ParseError, "node '" + id.text + "' declared twice", id.at);
    std::optional<std::string> shape, label;
    bool is_root = false;
    if (tok_.kind == Tok::LBracket) {
      take();
      while (tok_.kind != Tok::RBracket) {
        const Token key = expect(Tok::Ident, "attribute name");
        expect(Tok::Equals, "'='");
        if (tok_.kind != Tok::Ident && tok_.kind != Tok::String)
          throw Error(Errc::ParseError, "expected attribute value", tok_.at);
        const Token value = take();
        if (key.text == "shape") {
          if (value.text != "circle" && value.text != "box")
            throw Error(Errc::ParseError, "shape must be circle or box", value.at);
          shape = value.text;
        } else if (key.text == "root") {
          if (value.text != "true" && value.text != "false")
            throw Error(Errc::ParseError, "root must be true or false", value.at);
          is_root = value.text == "true";
        } else if (key.text == "label") {
          label = value.text;
        } else {
          throw Error(Errc::ParseError, "unsupported attribute '" + key.text + "'", key.at);
        }
        if (tok_.kind == Tok::Comma || tok_.kind == Tok::Semi) take();
      }
      take();
    }
    if (!shape) throw Error(Errc::ParseError, "node '" + id.text + "' has no shape", id.at);
    const auto nid = static_cast<NodeId>(kinds_.size());
    if (*shape == "box")
      kinds_.emplace_back(AtomLeaf{AtomTable::intern(label ? *label : id.text)});
    else
      kinds_.emplace_back(SetNode{});
    names_.push_back(id.text);
    ids_.emplace(id.text, nid);
    if (is_root) {
      if (root_) throw Error(Errc::AmbiguousRoot, "more than one node has root=true", id.at);
      root_ = nid;
    }
  }

  DotLexer lex_;
  Limits limits_;
  Token tok_;
  std::vector<NodeKind> kinds_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> ids_;
  std::vector<std::pair<Token, Token>> edge_refs_;
  std::vector<Edge> edges_;
  std::optional<NodeId> root_;
};

}  // namespace

std::string to_dot(const ApGraph& g) {
  std::vector<std::string> names(g.node_count());
  std::size_t sets = 0, atoms = 0;
  for (NodeId v = 0; v < g.node_count(); ++v)
    names[v] = is_atom(g.kind(v)) ? "a" + std::to_string(atoms++) : "n" + std::to_string(sets++);

  std::ostringstream out;
  out << "digraph H {\n";
  for (NodeId v = 0; v < g.node_count(); ++v) {
    out << "  " << names[v] << " [";
    if (auto a = atom_of(g.kind(v)))
      out << "shape=box, label=" << quote(a->name());
    else
      out << "shape=circle";
    if (v == g.root()) out << ", root=true";
    out << "];\n";
  }
  for (NodeId v = 0; v < g.node_count(); ++v)
    for (NodeId c : g.children(v)) out << "  " << names[v] << " -> " << names[c] << ";\n";
  out << "}\n";
  return out.str();
}

DotGraph parse_dot(std::string_view text, const Limits& limits) {
  return DotParser(text, limits).parse();
}

}  // namespace hyperset
