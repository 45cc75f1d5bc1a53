#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hyperset/eqsolver.hpp"
#include "hyperset/error.hpp"
#include "hyperset/hset.hpp"

namespace hyperset::dsl {

// Surface syntax:
//
//   system   ::= decl* binding+
//   decl     ::= "atoms" NAME ("," NAME)* ";"
//   binding  ::= NAME "=" expr ";"
//   expr     ::= "{" (expr ("," expr)*)? "}" | "<" expr "," expr ">" | NAT | NAME
//              | "let" NAME "=" expr (";" NAME "=" expr)* "in" NAME
//
// `#` starts a comment running to end of line. "atoms", "let" and "in" are
// reserved. A standalone expression may be preceded by atom declarations.

struct ExprAst;
struct LetBinding;

struct BraceExpr {
  std::vector<ExprAst> items;
};
struct NameExpr {
  std::string name;
};
struct PairExpr {
  std::shared_ptr<const ExprAst> first;
  std::shared_ptr<const ExprAst> second;
};
struct NatExpr {
  std::uint64_t value = 0;
};
struct LetExpr {
  std::vector<LetBinding> bindings;
  std::string result;
  SourceLocation result_at;
};

struct ExprAst {
  std::variant<BraceExpr, NameExpr, PairExpr, NatExpr, LetExpr> node;
  SourceLocation at;
};

struct LetBinding {
  std::string name;
  ExprAst expr;
  SourceLocation at;
};

struct AtomDecl {
  std::string name;
  SourceLocation at;
};

struct SystemAst {
  std::vector<AtomDecl> atoms;
  std::vector<LetBinding> bindings;
};

struct ExpressionAst {
  std::vector<AtomDecl> atoms;
  ExprAst expr;
};

// Errors: ParseError (with position), DuplicateBinding, UnknownName,
// NameClash.
SystemAst parse_system(std::string_view text);
ExpressionAst parse_expression(std::string_view text);

// Brace nests become right-hand sides over the indeterminates' stand-ins;
// pairs and numerals are desugared; let-bound names become extra
// indeterminates with fresh names. A binding whose right side is another
// indeterminate shares that indeterminate's equation.
GenSystem to_gen_system(const SystemAst& ast, const Limits& limits = {});

// Whether every binding is a brace of plain names, i.e. a flat equation.
bool is_flat(const SystemAst& ast);

HSet evaluate(const ExpressionAst& ast, const Limits& limits = {});
inline HSet evaluate(std::string_view text, const Limits& limits = {}) {
  return evaluate(parse_expression(text), limits);
}

// Expression text for a. Well-founded parts print as nested braces in
// canonical member order; cyclic values print as a let system over v0, v1,
// ..., with v0 the value itself. Atoms print by name.
std::string print_expr(const HSet& a);

// print_expr preceded by an atoms declaration when a has atoms, so that
// evaluate(print_canonical(a)) == a.
std::string print_canonical(const HSet& a);

std::string print_element(const Element& e);

}  // namespace hyperset::dsl
