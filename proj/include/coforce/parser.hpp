#ifndef COFORCE_PARSER_HPP
#define COFORCE_PARSER_HPP

#include "coforce/conditions.hpp"

namespace coforce {

struct Diagnostic {
  int line = 0;
  int col = 0;
  std::string message;
  std::vector<std::string> expected;  // expected token classes, when known

  std::string render() const;
};

// A parsed theory file: signature and axiom declarations plus named goals.
struct TheoryFile {
  Theory theory;
  std::vector<std::pair<std::string, Formula>> goals;

  const Formula* find_goal(const std::string& name) const;
};

struct ParseResult {
  std::optional<TheoryFile> file;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return file.has_value(); }
};

// Line-oriented grammar:
//   pred NAME/ARITY
//   fun NAME/ARITY
//   equality on|off
//   axiom [forall x y.] ATOMS => DISJUNCTS
//   goal NAME : FORMULA
// ATOMS is `true` or a comma-separated atom list; DISJUNCTS is `false` or
// `|`-separated groups, each optionally prefixed by `exists z w.`.
ParseResult parse_theory(const std::string& text);

// Condition literal `x,y : P(x),Q(x,y)`; both sides may be empty.
Condition parse_condition(const std::string& text, const Signature& sig);

// Formula over the connectives & | -> forall exists true false =.
Formula parse_formula(const std::string& text, const Signature& sig);

Term parse_term(const std::string& text, const Signature& sig);

// Signature-free term parsing: an identifier applied to parentheses is a
// function symbol, anything else is a variable.
Term parse_term_lenient(const std::string& text);

// Rendering a theory file back to the line grammar; parse . print . parse
// is the identity on values.
std::string print_theory(const TheoryFile& tf);

}  // namespace coforce

#endif
