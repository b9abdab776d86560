#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vcp/syntax.hpp"

namespace vcp {

class ParseError : public Error {
public:
  ParseError(const std::string &what, std::size_t position)
      : Error(what + " at offset " + std::to_string(position)), message_(what),
        position_(position) {}
  std::size_t position() const { return position_; }
  /// The description without the position suffix.
  const std::string &message() const { return message_; }

private:
  std::string message_;
  std::size_t position_;
};

// Grammar, loosest binding first:
//
//   formula  := disj ( "->" formula )?
//   disj     := conj ( "|" conj )*
//   conj     := unary ( "&" unary )*
//   unary    := "~" unary | ("all" | "ex") ident "." formula | atom
//   atom     := "(" formula ")" | term "=" term | ident ( "(" term,* ")" )?
//   term     := ident "^e" | ident "^a" | ident ( "(" term,* ")" )?
//
// A bare identifier is a bound variable when a quantifier for it is in scope
// and a constant otherwise. `A -> B` is read as `~A | B`. Symbols are
// declared in `sig` as they are met; an arity clash is an error.

Formula parse_formula(std::string_view text, Signature &sig);
Sequent parse_sequent(std::string_view text, Signature &sig);
Term parse_term(std::string_view text, Signature &sig);
Variable parse_variable(std::string_view text);

/// `{ x^e -> t, ... }`
Substitution parse_substitution(std::string_view text, Signature &sig);
/// `{ (x^e, y^a), ... }`; also accepts an empty `{}`.
std::vector<std::pair<Variable, Variable>> parse_variable_pairs(std::string_view text);

struct Problem {
  std::string name;
  Sequent sequent;
};

/// One `name : f1, f2, ...` per line, `#` starts a comment. All problems of a
/// file share one signature.
struct ProblemSet {
  Signature signature;
  std::vector<Problem> problems;

  const Problem &find(const std::string &name) const;
};

ProblemSet parse_problems(std::string_view text);
ProblemSet load_problems(const std::string &path);

}  // namespace vcp
