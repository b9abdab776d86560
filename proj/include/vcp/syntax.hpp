#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vcp {

/// Base class of all errors raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Free existential (gamma), free universal (delta) and bound variables live
// in disjoint namespaces; the kind is part of the identity of a variable.
enum class VarKind : std::uint8_t { Gamma, Delta, Bound };

struct Variable {
  std::string name;
  VarKind kind = VarKind::Bound;

  static Variable gamma(std::string n) { return {std::move(n), VarKind::Gamma}; }
  static Variable delta(std::string n) { return {std::move(n), VarKind::Delta}; }
  static Variable bound(std::string n) { return {std::move(n), VarKind::Bound}; }

  bool is_gamma() const { return kind == VarKind::Gamma; }
  bool is_delta() const { return kind == VarKind::Delta; }
  bool is_bound() const { return kind == VarKind::Bound; }

  friend bool operator==(const Variable &a, const Variable &b) {
    return a.kind == b.kind && a.name == b.name;
  }
  friend bool operator<(const Variable &a, const Variable &b) {
    if (a.kind != b.kind)
      return a.kind < b.kind;
    return a.name < b.name;
  }
};

using VarSet = std::set<Variable>;

/// `x^e`, `x^a` or the bare name of a bound variable.
std::string to_string(const Variable &v);

class Term {
public:
  static Term var(Variable v);
  static Term app(std::string function, std::vector<Term> args = {});

  bool is_var() const;
  const Variable &variable() const;  // requires is_var()
  const std::string &function() const;  // requires !is_var()
  std::span<const Term> args() const;

  // Free gamma / delta variables, cached at construction.
  const VarSet &gamma_vars() const;
  const VarSet &delta_vars() const;
  const VarSet &bound_vars() const;
  bool mentions(const Variable &v) const;
  std::size_t hash() const;

  friend bool operator==(const Term &a, const Term &b);
  friend bool operator!=(const Term &a, const Term &b) { return !(a == b); }
  friend bool operator<(const Term &a, const Term &b);

  struct Node;

private:
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

enum class Connective : std::uint8_t { Atom, Not, And, Or, Forall, Exists };

/// Immutable first-order formula. Sub-formulas are shared.
///
/// Construction enforces the quantification restriction: a quantifier may
/// not bind a name that is already quantified somewhere in its body.
class Formula {
public:
  static Formula atom(std::string predicate, std::vector<Term> args = {});
  static Formula equality(Term lhs, Term rhs);
  static Formula negation(Formula f);
  static Formula conjunction(Formula l, Formula r);
  static Formula disjunction(Formula l, Formula r);
  static Formula forall(std::string bound, Formula body);
  static Formula exists(std::string bound, Formula body);

  Connective connective() const;
  bool is_atom() const { return connective() == Connective::Atom; }
  bool is_not() const { return connective() == Connective::Not; }
  bool is_quantifier() const {
    return connective() == Connective::Forall ||
           connective() == Connective::Exists;
  }

  const std::string &predicate() const;  // Atom
  std::span<const Term> terms() const;   // Atom
  const Formula &operand() const;        // Not
  const Formula &left() const;           // And, Or
  const Formula &right() const;          // And, Or
  const std::string &bound() const;      // Forall, Exists
  const Formula &body() const;           // Forall, Exists

  const VarSet &gamma_vars() const;
  const VarSet &delta_vars() const;
  /// Bound-kind variables occurring outside the scope of their binder.
  const VarSet &loose_bound_vars() const;
  /// Names bound by some quantifier inside this formula.
  const std::set<std::string> &quantified_names() const;
  bool mentions(const Variable &v) const;
  std::size_t hash() const;

  friend bool operator==(const Formula &a, const Formula &b);
  friend bool operator!=(const Formula &a, const Formula &b) { return !(a == b); }
  friend bool operator<(const Formula &a, const Formula &b);

  struct Node;

private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// B if f is ~B, otherwise ~f.
Formula conjugate(const Formula &f);

/// A list of formulas read disjunctively.
class Sequent {
public:
  Sequent() = default;
  /// Throws Error when a member has a loose bound variable.
  explicit Sequent(std::vector<Formula> formulas);
  Sequent(std::initializer_list<Formula> formulas)
      : Sequent(std::vector<Formula>(formulas)) {}

  std::size_t size() const { return formulas_.size(); }
  bool empty() const { return formulas_.empty(); }
  const Formula &operator[](std::size_t i) const { return formulas_.at(i); }
  const std::vector<Formula> &formulas() const { return formulas_; }
  auto begin() const { return formulas_.begin(); }
  auto end() const { return formulas_.end(); }

  friend bool operator==(const Sequent &, const Sequent &) = default;
  friend bool operator<(const Sequent &a, const Sequent &b) {
    return a.formulas_ < b.formulas_;
  }

private:
  std::vector<Formula> formulas_;
};

struct FreeVars {
  VarSet gamma;
  VarSet delta;
  friend bool operator==(const FreeVars &, const FreeVars &) = default;
};

FreeVars free_vars(const Term &t);
FreeVars free_vars(const Formula &f);
FreeVars free_vars(const Sequent &s);
FreeVars free_vars(std::span<const Sequent> ss);

/// Finite map from gamma-variables to terms, identity elsewhere.
class Substitution {
public:
  Substitution() = default;
  Substitution(std::initializer_list<std::pair<Variable, Term>> bindings);

  /// Throws Error if `x` is not a gamma-variable or `t` mentions a bound
  /// variable. Binding x to itself erases the entry.
  void bind(const Variable &x, Term t);

  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  bool binds(const Variable &x) const { return map_.count(x) != 0; }
  /// sigma(x); x itself when unbound.
  Term operator()(const Variable &x) const;
  VarSet domain() const;
  const std::map<Variable, Term> &bindings() const { return map_; }
  auto begin() const { return map_.begin(); }
  auto end() const { return map_.end(); }

  friend bool operator==(const Substitution &, const Substitution &) = default;

private:
  std::map<Variable, Term> map_;
};

Term apply(const Term &t, const Substitution &s);
Formula apply(const Formula &f, const Substitution &s);
Sequent apply(const Sequent &q, const Substitution &s);

/// First applies `first`, then `second`.
Substitution compose(const Substitution &first, const Substitution &second);

/// Replaces the bound variable of a quantified formula with `v` in its body.
/// Throws Error unless `f` is quantified and `v` is a free variable that does
/// not occur in `f`.
Formula instantiate_quantifier(const Formula &f, const Variable &v);

/// Symbol table with fixed arities. Predicates and functions share one
/// namespace so that a structure description is unambiguous.
class Signature {
public:
  void declare_function(const std::string &name, std::size_t arity);
  void declare_predicate(const std::string &name, std::size_t arity);
  bool has_function(const std::string &name) const { return functions_.count(name); }
  bool has_predicate(const std::string &name) const { return predicates_.count(name); }
  const std::map<std::string, std::size_t> &functions() const { return functions_; }
  const std::map<std::string, std::size_t> &predicates() const { return predicates_; }
  void merge(const Signature &other);

  friend bool operator==(const Signature &, const Signature &) = default;

private:
  std::map<std::string, std::size_t> functions_;
  std::map<std::string, std::size_t> predicates_;
};

Signature signature_of(const Formula &f);
Signature signature_of(std::span<const Sequent> ss);

std::string to_string(const Term &t);
std::string to_string(const Formula &f);
std::string to_string(const Sequent &s);
std::string to_string(const Substitution &s);

inline std::ostream &operator<<(std::ostream &os, const Variable &v) { return os << to_string(v); }
inline std::ostream &operator<<(std::ostream &os, const Term &t) { return os << to_string(t); }
inline std::ostream &operator<<(std::ostream &os, const Formula &f) { return os << to_string(f); }
inline std::ostream &operator<<(std::ostream &os, const Sequent &s) { return os << to_string(s); }

}  // namespace vcp
