#include "vcp/syntax.hpp"

#include <algorithm>
#include <sstream>

namespace vcp {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

void unite(VarSet &into, const VarSet &from) { into.insert(from.begin(), from.end()); }

}  // namespace

std::string to_string(const Variable &v) {
  switch (v.kind) {
  case VarKind::Gamma:
    return v.name + "^e";
  case VarKind::Delta:
    return v.name + "^a";
  case VarKind::Bound:
    break;
  }
  return v.name;
}

// ---------------------------------------------------------------------------
// Terms

struct Term::Node {
  bool is_var = false;
  Variable var;
  std::string function;
  std::vector<Term> args;
  VarSet gamma, delta, bound;
  std::size_t hash = 0;
};

Term Term::var(Variable v) {
  auto n = std::make_shared<Node>();
  n->is_var = true;
  n->hash = mix(std::hash<std::string>{}(v.name), static_cast<std::size_t>(v.kind));
  switch (v.kind) {
  case VarKind::Gamma:
    n->gamma.insert(v);
    break;
  case VarKind::Delta:
    n->delta.insert(v);
    break;
  case VarKind::Bound:
    n->bound.insert(v);
    break;
  }
  n->var = std::move(v);
  return Term(std::move(n));
}

Term Term::app(std::string function, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->hash = mix(std::hash<std::string>{}(function), 7);
  for (const Term &a : args) {
    unite(n->gamma, a.node_->gamma);
    unite(n->delta, a.node_->delta);
    unite(n->bound, a.node_->bound);
    n->hash = mix(n->hash, a.node_->hash);
  }
  n->function = std::move(function);
  n->args = std::move(args);
  return Term(std::move(n));
}

bool Term::is_var() const { return node_->is_var; }
const Variable &Term::variable() const { return node_->var; }
const std::string &Term::function() const { return node_->function; }
std::span<const Term> Term::args() const { return node_->args; }
const VarSet &Term::gamma_vars() const { return node_->gamma; }
const VarSet &Term::delta_vars() const { return node_->delta; }
const VarSet &Term::bound_vars() const { return node_->bound; }
std::size_t Term::hash() const { return node_->hash; }

bool Term::mentions(const Variable &v) const {
  switch (v.kind) {
  case VarKind::Gamma:
    return node_->gamma.count(v) != 0;
  case VarKind::Delta:
    return node_->delta.count(v) != 0;
  case VarKind::Bound:
    break;
  }
  return node_->bound.count(v) != 0;
}

bool operator==(const Term &a, const Term &b) {
  if (a.node_ == b.node_)
    return true;
  const Term::Node &x = *a.node_;
  const Term::Node &y = *b.node_;
  if (x.hash != y.hash || x.is_var != y.is_var)
    return false;
  if (x.is_var)
    return x.var == y.var;
  return x.function == y.function && x.args == y.args;
}

bool operator<(const Term &a, const Term &b) {
  if (a.node_ == b.node_)
    return false;
  const Term::Node &x = *a.node_;
  const Term::Node &y = *b.node_;
  if (x.is_var != y.is_var)
    return x.is_var;
  if (x.is_var)
    return x.var < y.var;
  if (x.function != y.function)
    return x.function < y.function;
  return x.args < y.args;
}

// ---------------------------------------------------------------------------
// Formulas

struct Formula::Node {
  Connective connective = Connective::Atom;
  std::string name;  // predicate or bound variable
  std::vector<Term> terms;
  std::vector<Formula> kids;
  VarSet gamma, delta, loose;
  std::set<std::string> quantified;
  std::size_t hash = 0;
};

namespace {

std::shared_ptr<Formula::Node> make_node(Connective c, std::string name) {
  auto n = std::make_shared<Formula::Node>();
  n->connective = c;
  n->hash = mix(std::hash<std::string>{}(name), static_cast<std::size_t>(c) + 1);
  n->name = std::move(name);
  return n;
}

}  // namespace

Formula Formula::atom(std::string predicate, std::vector<Term> args) {
  auto n = make_node(Connective::Atom, std::move(predicate));
  for (const Term &t : args) {
    unite(n->gamma, t.gamma_vars());
    unite(n->delta, t.delta_vars());
    unite(n->loose, t.bound_vars());
    n->hash = mix(n->hash, t.hash());
  }
  n->terms = std::move(args);
  return Formula(std::move(n));
}

Formula Formula::equality(Term lhs, Term rhs) {
  return atom("=", {std::move(lhs), std::move(rhs)});
}

Formula Formula::negation(Formula f) {
  auto n = make_node(Connective::Not, "");
  n->gamma = f.node_->gamma;
  n->delta = f.node_->delta;
  n->loose = f.node_->loose;
  n->quantified = f.node_->quantified;
  n->hash = mix(n->hash, f.hash());
  n->kids.push_back(std::move(f));
  return Formula(std::move(n));
}

namespace {

std::shared_ptr<Formula::Node> binary(Connective c, Formula l, Formula r) {
  auto n = make_node(c, "");
  for (const Formula *f : {&l, &r}) {
    unite(n->gamma, f->gamma_vars());
    unite(n->delta, f->delta_vars());
    unite(n->loose, f->loose_bound_vars());
    n->quantified.insert(f->quantified_names().begin(), f->quantified_names().end());
  }
  n->hash = mix(mix(n->hash, l.hash()), r.hash());
  n->kids.push_back(std::move(l));
  n->kids.push_back(std::move(r));
  return n;
}

}  // namespace

Formula Formula::conjunction(Formula l, Formula r) {
  return Formula(binary(Connective::And, std::move(l), std::move(r)));
}

Formula Formula::disjunction(Formula l, Formula r) {
  return Formula(binary(Connective::Or, std::move(l), std::move(r)));
}

namespace {

std::shared_ptr<Formula::Node> quantify(Connective c, std::string bound, const Formula &body) {
  if (bound.empty())
    throw Error("quantifier without a variable");
  if (body.quantified_names().count(bound))
    throw Error("re-quantification of '" + bound + "' inside its own scope");
  auto n = make_node(c, bound);
  n->gamma = body.gamma_vars();
  n->delta = body.delta_vars();
  n->loose = body.loose_bound_vars();
  n->loose.erase(Variable::bound(bound));
  n->quantified = body.quantified_names();
  n->quantified.insert(bound);
  return n;
}

}  // namespace

Formula Formula::forall(std::string bound, Formula body) {
  auto n = quantify(Connective::Forall, std::move(bound), body);
  n->hash = mix(n->hash, body.hash());
  n->kids.push_back(std::move(body));
  return Formula(std::move(n));
}

Formula Formula::exists(std::string bound, Formula body) {
  auto n = quantify(Connective::Exists, std::move(bound), body);
  n->hash = mix(n->hash, body.hash());
  n->kids.push_back(std::move(body));
  return Formula(std::move(n));
}

Connective Formula::connective() const { return node_->connective; }
const std::string &Formula::predicate() const { return node_->name; }
std::span<const Term> Formula::terms() const { return node_->terms; }
const Formula &Formula::operand() const { return node_->kids.at(0); }
const Formula &Formula::left() const { return node_->kids.at(0); }
const Formula &Formula::right() const { return node_->kids.at(1); }
const std::string &Formula::bound() const { return node_->name; }
const Formula &Formula::body() const { return node_->kids.at(0); }
const VarSet &Formula::gamma_vars() const { return node_->gamma; }
const VarSet &Formula::delta_vars() const { return node_->delta; }
std::size_t Formula::hash() const { return node_->hash; }
const VarSet &Formula::loose_bound_vars() const { return node_->loose; }
const std::set<std::string> &Formula::quantified_names() const { return node_->quantified; }

bool Formula::mentions(const Variable &v) const {
  switch (v.kind) {
  case VarKind::Gamma:
    return node_->gamma.count(v) != 0;
  case VarKind::Delta:
    return node_->delta.count(v) != 0;
  case VarKind::Bound:
    break;
  }
  return node_->loose.count(v) != 0 || node_->quantified.count(v.name) != 0;
}

bool operator==(const Formula &a, const Formula &b) {
  if (a.node_ == b.node_)
    return true;
  const Formula::Node &x = *a.node_;
  const Formula::Node &y = *b.node_;
  return x.hash == y.hash && x.connective == y.connective && x.name == y.name &&
         x.terms == y.terms && x.kids == y.kids;
}

bool operator<(const Formula &a, const Formula &b) {
  if (a.node_ == b.node_)
    return false;
  const Formula::Node &x = *a.node_;
  const Formula::Node &y = *b.node_;
  if (x.connective != y.connective)
    return x.connective < y.connective;
  if (x.name != y.name)
    return x.name < y.name;
  if (x.terms != y.terms)
    return x.terms < y.terms;
  return x.kids < y.kids;
}

Formula conjugate(const Formula &f) {
  if (f.is_not())
    return f.operand();
  return Formula::negation(f);
}

// ---------------------------------------------------------------------------
// Sequents and free variables

Sequent::Sequent(std::vector<Formula> formulas) : formulas_(std::move(formulas)) {
  for (const Formula &f : formulas_)
    if (!f.loose_bound_vars().empty())
      throw Error("bound variable '" + f.loose_bound_vars().begin()->name +
                  "' occurs outside the scope of its quantifier");
}

FreeVars free_vars(const Term &t) { return {t.gamma_vars(), t.delta_vars()}; }
FreeVars free_vars(const Formula &f) { return {f.gamma_vars(), f.delta_vars()}; }

FreeVars free_vars(const Sequent &s) {
  FreeVars out;
  for (const Formula &f : s) {
    unite(out.gamma, f.gamma_vars());
    unite(out.delta, f.delta_vars());
  }
  return out;
}

FreeVars free_vars(std::span<const Sequent> ss) {
  FreeVars out;
  for (const Sequent &s : ss) {
    FreeVars v = free_vars(s);
    unite(out.gamma, v.gamma);
    unite(out.delta, v.delta);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Substitutions

Substitution::Substitution(std::initializer_list<std::pair<Variable, Term>> bindings) {
  for (const auto &[x, t] : bindings)
    bind(x, t);
}

void Substitution::bind(const Variable &x, Term t) {
  if (!x.is_gamma())
    throw Error("substitution domain must consist of gamma-variables, got " + to_string(x));
  if (!t.bound_vars().empty())
    throw Error("substitution image mentions bound variable " +
                to_string(*t.bound_vars().begin()));
  if (t.is_var() && t.variable() == x) {
    map_.erase(x);
    return;
  }
  map_.insert_or_assign(x, std::move(t));
}

Term Substitution::operator()(const Variable &x) const {
  auto it = map_.find(x);
  if (it != map_.end())
    return it->second;
  return Term::var(x);
}

VarSet Substitution::domain() const {
  VarSet out;
  for (const auto &[x, t] : map_)
    out.insert(x);
  return out;
}

namespace {

bool touches(const VarSet &gammas, const Substitution &s) {
  if (s.empty() || gammas.empty())
    return false;
  for (const auto &[x, t] : s)
    if (gammas.count(x))
      return true;
  return false;
}

}  // namespace

Term apply(const Term &t, const Substitution &s) {
  if (!touches(t.gamma_vars(), s))
    return t;
  if (t.is_var())
    return s(t.variable());
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term &a : t.args())
    args.push_back(apply(a, s));
  return Term::app(t.function(), std::move(args));
}

Formula apply(const Formula &f, const Substitution &s) {
  if (!touches(f.gamma_vars(), s))
    return f;
  switch (f.connective()) {
  case Connective::Atom: {
    std::vector<Term> args;
    for (const Term &t : f.terms())
      args.push_back(apply(t, s));
    return Formula::atom(f.predicate(), std::move(args));
  }
  case Connective::Not:
    return Formula::negation(apply(f.operand(), s));
  case Connective::And:
    return Formula::conjunction(apply(f.left(), s), apply(f.right(), s));
  case Connective::Or:
    return Formula::disjunction(apply(f.left(), s), apply(f.right(), s));
  case Connective::Forall:
    return Formula::forall(f.bound(), apply(f.body(), s));
  case Connective::Exists:
    return Formula::exists(f.bound(), apply(f.body(), s));
  }
  return f;
}

Sequent apply(const Sequent &q, const Substitution &s) {
  std::vector<Formula> out;
  out.reserve(q.size());
  for (const Formula &f : q)
    out.push_back(apply(f, s));
  return Sequent(std::move(out));
}

Substitution compose(const Substitution &first, const Substitution &second) {
  Substitution out;
  for (const auto &[x, t] : first)
    out.bind(x, apply(t, second));
  for (const auto &[x, t] : second)
    if (!first.binds(x))
      out.bind(x, t);
  return out;
}

namespace {

Term replace_bound(const Term &t, const Variable &bound, const Term &by) {
  if (t.is_var())
    return t.variable() == bound ? by : t;
  std::vector<Term> args;
  for (const Term &a : t.args())
    args.push_back(replace_bound(a, bound, by));
  return Term::app(t.function(), std::move(args));
}

Formula replace_bound(const Formula &f, const Variable &bound, const Term &by) {
  if (!f.loose_bound_vars().count(bound))
    return f;
  switch (f.connective()) {
  case Connective::Atom: {
    std::vector<Term> args;
    for (const Term &t : f.terms())
      args.push_back(replace_bound(t, bound, by));
    return Formula::atom(f.predicate(), std::move(args));
  }
  case Connective::Not:
    return Formula::negation(replace_bound(f.operand(), bound, by));
  case Connective::And:
    return Formula::conjunction(replace_bound(f.left(), bound, by),
                                replace_bound(f.right(), bound, by));
  case Connective::Or:
    return Formula::disjunction(replace_bound(f.left(), bound, by),
                                replace_bound(f.right(), bound, by));
  case Connective::Forall:
    return Formula::forall(f.bound(), replace_bound(f.body(), bound, by));
  case Connective::Exists:
    return Formula::exists(f.bound(), replace_bound(f.body(), bound, by));
  }
  return f;
}

}  // namespace

Formula instantiate_quantifier(const Formula &f, const Variable &v) {
  if (!f.is_quantifier())
    throw Error("cannot instantiate non-quantified formula " + to_string(f));
  if (v.is_bound())
    throw Error("quantifier must be instantiated with a free variable");
  if (f.mentions(v))
    throw Error("variable " + to_string(v) + " already occurs in " + to_string(f));
  return replace_bound(f.body(), Variable::bound(f.bound()), Term::var(v));
}

// ---------------------------------------------------------------------------
// Signatures

void Signature::declare_function(const std::string &name, std::size_t arity) {
  if (predicates_.count(name))
    throw Error("symbol '" + name + "' is already a predicate");
  auto [it, inserted] = functions_.emplace(name, arity);
  if (!inserted && it->second != arity)
    throw Error("arity mismatch for function '" + name + "': " + std::to_string(it->second) +
                " vs " + std::to_string(arity));
}

void Signature::declare_predicate(const std::string &name, std::size_t arity) {
  if (functions_.count(name))
    throw Error("symbol '" + name + "' is already a function");
  auto [it, inserted] = predicates_.emplace(name, arity);
  if (!inserted && it->second != arity)
    throw Error("arity mismatch for predicate '" + name + "': " + std::to_string(it->second) +
                " vs " + std::to_string(arity));
}

void Signature::merge(const Signature &other) {
  for (const auto &[n, a] : other.functions_)
    declare_function(n, a);
  for (const auto &[n, a] : other.predicates_)
    declare_predicate(n, a);
}

namespace {

void collect(const Term &t, Signature &sig) {
  if (t.is_var())
    return;
  sig.declare_function(t.function(), t.args().size());
  for (const Term &a : t.args())
    collect(a, sig);
}

void collect(const Formula &f, Signature &sig) {
  switch (f.connective()) {
  case Connective::Atom:
    sig.declare_predicate(f.predicate(), f.terms().size());
    for (const Term &t : f.terms())
      collect(t, sig);
    return;
  case Connective::Not:
  case Connective::Forall:
  case Connective::Exists:
    collect(f.operand(), sig);
    return;
  case Connective::And:
  case Connective::Or:
    collect(f.left(), sig);
    collect(f.right(), sig);
    return;
  }
}

}  // namespace

Signature signature_of(const Formula &f) {
  Signature sig;
  collect(f, sig);
  return sig;
}

Signature signature_of(std::span<const Sequent> ss) {
  Signature sig;
  for (const Sequent &s : ss)
    for (const Formula &f : s)
      collect(f, sig);
  return sig;
}

// ---------------------------------------------------------------------------
// Printing. The output is accepted by the parser and parses back to the same
// formula; quantifiers are parenthesized unless they end the enclosing text.

std::string to_string(const Term &t) {
  if (t.is_var())
    return to_string(t.variable());
  std::string out = t.function();
  if (t.args().empty())
    return out;
  out += '(';
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (i)
      out += ',';
    out += to_string(t.args()[i]);
  }
  out += ')';
  return out;
}

namespace {

enum class Slot { Top, NotOperand, AndLeft, AndRight, OrLeft, OrRight };

bool needs_parens(const Formula &f, Slot slot) {
  switch (f.connective()) {
  case Connective::Atom:
  case Connective::Not:
    return false;
  case Connective::Forall:
  case Connective::Exists:
    return slot != Slot::Top;
  case Connective::And:
    return slot == Slot::NotOperand || slot == Slot::AndRight;
  case Connective::Or:
    return slot == Slot::NotOperand || slot == Slot::AndLeft || slot == Slot::AndRight ||
           slot == Slot::OrRight;
  }
  return true;
}

void print(const Formula &f, Slot slot, std::string &out) {
  const bool parens = needs_parens(f, slot);
  if (parens)
    out += '(';
  switch (f.connective()) {
  case Connective::Atom:
    if (f.predicate() == "=" && f.terms().size() == 2) {
      out += '(' + to_string(f.terms()[0]) + " = " + to_string(f.terms()[1]) + ')';
    } else {
      out += f.predicate();
      if (!f.terms().empty()) {
        out += '(';
        for (std::size_t i = 0; i < f.terms().size(); ++i) {
          if (i)
            out += ',';
          out += to_string(f.terms()[i]);
        }
        out += ')';
      }
    }
    break;
  case Connective::Not:
    out += '~';
    print(f.operand(), Slot::NotOperand, out);
    break;
  case Connective::And:
    print(f.left(), Slot::AndLeft, out);
    out += " & ";
    print(f.right(), Slot::AndRight, out);
    break;
  case Connective::Or:
    print(f.left(), Slot::OrLeft, out);
    out += " | ";
    print(f.right(), Slot::OrRight, out);
    break;
  case Connective::Forall:
  case Connective::Exists:
    out += f.connective() == Connective::Forall ? "all " : "ex ";
    out += f.bound();
    out += ". ";
    print(f.body(), Slot::Top, out);
    break;
  }
  if (parens)
    out += ')';
}

}  // namespace

std::string to_string(const Formula &f) {
  std::string out;
  print(f, Slot::Top, out);
  return out;
}

std::string to_string(const Sequent &s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i)
      out += ", ";
    out += to_string(s[i]);
  }
  return out;
}

std::string to_string(const Substitution &s) {
  std::string out = "{";
  bool first = true;
  for (const auto &[x, t] : s) {
    out += first ? " " : ", ";
    first = false;
    out += to_string(x) + " -> " + to_string(t);
  }
  out += first ? "}" : " }";
  return out;
}

}  // namespace vcp
