#include "vcp/choice.hpp"

#include "vcp/parser.hpp"
#include "vcp/varcond.hpp"

namespace vcp {

std::optional<std::string> choice_violation(const ChoiceCondition &cc, const Relation &r) {
  for (const auto &[y, b] : cc.choices)
    if (!y.is_delta())
      return "choice for non-delta variable " + to_string(y);
  for (const auto &[a, b] : cc.order)
    if (!a.is_delta() || !b.is_delta())
      return "ordering pair (" + to_string(a) + "," + to_string(b) + ") is not between delta-variables";
  if (auto c = find_cycle(cc.order))
    return "ordering has cycle " + format_cycle(*c);
  const Relation before = transitive_closure(cc.order);
  for (const Edge &e : compose(r, before))
    if (!r.count(e))
      return "R o < contains (" + to_string(e.first) + "," + to_string(e.second) +
             ") which is not in R";
  for (const auto &[y, b] : cc.choices) {
    for (const Variable &z : b.delta_vars())
      if (z != y && !before.count({z, y}))
        return to_string(z) + " occurs in the choice for " + to_string(y) +
               " but is not ordered before it";
    for (const Variable &u : b.gamma_vars())
      if (!r.count({u, y}))
        return to_string(u) + " occurs in the choice for " + to_string(y) + " but (" +
               to_string(u) + "," + to_string(y) + ") is not in R";
  }
  return std::nullopt;
}

bool is_extension(const StrongState &next, const StrongState &prev) {
  for (const auto &[y, b] : prev.choice.choices) {
    auto it = next.choice.choices.find(y);
    if (it == next.choice.choices.end() || it->second != b)
      return false;
  }
  return subset(prev.vc, next.vc) && validate(next.choice, next.vc);
}

StrongState extended_strong_update(const Substitution &sigma, const StrongState &state) {
  StrongState out;
  out.vc = strong_update(sigma, state.vc);  // throws when inadmissible
  for (const auto &[y, b] : state.choice.choices)
    out.choice.choices.emplace(y, apply(b, sigma));
  const Relation dep = transitive_closure(dependency_relation(sigma, state.vc));
  out.choice.order = unite(unite(state.choice.order, compose(state.choice.order, dep)), dep);
  return out;
}

namespace {

Term abstract(const Term &t, const Variable &y, const std::string &bound) {
  if (!t.mentions(y))
    return t;
  if (t.is_var())
    return Term::var(Variable::bound(bound));
  std::vector<Term> args;
  for (const Term &a : t.args())
    args.push_back(abstract(a, y, bound));
  return Term::app(t.function(), std::move(args));
}

Formula abstract(const Formula &f, const Variable &y, const std::string &bound) {
  if (!f.mentions(y))
    return f;
  switch (f.connective()) {
  case Connective::Atom: {
    std::vector<Term> args;
    for (const Term &t : f.terms())
      args.push_back(abstract(t, y, bound));
    return Formula::atom(f.predicate(), std::move(args));
  }
  case Connective::Not:
    return Formula::negation(abstract(f.operand(), y, bound));
  case Connective::And:
    return Formula::conjunction(abstract(f.left(), y, bound), abstract(f.right(), y, bound));
  case Connective::Or:
    return Formula::disjunction(abstract(f.left(), y, bound), abstract(f.right(), y, bound));
  case Connective::Forall:
    return Formula::forall(f.bound(), abstract(f.body(), y, bound));
  case Connective::Exists:
    return Formula::exists(f.bound(), abstract(f.body(), y, bound));
  }
  return f;
}

}  // namespace

std::string epsilon_reading(const Variable &y, const Formula &b) {
  std::string name = y.name;
  for (int i = 1; b.quantified_names().count(name); ++i)
    name = y.name + std::to_string(i);
  const Formula body = conjugate(abstract(b, y, name));
  return to_string(y) + " = eps " + name + ". " + to_string(body);
}

std::string format_choices(const ChoiceCondition &cc) {
  std::string out;
  for (const auto &[y, b] : cc.choices)
    out += "choose " + to_string(y) + " : " + to_string(b) + "\n";
  return out;
}

std::pair<Variable, Formula> parse_choice(std::string_view text, Signature &sig) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw ParseError("expected 'y^a : formula'", 0);
  Variable y = parse_variable(text.substr(0, colon));
  if (!y.is_delta())
    throw ParseError("choices are made for delta-variables", 0);
  try {
    return {y, parse_formula(text.substr(colon + 1), sig)};
  } catch (const ParseError &e) {
    throw ParseError(e.message(), colon + 1 + e.position());
  }
}

}  // namespace vcp
