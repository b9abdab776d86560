#include "vcp/varcond.hpp"

namespace vcp {

SubstAnalysis analyze(const Substitution &sigma, const VarSet &relevant) {
  SubstAnalysis out;
  for (const Variable &x : relevant) {
    if (!x.is_gamma())
      throw Error("relevant variables must be gamma-variables, got " + to_string(x));
    const Term image = sigma(x);
    for (const Variable &xp : image.gamma_vars())
      out.existential.emplace(xp, x);
    for (const Variable &y : image.delta_vars())
      out.universal.emplace(y, x);
  }
  return out;
}

VarSet relevant_for(const Substitution &sigma, const Relation &r) {
  VarSet out = sigma.domain();
  for (const auto &[x, y] : r)
    if (x.is_gamma())
      out.insert(x);
  return out;
}

Relation dependency_relation(const Substitution &sigma, const Relation &r) {
  return compose(analyze(sigma, relevant_for(sigma, r)).universal, r);
}

bool is_weak_admissible(const Substitution &sigma, const Relation &r) {
  return is_irreflexive(dependency_relation(sigma, r));
}

bool is_strong_admissible(const Substitution &sigma, const Relation &r) {
  return is_acyclic(dependency_relation(sigma, r));
}

std::optional<std::vector<Variable>> admissibility_cycle(const Substitution &sigma,
                                                         const Relation &r, bool strong) {
  const SubstAnalysis a = analyze(sigma, relevant_for(sigma, r));
  const Relation ur = compose(a.universal, r);
  std::vector<Variable> deltas;
  if (strong) {
    auto c = find_cycle(ur);
    if (!c)
      return std::nullopt;
    deltas = std::move(*c);
  } else {
    for (const auto &[p, q] : ur)
      if (p == q) {
        deltas.push_back(p);
        break;
      }
    if (deltas.empty())
      return std::nullopt;
  }
  std::vector<Variable> out;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    const Variable &y = deltas[i];
    const Variable &next = deltas[(i + 1) % deltas.size()];
    out.push_back(y);
    for (const auto &[yy, x] : a.universal)
      if (yy == y && r.count({x, next})) {
        out.push_back(x);
        break;
      }
  }
  return out;
}

namespace {

void require(const Substitution &sigma, const Relation &r, bool strong) {
  if (auto c = admissibility_cycle(sigma, r, strong))
    throw InadmissibleError(std::string("substitution ") + to_string(sigma) + " is not " +
                                (strong ? "strongly " : "") +
                                "admissible: cycle " + format_cycle(*c),
                            *c);
}

}  // namespace

Relation weak_update(const Substitution &sigma, const Relation &r) {
  require(sigma, r, false);
  return compose(analyze(sigma, relevant_for(sigma, r)).existential, r);
}

std::vector<Relation> strong_update_terms(const Substitution &sigma, const Relation &r) {
  require(sigma, r, true);
  const SubstAnalysis a = analyze(sigma, relevant_for(sigma, r));
  const Relation step = compose(a.universal, r);
  std::vector<Relation> terms;
  Relation term = compose(a.existential, r);
  // U o R is acyclic, so its powers vanish after at most |field| steps.
  while (!term.empty()) {
    terms.push_back(term);
    term = compose(term, step);
  }
  return terms;
}

Relation strong_update(const Substitution &sigma, const Relation &r) {
  require(sigma, r, true);
  const SubstAnalysis a = analyze(sigma, relevant_for(sigma, r));
  const Relation step = compose(a.universal, r);
  Relation acc = compose(a.existential, r);
  Relation frontier = acc;
  while (!frontier.empty()) {
    Relation next;
    for (const Edge &e : compose(frontier, step))
      if (acc.insert(e).second)
        next.insert(e);
    frontier = std::move(next);
  }
  return acc;
}

std::string format_cycle(const std::vector<Variable> &cycle) {
  std::string out;
  for (const Variable &v : cycle)
    out += to_string(v) + " -> ";
  if (!cycle.empty())
    out += to_string(cycle.front());
  return out;
}

}  // namespace vcp
