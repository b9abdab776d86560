#pragma once

#include <optional>
#include <vector>

#include "vcp/relations.hpp"
#include "vcp/syntax.hpp"

namespace vcp {

/// Raised when a substitution violates the variable condition. `cycle`
/// alternates delta- and gamma-variables: y0 x0 y1 x1 ... where yi occurs in
/// sigma(xi) and (xi, yi+1) is in R, closing back at y0.
class InadmissibleError : public Error {
public:
  InadmissibleError(const std::string &what, std::vector<Variable> cycle)
      : Error(what), cycle_(std::move(cycle)) {}
  const std::vector<Variable> &cycle() const { return cycle_; }

private:
  std::vector<Variable> cycle_;
};

struct SubstAnalysis {
  Relation existential;  // (x', x): x' occurs in sigma(x)
  Relation universal;    // (y, x): y occurs in sigma(x)
};

/// E and U of `sigma` over the gamma-variables in `relevant`.
SubstAnalysis analyze(const Substitution &sigma, const VarSet &relevant);

/// dom sigma together with the gamma-variables constrained by R.
VarSet relevant_for(const Substitution &sigma, const Relation &r);

/// U o R for the relevant variables of sigma and R.
Relation dependency_relation(const Substitution &sigma, const Relation &r);

bool is_weak_admissible(const Substitution &sigma, const Relation &r);
bool is_strong_admissible(const Substitution &sigma, const Relation &r);

/// Cycle in U o R, expanded through the gamma-variables that witness each
/// step. Weak checks only look for cycles of length one.
std::optional<std::vector<Variable>> admissibility_cycle(const Substitution &sigma,
                                                         const Relation &r, bool strong);

/// E o R. Throws InadmissibleError unless weakly admissible.
Relation weak_update(const Substitution &sigma, const Relation &r);
/// E o R o (U o R)*. Throws InadmissibleError unless strongly admissible.
Relation strong_update(const Substitution &sigma, const Relation &r);
/// The non-empty terms E o R o (U o R)^k for k = 0, 1, ...; their union is
/// the strong update.
std::vector<Relation> strong_update_terms(const Substitution &sigma, const Relation &r);

std::string format_cycle(const std::vector<Variable> &cycle);

}  // namespace vcp
