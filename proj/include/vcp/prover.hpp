#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vcp/calculus.hpp"
#include "vcp/semantics.hpp"

namespace vcp {

struct SearchLimits {
  /// Rounds of gamma-steps; round r expands every gamma-formula that has
  /// fewer than r instances on its branch.
  std::size_t gamma_multiplicity = 2;
  /// Upper bound on proof tree nodes.
  std::size_t node_budget = 20000;
  /// Upper bound on unification attempts per closing attempt.
  std::size_t unification_budget = 200000;
  /// Largest structure tried when looking for a countermodel; 0 disables.
  std::size_t countermodel_size = 2;
};

struct ProofResult {
  bool proved = false;
  std::optional<ProofForest> forest;  // the final forest, also when unproven
  Substitution closing;
  std::string reason;                 // why the search gave up
  std::optional<Structure> countermodel;

  /// Replayable trace of the proof.
  std::string trace() const;
};

/// Tries to close the single tree grown from `goal`. The trace refers to the
/// hypothesis by `name`, or inlines the sequent when the name is empty.
ProofResult search(const Sequent &goal, Mode mode, const SearchLimits &limits = {},
                   const std::string &name = {});
ProofResult search(const Formula &goal, Mode mode, const SearchLimits &limits = {});

/// A substitution that turns every open leaf of every tree into an axiom and
/// is admissible for the forest's variable condition in the forest's mode.
std::optional<Substitution> close_attempt(const ProofForest &forest,
                                          std::size_t unification_budget = 200000);

/// Most general unifier of two formulas extending `current`; gamma-variables
/// are the only unknowns.
std::optional<Substitution> unify(const Formula &a, const Formula &b,
                                  const Substitution &current = {});
std::optional<Substitution> unify(const Term &a, const Term &b, const Substitution &current = {});

struct Answer {
  Variable query;
  Term value;
  /// For each chosen delta-variable in the value: the epsilon reading and a
  /// plain statement of what to choose.
  std::vector<std::string> notes;
};

std::vector<Answer> extract_answers(const ProofResult &result, const VarSet &query);
std::string format_answers(const std::vector<Answer> &answers);

}  // namespace vcp
