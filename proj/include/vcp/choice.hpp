#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>

#include "vcp/relations.hpp"
#include "vcp/syntax.hpp"

namespace vcp {

// A choice-condition records, for delta-variables introduced by liberalized
// delta-steps, the formula the variable was chosen against, together with a
// dependency ordering between delta-variables. The ordering is stored as a
// generating relation; its transitive closure is the intended order.
struct ChoiceCondition {
  std::map<Variable, Formula> choices;
  Relation order;

  bool empty() const { return choices.empty() && order.empty(); }
  friend bool operator==(const ChoiceCondition &, const ChoiceCondition &) = default;
};

struct StrongState {
  Relation vc;
  ChoiceCondition choice;

  friend bool operator==(const StrongState &, const StrongState &) = default;
};

/// First violated requirement, or nullopt if `cc` is a choice-condition for R.
std::optional<std::string> choice_violation(const ChoiceCondition &cc, const Relation &r);
inline bool validate(const ChoiceCondition &cc, const Relation &r) {
  return !choice_violation(cc, r).has_value();
}

/// C ⊆ C', R ⊆ R' and the new state is valid. The ordering is not required
/// to grow.
bool is_extension(const StrongState &next, const StrongState &prev);

/// C' = C sigma, R' = strong update of R, <' = < o (U o R)* ∪ (U o R)+.
/// Throws InadmissibleError unless sigma is strongly admissible for R.
StrongState extended_strong_update(const Substitution &sigma, const StrongState &state);

/// `y^a = eps y. ~B{y^a -> y}` for the entry (y^a, B).
std::string epsilon_reading(const Variable &y, const Formula &b);

/// One `choose y^a : B` line per entry.
std::string format_choices(const ChoiceCondition &cc);
/// Parses `y^a : B`.
std::pair<Variable, Formula> parse_choice(std::string_view text, Signature &sig);

}  // namespace vcp
