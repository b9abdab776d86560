#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vcp/choice.hpp"
#include "vcp/relations.hpp"
#include "vcp/syntax.hpp"

namespace vcp {

class CapacityError : public Error {
public:
  using Error::Error;
};

/// Finite structure. Elements are 0 .. size-1; `=` is always identity and
/// never has an entry in `predicates`. Tables are indexed by the arguments
/// read as a base-`size` number, first argument most significant.
struct Structure {
  std::size_t size = 1;
  std::vector<std::string> elements;
  std::map<std::string, std::pair<std::size_t, std::vector<int>>> functions;
  std::map<std::string, std::pair<std::size_t, std::vector<char>>> predicates;

  /// Elements named a, b, c, ... and every symbol of `sig` interpreted by 0 /
  /// false.
  static Structure blank(std::size_t size, const Signature &sig);

  std::size_t index(std::span<const int> args) const;
  int apply(const std::string &function, std::span<const int> args) const;
  bool holds(const std::string &predicate, std::span<const int> args) const;
  int element(std::string_view name) const;

  friend bool operator==(const Structure &, const Structure &) = default;
};

/// `universe a b; P = {a}; Q = id; R = {(a,b)}; f(a)=b f(b)=a; 0 = a`.
/// Symbols must belong to `sig`; predicates left out are empty, functions
/// must be total.
Structure parse_structure(std::string_view text, const Signature &sig);
std::string to_string(const Structure &s);

/// Every structure of the given size over `sig`. Predicates vary by
/// cardinality first, then by the lexicographic order of their tuple sets;
/// function tables vary lexicographically; the last symbol varies fastest.
/// `visit` returns false to stop early.
void enumerate_structures(const Signature &sig, std::size_t size,
                          const std::function<bool(const Structure &)> &visit);

using Assignment = std::map<Variable, int>;

/// Tarski semantics. Throws Error if a free variable is not assigned.
int eval(const Term &t, const Structure &a, const Assignment &env);
bool eval(const Formula &f, const Structure &a, const Assignment &env);
/// Some member holds.
bool eval(const Sequent &s, const Structure &a, const Assignment &env);
/// Every sequent holds.
bool eval(std::span<const Sequent> g, const Structure &a, const Assignment &env);

/// Semantic counterpart of a substitution: gamma-variable x reads the
/// delta-variables deps[x] = S^-1<x> (sorted) through a lookup table indexed
/// like Structure tables.
struct ExistentialValuation {
  Relation s;  // (y, x) pairs
  std::map<Variable, std::vector<Variable>> deps;
  std::map<Variable, std::vector<int>> tables;
};

/// Values of the gamma-variables of `e` under `pi`.
Assignment apply_epsilon(const ExistentialValuation &e, const Assignment &pi, std::size_t size);

std::string to_string(const ExistentialValuation &e, const Structure &a);
std::string to_string(const Assignment &pi, const Structure &a);

struct OracleOptions {
  /// Upper bound on the number of valuations enumerated for one relation S.
  std::size_t capacity = 1'000'000;
  /// Only enumerate valuations whose S is maximal among the admissible ones.
  /// The checks below only depend on the induced gamma-assignments, and
  /// every admissible S lies below a maximal one, so this loses nothing.
  bool maximal_only = true;
};

/// Visits every admissible valuation over the carriers exactly once; weak
/// admissibility requires S o R irreflexive, strong admissibility acyclic.
/// Returns the number visited. `visit` returns false to stop early.
std::size_t enumerate_valuations(const VarSet &gammas, const VarSet &deltas, const Relation &r,
                                 bool strong, const Structure &a,
                                 const std::function<bool(const ExistentialValuation &)> &visit,
                                 const OracleOptions &opts = {});

/// Admissible relations S over the carriers, in enumeration order.
std::vector<Relation> admissible_relations(const VarSet &gammas, const VarSet &deltas,
                                           const Relation &r, bool strong, bool maximal_only);

struct OracleReport {
  bool holds = false;
  /// Validity: the witnessing valuation. Reduction: the valuation refuting it.
  std::optional<ExistentialValuation> valuation;
  /// Validity failures under the last tried valuation are not reported; a
  /// refuted reduction reports the delta-valuation falsifying the goal.
  std::optional<Assignment> pi;
  std::size_t valuations = 0;
};

/// Some admissible e makes every pi satisfy G.
OracleReport check_valid(std::span<const Sequent> g, const Relation &r, const Structure &a,
                         const OracleOptions &opts = {});
/// Some strongly admissible e makes every C-compatible pi satisfy G.
OracleReport check_strong_valid(std::span<const Sequent> g, const Relation &r,
                                const ChoiceCondition &c, const Structure &a,
                                const OracleOptions &opts = {});
/// For every admissible e: G1 valid for all pi implies G0 valid for all pi.
OracleReport check_reduces(std::span<const Sequent> g0, std::span<const Sequent> g1,
                           const Relation &r, const Structure &a, const OracleOptions &opts = {});
/// For every strongly admissible e and C-compatible pi: G1 implies G0.
OracleReport check_strong_reduces(std::span<const Sequent> g0, std::span<const Sequent> g1,
                                  const Relation &r, const ChoiceCondition &c,
                                  const Structure &a, const OracleOptions &opts = {});

inline bool is_r_valid(std::span<const Sequent> g, const Relation &r, const Structure &a,
                       const OracleOptions &opts = {}) {
  return check_valid(g, r, a, opts).holds;
}
inline bool is_strong_valid(std::span<const Sequent> g, const Relation &r,
                            const ChoiceCondition &c, const Structure &a,
                            const OracleOptions &opts = {}) {
  return check_strong_valid(g, r, c, a, opts).holds;
}
inline bool reduces(std::span<const Sequent> g0, std::span<const Sequent> g1, const Relation &r,
                    const Structure &a, const OracleOptions &opts = {}) {
  return check_reduces(g0, g1, r, a, opts).holds;
}
inline bool strong_reduces(std::span<const Sequent> g0, std::span<const Sequent> g1,
                           const Relation &r, const ChoiceCondition &c, const Structure &a,
                           const OracleOptions &opts = {}) {
  return check_strong_reduces(g0, g1, r, c, a, opts).holds;
}

/// `pi` must assign every delta-variable mentioned by C and e.
bool is_compatible(const Assignment &pi, const ExistentialValuation &e,
                   const ChoiceCondition &c, const Structure &a);

/// The smallest structure of size at most `max_size` (in enumeration order)
/// over the symbols of `s` with an assignment of the free variables that
/// falsifies every member.
std::optional<Structure> countermodel(const Sequent &s, std::size_t max_size);

}  // namespace vcp
