#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vcp/choice.hpp"
#include "vcp/parser.hpp"
#include "vcp/relations.hpp"
#include "vcp/syntax.hpp"
#include "vcp/varcond.hpp"

namespace vcp {

// In weak mode the variable condition is updated by E o R and delta-steps add
// every gamma-variable of the sequent as a predecessor. Strong mode keeps a
// choice-condition, uses the strong updates and liberalized delta-steps.
enum class Mode { Weak, Strong };

enum class RuleTag {
  AlphaOr,      // A | B
  AlphaNand,    // ~(A & B)
  AlphaNotNot,  // ~~A
  BetaAnd,      // A & B
  BetaNor,      // ~(A | B)
  GammaEx,      // ex x. A
  GammaNall,    // ~all x. A
  DeltaAll,     // all x. A
  DeltaNex,     // ~ex x. A
};

enum class DeltaVariant { Weak, Liberalized };

struct RuleInstance {
  RuleTag tag;
  std::size_t tree = 0;
  std::size_t leaf = 0;   // position among the tree's leaves, left to right
  std::size_t index = 0;  // principal formula within the leaf sequent
  /// The introduced variable of a gamma- or delta-step; chosen fresh when
  /// absent.
  std::optional<Variable> var;
  /// Defaults to the variant belonging to the forest's mode.
  std::optional<DeltaVariant> variant;
};

std::string rule_name(RuleTag tag);
std::optional<RuleTag> parse_rule_name(const std::string &name);
/// The rule whose pattern matches `f`, if any.
std::optional<RuleTag> rule_for(const Formula &f);

/// Some member is the conjugate of another member.
bool is_axiom(const Sequent &s);

/// Persistent proof tree. Expanding a leaf copies only the path to it.
class ProofTree {
public:
  explicit ProofTree(Sequent root);

  const Sequent &root_label() const;
  /// Labels of the leaves, left to right.
  std::vector<Sequent> open_sequents() const;
  std::size_t leaf_count() const;
  const Sequent &leaf(std::size_t i) const;
  bool is_closed() const;
  std::size_t node_count() const;

  ProofTree expand_leaf(std::size_t i, std::vector<Sequent> children, std::string rule) const;
  ProofTree apply(const Substitution &s) const;

  /// Indented rendering, one node per line.
  std::string render() const;

  struct Node;

private:
  explicit ProofTree(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

struct ForestEntry {
  std::string name;
  Sequent root;
  ProofTree tree;
};

/// Proof forest with its variable condition and, in strong mode, its
/// choice-condition. Values are immutable; each step returns a new forest.
/// Every step is appended to a replayable trace.
class ProofForest {
public:
  explicit ProofForest(Mode mode);

  Mode mode() const { return mode_; }
  const std::vector<ForestEntry> &entries() const { return entries_; }
  const Relation &vc() const { return vc_; }
  const ChoiceCondition &choice() const { return choice_; }
  StrongState state() const { return {vc_, choice_}; }
  const std::vector<std::string> &trace() const { return trace_; }

  /// Adds a tree consisting of `s` alone. In strong mode `extra` o < must be
  /// contained in R u extra.
  ProofForest hypothesize(Sequent s, const Relation &extra = {}, std::string name = {}) const;
  ProofForest expand(const RuleInstance &rule) const;
  /// Applies sigma everywhere and updates R (and C, <). Throws
  /// InadmissibleError with the offending cycle.
  ProofForest instantiate(const Substitution &sigma) const;

  bool is_closed(std::size_t tree) const;
  bool is_closed() const;
  /// Appends `qed <tree>`; throws unless the tree is closed.
  ProofForest qed(std::size_t tree) const;

  /// Every variable ever mentioned by this forest.
  const VarSet &used() const { return used_; }
  /// Fresh variable of the given kind derived from `base`.
  Variable fresh(const std::string &base, VarKind kind) const;

  std::string render() const;

private:
  void note(const Sequent &s);
  void note(const Relation &r);

  Mode mode_;
  std::vector<ForestEntry> entries_;
  Relation vc_;
  ChoiceCondition choice_;
  VarSet used_;
  std::vector<std::string> trace_;
  // Strong mode only: incremental cycle check, cross-checked against the
  // closure computation on every instantiation.
  std::shared_ptr<const DependencyGraph> graph_;
};

/// Replaces each delta-variable y in dom sigma by the gamma-variable
/// sigma(y) and returns the root with the variable condition under which it
/// remains strongly valid without choice-condition.
std::pair<Sequent, Relation> externalize_choices(const Sequent &root, const StrongState &state,
                                                 const std::map<Variable, Variable> &sigma);

/// Rebuilds a forest from a trace. Problems referred to by `hyp` are looked
/// up in `problems`. Throws Error naming the failing line.
ProofForest replay(const std::string &trace, const ProblemSet &problems);

}  // namespace vcp
