#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vcp/syntax.hpp"

namespace vcp {

using Edge = std::pair<Variable, Variable>;
using Relation = std::set<Edge>;

// Composition reads left to right: (a,c) in compose(P,Q) iff (a,b) in P and
// (b,c) in Q for some b.
Relation compose(const Relation &p, const Relation &q);
Relation unite(const Relation &p, const Relation &q);
Relation transitive_closure(const Relation &p);
/// Transitive closure plus the identity on `carrier` (and nowhere else).
Relation refl_trans_closure(const Relation &p, const VarSet &carrier);
Relation reverse(const Relation &p);
Relation identity(const VarSet &carrier);
Relation product(const VarSet &a, const VarSet &b);
/// {b | (a,b) in P, a in A}
VarSet image(const Relation &p, const VarSet &a);
/// {a | (a,b) in P, b in B}
VarSet preimage(const Relation &p, const VarSet &b);
/// Pairs whose first component lies in A.
Relation domain_restrict(const Relation &p, const VarSet &a);
VarSet domain(const Relation &p);
VarSet range(const Relation &p);
VarSet field(const Relation &p);
bool subset(const Relation &p, const Relation &q);

bool is_irreflexive(const Relation &p);
/// Depth-first search for a back edge.
bool is_acyclic(const Relation &p);
/// Irreflexivity of the transitive closure.
bool is_acyclic_by_closure(const Relation &p);
/// Repeatedly removes nodes without predecessors.
bool is_acyclic_by_elimination(const Relation &p);
/// Nodes v0 .. vn-1 with edges vi -> vi+1 and vn-1 -> v0.
std::optional<std::vector<Variable>> find_cycle(const Relation &p);

struct UnionTermination {
  bool precondition_holds;  // A o B is contained in A u B o (A u B)*
  bool union_terminating;
};

/// Throws Error if A or B has a cycle.
UnionTermination check_union_termination(const Relation &a, const Relation &b);

std::string to_string(const Relation &r);
Relation parse_relation(std::string_view text);

// Incremental cycle check for the strong variable condition. Gamma-variables
// are versioned: an instantiation gives every replaced gamma-variable a new
// node, and edges from the new nodes of the variables occurring in sigma(x)
// to the old node of x. Paths from current gamma-nodes to delta-nodes then
// spell out the strong update of R, and cycles are cycles of (U o R).
// Delta-nodes are versioned too: a relation edge into a delta-variable whose
// node already carries substitution edges goes to a new node, so it does not
// inherit paths that belonged to an earlier update.
class DependencyGraph {
public:
  /// Pairs must be (gamma, delta).
  void add_relation_edges(const Relation &r);
  /// `existential` pairs are (gamma, gamma), `universal` pairs (delta, gamma);
  /// `carrier` lists the gamma-variables the pairs were computed over.
  void add_subst_edges(const Relation &existential, const Relation &universal,
                       const VarSet &carrier);

  bool has_cycle() const;
  /// Variables along a cycle, gamma-nodes named by their variable.
  std::optional<std::vector<Variable>> find_cycle() const;
  /// Gamma/delta pairs connected by a path from a current gamma-node.
  Relation reachable_relation() const;

  std::size_t node_count() const { return labels_.size(); }

private:
  int delta_target(const Variable &v);
  const std::vector<int> &delta_versions(const Variable &v);
  int gamma_node(const Variable &v);
  int fresh(const Variable &v);

  std::vector<Variable> labels_;
  std::vector<std::vector<int>> succ_;
  std::map<Variable, std::vector<int>> delta_;
  std::map<Variable, int> gamma_;  // current version
};

}  // namespace vcp
