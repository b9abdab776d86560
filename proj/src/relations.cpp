#include "vcp/relations.hpp"

#include <algorithm>
#include <functional>

#include "vcp/parser.hpp"

namespace vcp {

namespace {

std::map<Variable, std::vector<Variable>> successors(const Relation &p) {
  std::map<Variable, std::vector<Variable>> out;
  for (const auto &[a, b] : p)
    out[a].push_back(b);
  return out;
}

}  // namespace

Relation compose(const Relation &p, const Relation &q) {
  auto next = successors(q);
  Relation out;
  for (const auto &[a, b] : p) {
    auto it = next.find(b);
    if (it == next.end())
      continue;
    for (const Variable &c : it->second)
      out.emplace(a, c);
  }
  return out;
}

Relation unite(const Relation &p, const Relation &q) {
  Relation out = p;
  out.insert(q.begin(), q.end());
  return out;
}

Relation transitive_closure(const Relation &p) {
  auto next = successors(p);
  Relation out;
  for (const auto &[start, direct] : next) {
    std::vector<Variable> stack(direct.begin(), direct.end());
    VarSet seen;
    while (!stack.empty()) {
      Variable v = std::move(stack.back());
      stack.pop_back();
      if (!seen.insert(v).second)
        continue;
      out.emplace(start, v);
      if (auto it = next.find(v); it != next.end())
        stack.insert(stack.end(), it->second.begin(), it->second.end());
    }
  }
  return out;
}

Relation refl_trans_closure(const Relation &p, const VarSet &carrier) {
  return unite(transitive_closure(p), identity(carrier));
}

Relation reverse(const Relation &p) {
  Relation out;
  for (const auto &[a, b] : p)
    out.emplace(b, a);
  return out;
}

Relation identity(const VarSet &carrier) {
  Relation out;
  for (const Variable &v : carrier)
    out.emplace(v, v);
  return out;
}

Relation product(const VarSet &a, const VarSet &b) {
  Relation out;
  for (const Variable &x : a)
    for (const Variable &y : b)
      out.emplace(x, y);
  return out;
}

VarSet image(const Relation &p, const VarSet &a) {
  VarSet out;
  for (const auto &[x, y] : p)
    if (a.count(x))
      out.insert(y);
  return out;
}

VarSet preimage(const Relation &p, const VarSet &b) {
  VarSet out;
  for (const auto &[x, y] : p)
    if (b.count(y))
      out.insert(x);
  return out;
}

Relation domain_restrict(const Relation &p, const VarSet &a) {
  Relation out;
  for (const auto &e : p)
    if (a.count(e.first))
      out.insert(e);
  return out;
}

VarSet domain(const Relation &p) {
  VarSet out;
  for (const auto &e : p)
    out.insert(e.first);
  return out;
}

VarSet range(const Relation &p) {
  VarSet out;
  for (const auto &e : p)
    out.insert(e.second);
  return out;
}

VarSet field(const Relation &p) {
  VarSet out;
  for (const auto &[a, b] : p) {
    out.insert(a);
    out.insert(b);
  }
  return out;
}

bool subset(const Relation &p, const Relation &q) {
  return std::includes(q.begin(), q.end(), p.begin(), p.end());
}

bool is_irreflexive(const Relation &p) {
  return std::none_of(p.begin(), p.end(), [](const Edge &e) { return e.first == e.second; });
}

bool is_acyclic(const Relation &p) { return !find_cycle(p).has_value(); }

bool is_acyclic_by_closure(const Relation &p) { return is_irreflexive(transitive_closure(p)); }

bool is_acyclic_by_elimination(const Relation &p) {
  std::map<Variable, int> indegree;
  for (const auto &[a, b] : p) {
    indegree.try_emplace(a, 0);
    ++indegree[b];
  }
  auto next = successors(p);
  std::vector<Variable> ready;
  for (const auto &[v, d] : indegree)
    if (d == 0)
      ready.push_back(v);
  std::size_t removed = 0;
  while (!ready.empty()) {
    Variable v = ready.back();
    ready.pop_back();
    ++removed;
    if (auto it = next.find(v); it != next.end())
      for (const Variable &w : it->second)
        if (--indegree[w] == 0)
          ready.push_back(w);
  }
  return removed == indegree.size();
}

std::optional<std::vector<Variable>> find_cycle(const Relation &p) {
  auto next = successors(p);
  enum Color { White, Grey, Black };
  std::map<Variable, Color> color;
  std::vector<Variable> path;
  std::optional<std::vector<Variable>> found;

  std::function<bool(const Variable &)> visit = [&](const Variable &v) {
    color[v] = Grey;
    path.push_back(v);
    if (auto it = next.find(v); it != next.end()) {
      for (const Variable &w : it->second) {
        Color c = color.count(w) ? color[w] : White;
        if (c == Grey) {
          auto from = std::find(path.begin(), path.end(), w);
          found = std::vector<Variable>(from, path.end());
          return true;
        }
        if (c == White && visit(w))
          return true;
      }
    }
    path.pop_back();
    color[v] = Black;
    return false;
  };

  for (const auto &[v, unused] : next)
    if (!color.count(v) && visit(v))
      return found;
  return std::nullopt;
}

UnionTermination check_union_termination(const Relation &a, const Relation &b) {
  if (!is_acyclic(a) || !is_acyclic(b))
    throw Error("termination check requires acyclic relations");
  const Relation ab = unite(a, b);
  const Relation star = refl_trans_closure(ab, field(ab));
  const Relation allowed = unite(a, compose(b, star));
  return {subset(compose(a, b), allowed), is_acyclic(ab)};
}

std::string to_string(const Relation &r) {
  std::string out = "{";
  bool first = true;
  for (const auto &[a, b] : r) {
    out += first ? "" : ", ";
    first = false;
    out += "(" + to_string(a) + "," + to_string(b) + ")";
  }
  return out + "}";
}

Relation parse_relation(std::string_view text) {
  Relation out;
  for (auto &e : parse_variable_pairs(text))
    out.insert(std::move(e));
  return out;
}

// ---------------------------------------------------------------------------

int DependencyGraph::fresh(const Variable &v) {
  labels_.push_back(v);
  succ_.emplace_back();
  return static_cast<int>(labels_.size()) - 1;
}

int DependencyGraph::delta_target(const Variable &v) {
  std::vector<int> &versions = delta_[v];
  if (versions.empty() || !succ_[versions.back()].empty()) {
    const int id = fresh(v);
    versions.push_back(id);
  }
  return versions.back();
}

const std::vector<int> &DependencyGraph::delta_versions(const Variable &v) {
  std::vector<int> &versions = delta_[v];
  if (versions.empty()) {
    const int id = fresh(v);
    versions.push_back(id);
  }
  return versions;
}

int DependencyGraph::gamma_node(const Variable &v) {
  auto it = gamma_.find(v);
  if (it != gamma_.end())
    return it->second;
  int id = fresh(v);
  gamma_.emplace(v, id);
  return id;
}

void DependencyGraph::add_relation_edges(const Relation &r) {
  for (const auto &[x, y] : r) {
    if (!x.is_gamma() || !y.is_delta())
      throw Error("variable condition edge must lead from a gamma- to a delta-variable: (" +
                  to_string(x) + "," + to_string(y) + ")");
    const int from = gamma_node(x);
    const int to = delta_target(y);
    succ_[from].push_back(to);
  }
}

void DependencyGraph::add_subst_edges(const Relation &existential, const Relation &universal,
                                      const VarSet &carrier) {
  for (const auto &[a, b] : existential)
    if (!a.is_gamma() || !b.is_gamma())
      throw Error("existential relation must relate gamma-variables");
  for (const auto &[a, b] : universal)
    if (!a.is_delta() || !b.is_gamma())
      throw Error("universal relation must lead from delta- to gamma-variables");

  std::map<Variable, int> old;
  for (const Variable &x : carrier)
    old[x] = gamma_node(x);
  for (const auto &[y, x] : universal) {
    const int to = old.count(x) ? old[x] : gamma_node(x);
    const std::vector<int> froms = delta_versions(y);
    for (int from : froms)
      succ_[from].push_back(to);
  }

  // Every carrier variable that is not kept by the identity part gets a new,
  // initially empty node.
  for (const Variable &x : carrier)
    if (!existential.count({x, x}))
      gamma_[x] = fresh(x);
  for (const auto &[xp, x] : existential) {
    if (xp == x)
      continue;
    const int target = old.count(x) ? old[x] : gamma_node(x);
    const int from = gamma_node(xp);
    succ_[from].push_back(target);
  }
}

namespace {

// Iterative three-colour DFS over an adjacency list; returns a cycle as node
// ids when one exists.
std::optional<std::vector<int>> cycle_in(const std::vector<std::vector<int>> &succ) {
  const int n = static_cast<int>(succ.size());
  std::vector<int> color(n, 0), parent(n, -1);
  std::vector<std::size_t> cursor(n, 0);
  for (int root = 0; root < n; ++root) {
    if (color[root])
      continue;
    std::vector<int> stack{root};
    color[root] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      if (cursor[v] < succ[v].size()) {
        int w = succ[v][cursor[v]++];
        if (color[w] == 1) {
          std::vector<int> cyc;
          for (int u = v; u != w; u = parent[u])
            cyc.push_back(u);
          cyc.push_back(w);
          std::reverse(cyc.begin(), cyc.end());
          return cyc;
        }
        if (color[w] == 0) {
          color[w] = 1;
          parent[w] = v;
          stack.push_back(w);
        }
      } else {
        color[v] = 2;
        stack.pop_back();
      }
    }
  }
  return std::nullopt;
}

}  // namespace

bool DependencyGraph::has_cycle() const { return cycle_in(succ_).has_value(); }

std::optional<std::vector<Variable>> DependencyGraph::find_cycle() const {
  auto ids = cycle_in(succ_);
  if (!ids)
    return std::nullopt;
  std::vector<Variable> out;
  for (int id : *ids)
    out.push_back(labels_[id]);
  return out;
}

Relation DependencyGraph::reachable_relation() const {
  Relation out;
  for (const auto &[x, start] : gamma_) {
    std::vector<char> seen(succ_.size(), 0);
    std::vector<int> stack{start};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      if (seen[v])
        continue;
      seen[v] = 1;
      if (labels_[v].is_delta())
        out.emplace(x, labels_[v]);
      for (int w : succ_[v])
        stack.push_back(w);
    }
  }
  return out;
}

}  // namespace vcp
