#include "doctest.h"
#include "support/gen.hpp"
#include "vcp/relations.hpp"
#include "vcp/varcond.hpp"

using namespace vcp;

namespace {

std::vector<Variable> nodes(int n) {
  std::vector<Variable> out;
  for (int i = 0; i < n; ++i)
    out.push_back(Variable::delta("n" + std::to_string(i)));
  return out;
}

// Every relation on `ns`, as bitmasks over the n*n pairs.
std::vector<Relation> all_relations(const std::vector<Variable> &ns) {
  std::vector<Relation> out;
  const std::size_t n = ns.size(), bits = n * n;
  for (std::size_t mask = 0; mask < (std::size_t{1} << bits); ++mask) {
    Relation r;
    for (std::size_t b = 0; b < bits; ++b)
      if (mask >> b & 1)
        r.insert({ns[b / n], ns[b % n]});
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

TEST_CASE("composition runs left to right") {
  const auto n = nodes(3);
  const Relation p{{n[0], n[1]}}, q{{n[1], n[2]}};
  CHECK(compose(p, q) == Relation{{n[0], n[2]}});
  CHECK(compose(q, p).empty());
  CHECK(image(p, {n[0]}) == VarSet{n[1]});
  CHECK(preimage(p, {n[1]}) == VarSet{n[0]});
}

TEST_CASE("closures") {
  const auto n = nodes(3);
  const Relation p{{n[0], n[1]}, {n[1], n[2]}};
  CHECK(transitive_closure(p) == Relation{{n[0], n[1]}, {n[1], n[2]}, {n[0], n[2]}});
  const Relation star = refl_trans_closure(p, {n[0], n[1], n[2]});
  CHECK(star.size() == 6);
  CHECK(subset(identity({n[0], n[1], n[2]}), star));
}

TEST_CASE("the three acyclicity checks agree and cycles are genuine") {
  testing::Gen g(3);
  const auto ns = nodes(5);
  for (int i = 0; i < 2000; ++i) {
    const Relation r = g.relation_on(ns, 0.12 + 0.1 * g.below(3));
    const bool a = is_acyclic(r);
    CHECK(a == is_acyclic_by_closure(r));
    CHECK(a == is_acyclic_by_elimination(r));
    const auto c = find_cycle(r);
    CHECK(c.has_value() == !a);
    if (c)
      for (std::size_t k = 0; k < c->size(); ++k)
        CHECK(r.count({(*c)[k], (*c)[(k + 1) % c->size()]}));
  }
}

TEST_CASE("transitive closure is the least transitive superset") {
  testing::Gen g(5);
  const auto ns = nodes(4);
  for (int i = 0; i < 500; ++i) {
    const Relation r = g.relation_on(ns, 0.25);
    const Relation c = transitive_closure(r);
    CHECK(subset(r, c));
    CHECK(subset(compose(c, c), c));
    CHECK(transitive_closure(c) == c);
  }
}

TEST_CASE("union termination, exhaustively on three nodes") {
  const auto ns = nodes(3);
  std::vector<Relation> acyclic;
  for (const Relation &r : all_relations(ns))
    if (is_acyclic(r))
      acyclic.push_back(r);
  CHECK(acyclic.size() == 25);  // labelled DAGs on three nodes
  std::size_t with_precondition = 0;
  for (const Relation &a : acyclic)
    for (const Relation &b : acyclic) {
      const UnionTermination res = check_union_termination(a, b);
      const bool union_acyclic = is_acyclic_by_closure(unite(a, b));
      CHECK(res.union_terminating == union_acyclic);
      if (res.precondition_holds) {
        ++with_precondition;
        CHECK(union_acyclic);
      }
    }
  CHECK(with_precondition > 0);
  CHECK_THROWS_AS(check_union_termination({{ns[0], ns[0]}}, {}), Error);
}

TEST_CASE("union termination needs its precondition") {
  const auto n = nodes(2);
  const Relation a{{n[0], n[1]}}, b{{n[1], n[0]}};
  const UnionTermination res = check_union_termination(a, b);
  CHECK_FALSE(res.precondition_holds);
  CHECK_FALSE(res.union_terminating);
}

TEST_CASE("relation text format") {
  const Relation r = parse_relation("{(x^e,y^a), (u^e, v^a)}");
  CHECK(r.size() == 2);
  CHECK(parse_relation(to_string(r)) == r);
  CHECK(parse_relation("{}").empty());
}

TEST_CASE("dependency graph follows strong updates") {
  // Random sequences of hypotheses and instantiations over three gamma- and
  // three delta-variables; the graph must agree with the closure computation.
  testing::Gen g(17);
  const std::vector<Variable> gs{Variable::gamma("x"), Variable::gamma("u"), Variable::gamma("w")};
  const std::vector<Variable> ds{Variable::delta("y"), Variable::delta("v"), Variable::delta("z")};
  std::vector<Variable> pool = gs;
  pool.insert(pool.end(), ds.begin(), ds.end());
  std::size_t rejected = 0;
  for (int run = 0; run < 300; ++run) {
    DependencyGraph graph;
    Relation r;
    for (int step = 0; step < 4; ++step) {
      if (g.coin(0.4)) {
        const Relation extra = g.relation(gs, ds, 0.2);
        graph.add_relation_edges(extra);
        r = unite(r, extra);
      } else {
        Substitution s;
        const Variable x = g.pick(gs);
        const Variable v = g.pick(pool);
        if (v == x)
          continue;
        s.bind(x, Term::var(v));
        const VarSet relevant = relevant_for(s, r);
        const SubstAnalysis a = analyze(s, relevant);
        DependencyGraph next = graph;
        next.add_subst_edges(a.existential, a.universal, relevant);
        const bool admissible = is_strong_admissible(s, r);
        REQUIRE(next.has_cycle() == !admissible);
        if (!admissible) {
          ++rejected;
          continue;
        }
        r = strong_update(s, r);
        graph = next;
      }
      INFO("run " << run << " step " << step);
      INFO("graph " << to_string(graph.reachable_relation()) << " closure " << to_string(r));
      REQUIRE(graph.reachable_relation() == r);
    }
  }
  CHECK(rejected > 0);
}

TEST_CASE("dependency graph finds the cycle of the crossed substitution") {
  const Variable x = Variable::gamma("x"), u = Variable::gamma("u");
  const Variable y = Variable::delta("y"), v = Variable::delta("v");
  const Relation r{{x, y}, {u, v}};
  const Substitution s{{x, Term::var(v)}, {u, Term::var(y)}};
  DependencyGraph graph;
  graph.add_relation_edges(r);
  CHECK_FALSE(graph.has_cycle());
  const SubstAnalysis a = analyze(s, relevant_for(s, r));
  graph.add_subst_edges(a.existential, a.universal, relevant_for(s, r));
  CHECK(graph.has_cycle());
  CHECK(graph.find_cycle()->size() == 4);
  CHECK_THROWS_AS(graph.add_relation_edges({{y, x}}), Error);
}
