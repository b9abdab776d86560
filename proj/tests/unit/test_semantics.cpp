#include "doctest.h"
#include "support/gen.hpp"
#include "vcp/parser.hpp"
#include "vcp/semantics.hpp"

using namespace vcp;

namespace {
const Variable X = Variable::gamma("x"), U = Variable::gamma("u");
const Variable Y = Variable::delta("y"), V = Variable::delta("v");

std::vector<Sequent> set_of(const std::string &text, Signature &sig) {
  return {parse_sequent(text, sig)};
}
}  // namespace

TEST_CASE("structure text format") {
  Signature sig;
  parse_formula("P(c) & Q(f(c), c)", sig);
  const Structure a = parse_structure("universe a b; P = {a}; Q = id; f(a)=b f(b)=a; c = a", sig);
  CHECK(a.size == 2);
  CHECK(a.holds("P", std::vector<int>{0}));
  CHECK_FALSE(a.holds("P", std::vector<int>{1}));
  CHECK(a.holds("Q", std::vector<int>{1, 1}));
  CHECK(a.apply("f", std::vector<int>{0}) == 1);
  CHECK(parse_structure(to_string(a), sig) == a);
  CHECK_THROWS_AS(parse_structure("universe a b; f(a)=b; c = a", sig), Error);
  CHECK_THROWS_AS(parse_structure("universe a; R = {a}", sig), Error);
}

TEST_CASE("Tarski evaluation") {
  Signature sig;
  const Formula eq = parse_formula("x^e = y^a", sig);
  const Formula none = parse_formula("all y. ~P(y)", sig);
  const Structure a = parse_structure("universe a b; P = {a}", sig);
  CHECK_FALSE(eval(eq, a, {{X, 0}, {Y, 1}}));
  CHECK(eval(eq, a, {{X, 1}, {Y, 1}}));
  CHECK_FALSE(eval(none, a, {}));
  CHECK_THROWS_AS(eval(eq, a, {{X, 0}}), Error);
  // P(x^e), ~P(y^a) holds whenever x^e reads y^a.
  const Sequent eta = parse_sequent("P(x^e), ~P(y^a)", sig);
  for (int y = 0; y < 2; ++y)
    CHECK(eval(eta, a, {{X, y}, {Y, y}}));
}

TEST_CASE("structure enumeration order and counts") {
  const Signature sig = testing::small_signature();
  std::vector<Structure> seen;
  enumerate_structures(sig, 2, [&](const Structure &a) {
    seen.push_back(a);
    return true;
  });
  CHECK(seen.size() == 64);
  CHECK(to_string(seen.front()) == "universe a b; P = {}; Q = {}");
  CHECK(to_string(seen[1]) == "universe a b; P = {}; Q = {(a,a)}");
  CHECK(testing::structures_up_to(sig, 2).size() == 68);
}

TEST_CASE("valuation counts") {
  Signature sig;
  const Structure a = Structure::blank(2, sig);
  OracleOptions all;
  all.maximal_only = false;
  auto count = [&](const VarSet &gs, const VarSet &ds, const Relation &r, bool strong,
                   const OracleOptions &o) {
    return enumerate_valuations(gs, ds, r, strong, a, [](const ExistentialValuation &) { return true; },
                                o);
  };
  // |A| constant tables plus |A|^|A| unary ones.
  CHECK(count({X}, {Y}, {}, false, all) == 2 + 4);
  CHECK(count({X}, {Y}, {{X, Y}}, false, all) == 2);
  CHECK(count({}, {Y, V}, {}, false, all) == 1);
  CHECK(count({X}, {Y}, {}, false, {}) == 4);

  // Closed-form count: each gamma-variable picks a subset D of the allowed
  // deltas and a table of |A|^(|A|^|D|) entries.
  const std::size_t n = 2;
  auto tables = [&](std::size_t allowed) {
    std::size_t total = 0, binom = 1;
    for (std::size_t k = 0; k <= allowed; ++k) {
      std::size_t t = 1;
      for (std::size_t i = 0; i < (std::size_t{1} << k); ++i)
        t *= n;
      total += binom * t;
      binom = binom * (allowed - k) / (k + 1);
    }
    return total;
  };
  CHECK(count({X, U}, {Y, V}, {{X, Y}}, false, all) == tables(1) * tables(2));
  // Strong admissibility removes S = {(y,u),(v,x)} combinations.
  CHECK(count({X, U}, {Y, V}, {{X, Y}, {U, V}}, true, all) <
        count({X, U}, {Y, V}, {{X, Y}, {U, V}}, false, all));
}

TEST_CASE("admissible relations") {
  const auto weak = admissible_relations({X, U}, {Y, V}, {{X, Y}, {U, V}}, false, false);
  const auto strong = admissible_relations({X, U}, {Y, V}, {{X, Y}, {U, V}}, true, false);
  // Pairs (y,x) and (v,u) are excluded; of the four subsets of {(y,u),(v,x)}
  // only the full one is cyclic.
  CHECK(weak.size() == 4);
  CHECK(strong.size() == 3);
  const auto maximal = admissible_relations({X, U}, {Y, V}, {{X, Y}, {U, V}}, true, true);
  CHECK(maximal.size() == 2);
}

TEST_CASE("validity examples") {
  Signature sig;
  const auto g = set_of("x^e = y^a", sig);
  enumerate_structures(sig, 2, [&](const Structure &a) {
    CHECK(is_r_valid(g, {}, a));
    CHECK_FALSE(is_r_valid(g, {{X, Y}}, a));
    return true;
  });
  const auto ground = set_of("P(c), ~P(c)", sig);
  CHECK(is_r_valid(ground, {{X, Y}}, Structure::blank(2, sig)));
}

TEST_CASE("strong validity of the crossed leaf") {
  Signature sig;
  const auto g = set_of("Q(x^e, y^a), ~Q(v^a, u^e)", sig);
  const Relation r{{X, Y}, {U, V}};
  const Structure a = parse_structure("universe a b; Q = id", sig);
  const OracleReport weak = check_valid(g, r, a);
  CHECK(weak.holds);
  REQUIRE(weak.valuation);
  CHECK(weak.valuation->s == Relation{{Y, U}, {V, X}});
  CHECK_FALSE(is_strong_valid(g, r, {}, a));
}

TEST_CASE("compatibility") {
  Signature sig;
  const Formula b = parse_formula("~P(y^a)", sig);
  const Structure a = parse_structure("universe a b; P = {a}", sig);
  ChoiceCondition c;
  c.choices.emplace(Y, b);
  const ExistentialValuation e;
  CHECK(is_compatible({{Y, 0}}, e, c, a));   // ~P(a) is false
  CHECK_FALSE(is_compatible({{Y, 1}}, e, c, a));
  CHECK(is_compatible({{Y, 1}}, e, {}, a));
}

TEST_CASE("strong reduction needs the choice") {
  Signature sig;
  const auto g0 = set_of("P(x^e), all y. ~P(y)", sig);
  const auto g1 = set_of("P(x^e), ~P(y^a)", sig);
  ChoiceCondition c;
  c.choices.emplace(Y, parse_formula("~P(y^a)", sig));
  bool some_fail = false;
  for (const Structure &a : testing::structures_up_to(testing::small_signature(), 2)) {
    some_fail = some_fail || !strong_reduces(g0, g1, {}, {}, a);
    CHECK(strong_reduces(g0, g1, {}, c, a));
    std::vector<Sequent> both = g0;
    both.insert(both.end(), g1.begin(), g1.end());
    CHECK(reduces(g0, both, {{X, Y}}, a));
  }
  CHECK(some_fail);
}

TEST_CASE("oracle checks on random instances") {
  // Weak and strong validity coincide at R = {} and R = V x V; strong implies weak.
  testing::Gen g(41);
  const std::vector<Variable> pool{X, U, Y, V};
  const auto structures = testing::structures_up_to(testing::small_signature(), 2);
  const Relation full{{X, Y}, {X, V}, {U, Y}, {U, V}};
  for (int i = 0; i < 40; ++i) {
    std::vector<Sequent> gs{g.sequent(pool, 2, 2, 1)};
    const Relation r = g.relation({X, U}, {Y, V}, 0.4);
    const Structure &a = structures[g.below(structures.size())];
    CHECK(is_r_valid(gs, {}, a) == is_strong_valid(gs, {}, {}, a));
    CHECK(is_r_valid(gs, full, a) == is_strong_valid(gs, full, {}, a));
    if (is_strong_valid(gs, r, {}, a))
      CHECK(is_r_valid(gs, r, a));
  }
}

TEST_CASE("capacity guard") {
  Signature sig;
  const auto g = set_of("Q(x^e, u^e), Q(y^a, v^a), P(w^a)", sig);
  OracleOptions tiny;
  tiny.capacity = 10;
  CHECK_THROWS_AS(check_valid(g, {}, Structure::blank(3, sig), tiny), CapacityError);
}

TEST_CASE("countermodels") {
  Signature sig;
  CHECK_FALSE(countermodel(Sequent{parse_formula("P(a) | ~P(a)", sig)}, 2));
  const auto cm = countermodel(Sequent{parse_formula("ex x. all y. (x = y)", sig)}, 3);
  REQUIRE(cm);
  CHECK(cm->size == 2);
  CHECK_FALSE(countermodel(Sequent{parse_formula("all y. ex x. (x = y)", sig)}, 3));
}
