#include "doctest.h"
#include "support/gen.hpp"
#include "vcp/parser.hpp"

using namespace vcp;

namespace {
const Variable X = Variable::gamma("x"), Y = Variable::delta("y"), U = Variable::gamma("u");
Formula P(const Term &t) { return Formula::atom("P", {t}); }
Term t(const Variable &v) { return Term::var(v); }
}  // namespace

TEST_CASE("conjugate strips or adds one negation") {
  const Formula a = P(t(X));
  CHECK(conjugate(a) == Formula::negation(a));
  CHECK(conjugate(Formula::negation(a)) == a);
  CHECK(conjugate(Formula::negation(Formula::negation(a))) == Formula::negation(a));
}

TEST_CASE("quantification restriction") {
  const Formula body = Formula::forall("z", Formula::atom("P", {t(Variable::bound("z"))}));
  CHECK_THROWS_AS(Formula::forall("z", body), Error);
  CHECK_NOTHROW(Formula::exists("w", body));
  Signature sig;
  CHECK_THROWS_AS(parse_formula("all z. ex z. P(z)", sig), ParseError);
  CHECK_NOTHROW(parse_formula("(all z. P(z)) & (ex z. P(z))", sig));
}

TEST_CASE("sequents reject loose bound variables") {
  CHECK_THROWS_AS(Sequent{Formula::atom("P", {t(Variable::bound("z"))})}, Error);
}

TEST_CASE("parser reads variable kinds, constants and equality") {
  Signature sig;
  const Formula f = parse_formula("ex x. (x = c & Q(x, y^a) & P(f(u^e)))", sig);
  CHECK(f.gamma_vars() == VarSet{U});
  CHECK(f.delta_vars() == VarSet{Y});
  CHECK(sig.functions().at("c") == 0);
  CHECK(sig.functions().at("f") == 1);
  CHECK(sig.predicates().at("=") == 2);
  CHECK(to_string(parse_formula("P(x^e) -> P(y^a)", sig)) == "~P(x^e) | P(y^a)");
  CHECK_THROWS_AS(parse_formula("P(c, c)", sig), Error);
}

TEST_CASE("parse errors carry an offset") {
  Signature sig;
  try {
    parse_formula("P(x^e) & ", sig);
    FAIL("expected a parse error");
  } catch (const ParseError &e) {
    CHECK(e.position() == 9);
  }
  CHECK_THROWS_AS(parse_formula("", sig), ParseError);
}

TEST_CASE("printing and parsing round-trip on random formulas") {
  testing::Gen g(7);
  const std::vector<Variable> pool{X, U, Y, Variable::delta("v")};
  for (int i = 0; i < 300; ++i) {
    const Formula f = g.formula(pool, 4, 2);
    Signature sig;
    INFO(to_string(f));
    CHECK(parse_formula(to_string(f), sig) == f);
  }
}

TEST_CASE("substitution composition agrees with sequential application") {
  testing::Gen g(11);
  const std::vector<Variable> pool{X, U, Y};
  auto random_subst = [&] {
    Substitution s;
    for (const Variable &v : {X, U})
      if (g.coin())
        s.bind(v, g.coin() ? Term::app("f", {g.term(pool)}) : g.term(pool));
    return s;
  };
  for (int i = 0; i < 200; ++i) {
    const Formula f = g.formula(pool, 3, 1);
    const Substitution a = random_subst(), b = random_subst();
    CHECK(apply(apply(f, a), b) == apply(f, compose(a, b)));
  }
}

TEST_CASE("substitutions only bind gamma-variables") {
  Substitution s;
  CHECK_THROWS_AS(s.bind(Y, t(X)), Error);
  CHECK_THROWS_AS(s.bind(X, t(Variable::bound("z"))), Error);
  s.bind(X, t(X));
  CHECK(s.empty());
  Signature sig;
  CHECK(to_string(parse_substitution("{ x^e -> f(y^a) }", sig)) == "{ x^e -> f(y^a) }");
}

TEST_CASE("quantifier instantiation") {
  Signature sig;
  const Formula f = parse_formula("all z. Q(z, x^e)", sig);
  CHECK(to_string(instantiate_quantifier(f, Y)) == "Q(y^a,x^e)");
  CHECK_THROWS_AS(instantiate_quantifier(f, X), Error);
  CHECK_THROWS_AS(instantiate_quantifier(P(t(X)), Y), Error);
}

TEST_CASE("problem files") {
  const ProblemSet ps = parse_problems("# comment\na : P(c)\nb : ex x. Q(x,c), P(d)\n");
  CHECK(ps.problems.size() == 2);
  CHECK(ps.find("b").sequent.size() == 2);
  CHECK_THROWS_AS(ps.find("c"), Error);
  CHECK_THROWS_AS(parse_problems("a : P(c)\nb : P(c,c)\n"), Error);
}
