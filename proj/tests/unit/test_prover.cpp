#include "doctest.h"
#include "support/gen.hpp"
#include "vcp/prover.hpp"

using namespace vcp;

namespace {
const Variable X = Variable::gamma("x"), U = Variable::gamma("u");
const Variable Y = Variable::delta("y");
Term t(const Variable &v) { return Term::var(v); }

SearchLimits at(std::size_t k) {
  SearchLimits l;
  l.gamma_multiplicity = k;
  return l;
}

std::string text(const ProofResult &r) { return r.trace(); }
}  // namespace

TEST_CASE("unification") {
  Signature sig;
  const Formula a = parse_formula("Q(x^e, f(u^e))", sig);
  const Formula b = parse_formula("Q(g(y^a), f(x^e))", sig);
  const auto s = unify(a, b);
  REQUIRE(s);
  CHECK(apply(a, *s) == apply(b, *s));
  CHECK(to_string(*s) == "{ u^e -> g(y^a), x^e -> g(y^a) }");

  CHECK_FALSE(unify(t(X), Term::app("f", {t(X)})));  // occur check
  CHECK_FALSE(unify(t(Y), Term::app("c")));           // delta-variables are rigid
  CHECK_FALSE(unify(parse_formula("P(c)", sig), parse_formula("P(d)", sig)));
  CHECK(unify(parse_formula("all z. Q(z, x^e)", sig), parse_formula("all z. Q(z, c)", sig)));
  CHECK_FALSE(unify(parse_formula("all z. Q(z, x^e)", sig), parse_formula("all z. Q(z, z)", sig)));
  CHECK_FALSE(unify(parse_formula("all z. P(z)", sig), parse_formula("all w. P(w)", sig)));
}

TEST_CASE("closing attempts") {
  Signature sig;
  const ProofForest closed = ProofForest(Mode::Weak).hypothesize(parse_sequent("P(y^a), ~P(y^a)", sig));
  const auto s = close_attempt(closed);
  REQUIRE(s);
  CHECK(s->empty());

  // Backtracking: the first pair of the first leaf would block the second leaf.
  const ProofForest two = ProofForest(Mode::Weak)
                              .hypothesize(parse_sequent("P(x^e), P(c), ~P(d), ~P(c)", sig))
                              .hypothesize(parse_sequent("Q(x^e, x^e), ~Q(c, c)", sig));
  const auto both = close_attempt(two);
  REQUIRE(both);
  CHECK((*both)(X) == Term::app("c"));
}

TEST_CASE("search on the sample problems") {
  Signature sig;
  const Formula lib = parse_formula("ex x. (P(x) | all y. ~P(y))", sig);
  const ProofResult strong = search(lib, Mode::Strong, at(1));
  REQUIRE(strong.proved);
  CHECK(strong.closing == Substitution{{X, t(Y)}});
  CHECK_FALSE(search(lib, Mode::Weak, at(1)).proved);
  CHECK(search(lib, Mode::Weak, at(2)).proved);

  const Formula eq = parse_formula("ex x. all y. (x = y)", sig);
  for (Mode m : {Mode::Weak, Mode::Strong}) {
    const ProofResult r = search(eq, m, at(2));
    CHECK_FALSE(r.proved);
    CHECK(r.countermodel);
    CHECK(r.reason.find("multiplicity 2") != std::string::npos);
  }

  SearchLimits tight = at(2);
  tight.node_budget = 3;
  const ProofResult r = search(lib, Mode::Weak, tight);
  CHECK_FALSE(r.proved);
  CHECK(r.reason.find("budget") != std::string::npos);
}

TEST_CASE("traces of proofs replay closed") {
  const ProblemSet ps = parse_problems("lib : ex x. (P(x) | all y. ~P(y))\n");
  const ProofResult r = search(ps.find("lib").sequent, Mode::Strong, at(1), "lib");
  REQUIRE(r.proved);
  CHECK(text(r) ==
        "mode strong\nhyp lib\nexpand 0#0 gamma_ex 0 x^e\nexpand 0#0 alpha_or 0 -\n"
        "expand 0#0 delta_all 1 y^a\ninst { x^e -> y^a }\nqed 0\n");
  CHECK(replay(text(r), ps).is_closed());
}

TEST_CASE("answers") {
  Signature sig;
  const Formula w = parse_formula("all y. ex x. (~P(y) | P(x))", sig);
  for (Mode m : {Mode::Weak, Mode::Strong}) {
    const ProofResult r = search(w, m, at(1));
    REQUIRE(r.proved);
    const auto answers = extract_answers(r, {X});
    REQUIRE(answers.size() == 1);
    CHECK(answers[0].value == t(Y));
    CHECK(answers[0].notes.size() == (m == Mode::Strong ? 2u : 0u));
    CHECK(extract_answers(r, {}).empty());
  }
  // Equality is not reasoned about, so the reflexive witness goes unproven.
  CHECK_FALSE(search(parse_formula("all y. ex x. (x = y)", sig), Mode::Strong, at(2)).proved);
}

TEST_CASE("random formulas: proofs are sound and monotone in the multiplicity") {
  testing::Gen g(97);
  const auto structures = testing::structures_up_to(testing::small_signature(), 2);
  std::size_t proved = 0;
  for (int i = 0; i < 150; ++i) {
    const Formula f = g.formula({}, 4, 2);
    for (Mode m : {Mode::Weak, Mode::Strong}) {
      SearchLimits l = at(1);
      l.countermodel_size = 0;
      const ProofResult r1 = search(f, m, l);
      l.gamma_multiplicity = 2;
      const ProofResult r2 = search(f, m, l);
      INFO(to_string(f));
      CHECK((!r1.proved || r2.proved));
      if (!r2.proved)
        continue;
      ++proved;
      CHECK_FALSE(countermodel(Sequent{f}, 2));
      CHECK(replay(r2.trace(), ProblemSet{}).is_closed());
      const std::vector<Sequent> goal{r2.forest->entries()[0].root};
      for (const Structure &a : structures) {
        CHECK(is_r_valid(goal, r2.forest->vc(), a));
        if (m == Mode::Strong)
          CHECK(is_strong_valid(goal, r2.forest->vc(), r2.forest->choice(), a));
      }
    }
  }
  CHECK(proved > 20);
}
