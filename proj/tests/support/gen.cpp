#include "gen.hpp"

namespace vcp::testing {

Signature small_signature() {
  Signature sig;
  sig.declare_predicate("P", 1);
  sig.declare_predicate("Q", 2);
  return sig;
}

std::vector<Structure> structures_up_to(const Signature &sig, std::size_t max_size) {
  std::vector<Structure> out;
  for (std::size_t n = 1; n <= max_size; ++n)
    enumerate_structures(sig, n, [&](const Structure &a) {
      out.push_back(a);
      return true;
    });
  return out;
}

Term Gen::term(const std::vector<Variable> &pool) { return Term::var(pick(pool)); }

Formula Gen::atom(const std::vector<Variable> &pool) {
  if (coin())
    return Formula::atom("P", {term(pool)});
  return Formula::atom("Q", {term(pool), term(pool)});
}

Formula Gen::literal(const std::vector<Variable> &pool) {
  Formula a = atom(pool);
  return coin() ? Formula::negation(a) : a;
}

Formula Gen::formula(const std::vector<Variable> &pool, int depth, int quantifiers) {
  int fresh = 0;
  return formula(pool, depth, quantifiers, fresh);
}

Formula Gen::formula(std::vector<Variable> pool, int depth, int &quantifiers, int &fresh) {
  const bool closed = pool.empty();
  if (depth <= 0 || (!closed && coin(0.3)) || (closed && quantifiers <= 0)) {
    if (closed) {
      // Closed atoms need a bound variable.
      std::string b = "b" + std::to_string(fresh++);
      Formula body = Formula::atom("P", {Term::var(Variable::bound(b))});
      return coin() ? Formula::forall(b, body) : Formula::exists(b, body);
    }
    return literal(pool);
  }
  switch (closed ? 3 : below(quantifiers > 0 ? 5 : 3)) {
  case 0:
    return Formula::negation(formula(pool, depth - 1, quantifiers, fresh));
  case 1: {
    Formula l = formula(pool, depth - 1, quantifiers, fresh);
    return Formula::conjunction(l, formula(pool, depth - 1, quantifiers, fresh));
  }
  case 2: {
    Formula l = formula(pool, depth - 1, quantifiers, fresh);
    return Formula::disjunction(l, formula(pool, depth - 1, quantifiers, fresh));
  }
  default: {
    --quantifiers;
    std::string b = "b" + std::to_string(fresh++);
    pool.push_back(Variable::bound(b));
    Formula body = formula(pool, depth - 1, quantifiers, fresh);
    return coin() ? Formula::forall(b, body) : Formula::exists(b, body);
  }
  }
}

Sequent Gen::sequent(const std::vector<Variable> &pool, std::size_t max_len, int depth,
                     int quantifiers) {
  std::vector<Formula> fs;
  const std::size_t n = 1 + below(max_len);
  for (std::size_t i = 0; i < n; ++i)
    fs.push_back(formula(pool, depth, quantifiers));
  return Sequent(std::move(fs));
}

std::vector<Sequent> Gen::sequents(const std::vector<Variable> &pool, std::size_t max_count) {
  std::vector<Sequent> out;
  const std::size_t n = below(max_count + 1);
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(sequent(pool, 2, 1, 0));
  return out;
}

Relation Gen::relation(const std::vector<Variable> &gammas, const std::vector<Variable> &deltas,
                       double p) {
  Relation r;
  for (const Variable &x : gammas)
    for (const Variable &y : deltas)
      if (coin(p))
        r.insert({x, y});
  return r;
}

Relation Gen::relation_on(const std::vector<Variable> &nodes, double p) {
  Relation r;
  for (const Variable &a : nodes)
    for (const Variable &b : nodes)
      if (coin(p))
        r.insert({a, b});
  return r;
}

}  // namespace vcp::testing
