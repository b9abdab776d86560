#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "vcp/relations.hpp"
#include "vcp/semantics.hpp"
#include "vcp/syntax.hpp"

namespace vcp::testing {

/// P/1 and Q/2.
Signature small_signature();

/// Every structure of size 1 .. max_size over `sig`.
std::vector<Structure> structures_up_to(const Signature &sig, std::size_t max_size);

// Seeded generator of small syntax. Formulas use the predicates of
// small_signature() and the variables of the pool given to each call.
class Gen {
public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  template <class T> const T &pick(const std::vector<T> &v) { return v[below(v.size())]; }

  Term term(const std::vector<Variable> &pool);
  Formula atom(const std::vector<Variable> &pool);
  Formula literal(const std::vector<Variable> &pool);
  /// Connectives and, at most `quantifiers` times, a quantifier.
  Formula formula(const std::vector<Variable> &pool, int depth, int quantifiers);
  Sequent sequent(const std::vector<Variable> &pool, std::size_t max_len, int depth,
                  int quantifiers);
  std::vector<Sequent> sequents(const std::vector<Variable> &pool, std::size_t max_count);
  /// Each pair of gammas x deltas with probability p.
  Relation relation(const std::vector<Variable> &gammas, const std::vector<Variable> &deltas,
                    double p);
  Relation relation_on(const std::vector<Variable> &nodes, double p);

  std::mt19937_64 &engine() { return rng_; }

private:
  Formula formula(std::vector<Variable> pool, int depth, int &quantifiers, int &fresh);
  std::mt19937_64 rng_;
};

}  // namespace vcp::testing
