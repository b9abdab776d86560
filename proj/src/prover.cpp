#include "vcp/prover.hpp"

#include <map>

namespace vcp {

// ---------------------------------------------------------------------------
// Unification

namespace {

bool unify_terms(const Term &a0, const Term &b0, Substitution &s) {
  const Term a = apply(a0, s);
  const Term b = apply(b0, s);
  if (a == b)
    return true;
  auto bind = [&](const Variable &x, const Term &t) {
    if (t.mentions(x) || !t.bound_vars().empty())
      return false;
    Substitution step;
    step.bind(x, t);
    s = compose(s, step);
    return true;
  };
  if (a.is_var() && a.variable().is_gamma())
    return bind(a.variable(), b);
  if (b.is_var() && b.variable().is_gamma())
    return bind(b.variable(), a);
  if (a.is_var() || b.is_var())
    return false;  // distinct rigid variables, or a variable against an application
  if (a.function() != b.function() || a.args().size() != b.args().size())
    return false;
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (!unify_terms(a.args()[i], b.args()[i], s))
      return false;
  return true;
}

bool unify_formulas(const Formula &a, const Formula &b, Substitution &s) {
  if (a.connective() != b.connective())
    return false;
  switch (a.connective()) {
  case Connective::Atom:
    if (a.predicate() != b.predicate() || a.terms().size() != b.terms().size())
      return false;
    for (std::size_t i = 0; i < a.terms().size(); ++i)
      if (!unify_terms(a.terms()[i], b.terms()[i], s))
        return false;
    return true;
  case Connective::Not:
    return unify_formulas(a.operand(), b.operand(), s);
  case Connective::And:
  case Connective::Or:
    return unify_formulas(a.left(), b.left(), s) && unify_formulas(a.right(), b.right(), s);
  case Connective::Forall:
  case Connective::Exists:
    return a.bound() == b.bound() && unify_formulas(a.body(), b.body(), s);
  }
  return false;
}

}  // namespace

std::optional<Substitution> unify(const Term &a, const Term &b, const Substitution &current) {
  Substitution s = current;
  if (unify_terms(a, b, s))
    return s;
  return std::nullopt;
}

std::optional<Substitution> unify(const Formula &a, const Formula &b,
                                  const Substitution &current) {
  Substitution s = current;
  if (unify_formulas(a, b, s))
    return s;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Closing

namespace {

struct Closer {
  std::vector<Sequent> leaves;
  const Relation &vc;
  bool strong;
  std::size_t budget;
  std::size_t attempts = 0;

  bool admissible(const Substitution &s) const {
    return strong ? is_strong_admissible(s, vc) : is_weak_admissible(s, vc);
  }

  std::optional<Substitution> solve(std::size_t i, const Substitution &s) {
    if (i == leaves.size())
      return s;
    const Sequent leaf = apply(leaves[i], s);
    if (is_axiom(leaf))
      return solve(i + 1, s);
    for (std::size_t a = 0; a < leaf.size(); ++a)
      for (std::size_t b = a + 1; b < leaf.size(); ++b)
        for (auto [pos, neg] : {std::pair{a, b}, std::pair{b, a}}) {
          if (!leaf[neg].is_not())
            continue;
          if (++attempts > budget)
            return std::nullopt;
          auto next = unify(leaf[pos], leaf[neg].operand(), s);
          if (!next || !admissible(*next))
            continue;
          if (auto done = solve(i + 1, *next))
            return done;
          if (attempts > budget)
            return std::nullopt;
        }
    return std::nullopt;
  }
};

}  // namespace

std::optional<Substitution> close_attempt(const ProofForest &forest,
                                          std::size_t unification_budget) {
  Closer c{{}, forest.vc(), forest.mode() == Mode::Strong, unification_budget};
  for (const ForestEntry &e : forest.entries())
    for (const Sequent &s : e.tree.open_sequents())
      c.leaves.push_back(s);
  return c.solve(0, {});
}

// ---------------------------------------------------------------------------
// Search

namespace {

// Mirrors the leaves of tree 0, recording how often each gamma-formula has
// been instantiated on the branch.
struct LeafInfo {
  std::map<Formula, std::size_t> gamma_count;
};

class Search {
public:
  Search(ProofForest forest, const SearchLimits &limits)
      : forest_(std::move(forest)), limits_(limits), info_(1) {}

  ProofForest &forest() { return forest_; }

  // Applies alpha-, then delta-, then beta-steps until none is left.
  void saturate() {
    static const std::vector<std::vector<RuleTag>> tiers = {
        {RuleTag::AlphaOr, RuleTag::AlphaNand, RuleTag::AlphaNotNot},
        {RuleTag::DeltaAll, RuleTag::DeltaNex},
        {RuleTag::BetaAnd, RuleTag::BetaNor},
    };
    for (bool progress = true; progress;) {
      progress = false;
      for (const auto &tier : tiers) {
        if (apply_first(tier)) {
          progress = true;
          break;
        }
      }
    }
  }

  // One gamma-round: every gamma-formula with fewer than `round` instances
  // on its branch is instantiated once more.
  void gamma_round(std::size_t round) {
    for (bool progress = true; progress;) {
      progress = false;
      const ProofTree &tree = forest_.entries()[0].tree;
      for (std::size_t leaf = 0; leaf < tree.leaf_count() && !progress; ++leaf) {
        const Sequent &s = tree.leaf(leaf);
        if (is_axiom(s))
          continue;
        for (std::size_t i = 0; i < s.size(); ++i) {
          auto tag = rule_for(s[i]);
          if (tag != RuleTag::GammaEx && tag != RuleTag::GammaNall)
            continue;
          if (info_[leaf].gamma_count[s[i]] >= round)
            continue;
          expand(leaf, i, *tag);
          progress = true;
          break;
        }
      }
    }
  }

private:
  bool apply_first(const std::vector<RuleTag> &tags) {
    const ProofTree &tree = forest_.entries()[0].tree;
    for (std::size_t leaf = 0; leaf < tree.leaf_count(); ++leaf) {
      const Sequent &s = tree.leaf(leaf);
      if (is_axiom(s))
        continue;
      for (std::size_t i = 0; i < s.size(); ++i) {
        auto tag = rule_for(s[i]);
        if (!tag)
          continue;
        for (RuleTag t : tags)
          if (*tag == t) {
            expand(leaf, i, t);
            return true;
          }
      }
    }
    return false;
  }

  void expand(std::size_t leaf, std::size_t index, RuleTag tag) {
    const Formula principal = forest_.entries()[0].tree.leaf(leaf)[index];
    RuleInstance r{tag, 0, leaf, index, std::nullopt, std::nullopt};
    forest_ = forest_.expand(r);
    const std::size_t kids = (tag == RuleTag::BetaAnd || tag == RuleTag::BetaNor) ? 2 : 1;
    LeafInfo parent = info_[leaf];
    if (tag == RuleTag::GammaEx || tag == RuleTag::GammaNall)
      ++parent.gamma_count[principal];
    info_.erase(info_.begin() + static_cast<long>(leaf));
    info_.insert(info_.begin() + static_cast<long>(leaf), kids, parent);
    if (forest_.entries()[0].tree.node_count() > limits_.node_budget)
      throw BudgetExceeded{};
  }

public:
  struct BudgetExceeded {};

private:
  ProofForest forest_;
  SearchLimits limits_;
  std::vector<LeafInfo> info_;
};

}  // namespace

std::string ProofResult::trace() const {
  std::string out;
  if (forest)
    for (const std::string &line : forest->trace())
      out += line + "\n";
  return out;
}

ProofResult search(const Sequent &goal, Mode mode, const SearchLimits &limits,
                   const std::string &name) {
  ProofResult result;
  Search s(ProofForest(mode).hypothesize(goal, {}, name), limits);
  auto try_close = [&]() {
    auto sigma = close_attempt(s.forest(), limits.unification_budget);
    if (!sigma)
      return false;
    result.closing = *sigma;
    result.forest = s.forest().instantiate(*sigma).qed(0);
    result.proved = true;
    return true;
  };
  try {
    s.saturate();
    if (try_close())
      return result;
    for (std::size_t round = 1; round <= limits.gamma_multiplicity; ++round) {
      s.gamma_round(round);
      s.saturate();
      if (try_close())
        return result;
    }
    result.reason = "no admissible closing substitution with gamma-multiplicity " +
                    std::to_string(limits.gamma_multiplicity);
  } catch (const Search::BudgetExceeded &) {
    result.reason = "node budget of " + std::to_string(limits.node_budget) + " exhausted";
  }
  result.forest = s.forest();
  if (limits.countermodel_size > 0)
    result.countermodel = countermodel(goal, limits.countermodel_size);
  return result;
}

ProofResult search(const Formula &goal, Mode mode, const SearchLimits &limits) {
  return search(Sequent{goal}, mode, limits);
}

// ---------------------------------------------------------------------------
// Answers

std::vector<Answer> extract_answers(const ProofResult &result, const VarSet &query) {
  std::vector<Answer> out;
  if (!result.proved)
    return out;
  const ChoiceCondition &cc = result.forest->choice();
  for (const Variable &x : query) {
    Answer a{x, result.closing(x), {}};
    if (result.forest->mode() == Mode::Strong) {
      for (const Variable &y : a.value.delta_vars()) {
        auto it = cc.choices.find(y);
        if (it == cc.choices.end())
          continue;
        a.notes.push_back(epsilon_reading(y, it->second));
        a.notes.push_back("choose " + to_string(y) + " such that " + to_string(it->second) +
                          " is false, if possible");
      }
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::string format_answers(const std::vector<Answer> &answers) {
  std::string out;
  for (const Answer &a : answers) {
    out += to_string(a.query) + " := " + to_string(a.value) + "\n";
    for (const std::string &n : a.notes)
      out += "  " + n + "\n";
  }
  return out;
}

}  // namespace vcp
