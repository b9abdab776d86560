#include "vcp/calculus.hpp"

#include <sstream>
#include <stdexcept>

namespace vcp {

namespace {

const std::pair<RuleTag, const char *> rule_names[] = {
    {RuleTag::AlphaOr, "alpha_or"},     {RuleTag::AlphaNand, "alpha_nand"},
    {RuleTag::AlphaNotNot, "alpha_notnot"}, {RuleTag::BetaAnd, "beta_and"},
    {RuleTag::BetaNor, "beta_nor"},     {RuleTag::GammaEx, "gamma_ex"},
    {RuleTag::GammaNall, "gamma_nall"}, {RuleTag::DeltaAll, "delta_all"},
    {RuleTag::DeltaNex, "delta_nex"},
};

bool is_delta_rule(RuleTag t) { return t == RuleTag::DeltaAll || t == RuleTag::DeltaNex; }

}  // namespace

std::string rule_name(RuleTag tag) {
  for (const auto &[t, n] : rule_names)
    if (t == tag)
      return n;
  return "?";
}

std::optional<RuleTag> parse_rule_name(const std::string &name) {
  for (const auto &[t, n] : rule_names)
    if (name == n)
      return t;
  return std::nullopt;
}

std::optional<RuleTag> rule_for(const Formula &f) {
  switch (f.connective()) {
  case Connective::Or:
    return RuleTag::AlphaOr;
  case Connective::And:
    return RuleTag::BetaAnd;
  case Connective::Exists:
    return RuleTag::GammaEx;
  case Connective::Forall:
    return RuleTag::DeltaAll;
  case Connective::Atom:
    return std::nullopt;
  case Connective::Not:
    break;
  }
  switch (f.operand().connective()) {
  case Connective::And:
    return RuleTag::AlphaNand;
  case Connective::Not:
    return RuleTag::AlphaNotNot;
  case Connective::Or:
    return RuleTag::BetaNor;
  case Connective::Forall:
    return RuleTag::GammaNall;
  case Connective::Exists:
    return RuleTag::DeltaNex;
  case Connective::Atom:
    break;
  }
  return std::nullopt;
}

bool is_axiom(const Sequent &s) {
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      if (i != j && s[j].is_not() && s[j].operand() == s[i])
        return true;
  return false;
}

// ---------------------------------------------------------------------------
// Proof trees

struct ProofTree::Node {
  Sequent label;
  std::vector<std::shared_ptr<const Node>> kids;
  bool expanded = false;
  std::string rule;
  std::size_t leaves = 1;
  std::size_t nodes = 1;
};

ProofTree::ProofTree(Sequent root) {
  auto n = std::make_shared<Node>();
  n->label = std::move(root);
  root_ = std::move(n);
}

const Sequent &ProofTree::root_label() const { return root_->label; }
std::size_t ProofTree::leaf_count() const { return root_->leaves; }
std::size_t ProofTree::node_count() const { return root_->nodes; }

namespace {

void collect_leaves(const ProofTree::Node &n, std::vector<Sequent> &out);

}  // namespace

std::vector<Sequent> ProofTree::open_sequents() const {
  std::vector<Sequent> out;
  collect_leaves(*root_, out);
  return out;
}

namespace {

void collect_leaves(const ProofTree::Node &n, std::vector<Sequent> &out) {
  if (!n.expanded) {
    out.push_back(n.label);
    return;
  }
  for (const auto &k : n.kids)
    collect_leaves(*k, out);
}

const ProofTree::Node &find_leaf(const ProofTree::Node &n, std::size_t i) {
  if (!n.expanded)
    return n;
  for (const auto &k : n.kids) {
    if (i < k->leaves)
      return find_leaf(*k, i);
    i -= k->leaves;
  }
  throw Error("leaf index out of range");
}

std::shared_ptr<const ProofTree::Node> expand_at(const std::shared_ptr<const ProofTree::Node> &n,
                                                 std::size_t i, std::vector<Sequent> &children,
                                                 const std::string &rule) {
  auto copy = std::make_shared<ProofTree::Node>(*n);
  if (!n->expanded) {
    copy->expanded = true;
    copy->rule = rule;
    copy->kids.clear();
    for (Sequent &c : children) {
      auto k = std::make_shared<ProofTree::Node>();
      k->label = std::move(c);
      copy->kids.push_back(std::move(k));
    }
  } else {
    for (auto &k : copy->kids) {
      if (i < k->leaves) {
        k = expand_at(k, i, children, rule);
        break;
      }
      i -= k->leaves;
    }
  }
  copy->leaves = 0;
  copy->nodes = 1;
  for (const auto &k : copy->kids) {
    copy->leaves += k->leaves;
    copy->nodes += k->nodes;
  }
  if (!copy->expanded)
    copy->leaves = 1;
  return copy;
}

std::shared_ptr<const ProofTree::Node> apply_at(const ProofTree::Node &n, const Substitution &s) {
  auto copy = std::make_shared<ProofTree::Node>(n);
  copy->label = apply(n.label, s);
  for (auto &k : copy->kids)
    k = apply_at(*k, s);
  return copy;
}

void render_at(const ProofTree::Node &n, int depth, std::string &out) {
  out += std::string(static_cast<std::size_t>(depth) * 2, ' ');
  out += to_string(n.label);
  if (n.expanded)
    out += "    [" + n.rule + "]";
  else
    out += is_axiom(n.label) ? "    (axiom)" : "    (open)";
  out += '\n';
  for (const auto &k : n.kids)
    render_at(*k, depth + 1, out);
}

}  // namespace

const Sequent &ProofTree::leaf(std::size_t i) const {
  if (i >= root_->leaves)
    throw Error("leaf " + std::to_string(i) + " does not exist (tree has " +
                std::to_string(root_->leaves) + " leaves)");
  return find_leaf(*root_, i).label;
}

bool ProofTree::is_closed() const {
  for (const Sequent &s : open_sequents())
    if (!is_axiom(s))
      return false;
  return true;
}

ProofTree ProofTree::expand_leaf(std::size_t i, std::vector<Sequent> children,
                                 std::string rule) const {
  if (i >= root_->leaves)
    throw Error("leaf " + std::to_string(i) + " does not exist");
  return ProofTree(expand_at(root_, i, children, rule));
}

ProofTree ProofTree::apply(const Substitution &s) const { return ProofTree(apply_at(*root_, s)); }

std::string ProofTree::render() const {
  std::string out;
  render_at(*root_, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Forests

ProofForest::ProofForest(Mode mode) : mode_(mode) {
  trace_.push_back(mode == Mode::Strong ? "mode strong" : "mode weak");
  if (mode == Mode::Strong)
    graph_ = std::make_shared<DependencyGraph>();
}

void ProofForest::note(const Sequent &s) {
  FreeVars fv = free_vars(s);
  used_.insert(fv.gamma.begin(), fv.gamma.end());
  used_.insert(fv.delta.begin(), fv.delta.end());
}

void ProofForest::note(const Relation &r) {
  VarSet f = field(r);
  used_.insert(f.begin(), f.end());
}

Variable ProofForest::fresh(const std::string &base, VarKind kind) const {
  Variable v{base, kind};
  for (int i = 1; used_.count(v); ++i)
    v.name = base + std::to_string(i);
  return v;
}

ProofForest ProofForest::hypothesize(Sequent s, const Relation &extra, std::string name) const {
  for (const auto &[x, y] : extra)
    if (!x.is_gamma() || !y.is_delta())
      throw Error("variable condition pairs must be (gamma, delta)");
  if (mode_ == Mode::Strong) {
    const Relation joined = unite(vc_, extra);
    for (const Edge &e : compose(extra, transitive_closure(choice_.order)))
      if (!joined.count(e))
        throw Error("hypothesis violates extra o < within R u extra: (" + to_string(e.first) + "," +
                    to_string(e.second) + ") missing");
  }
  ProofForest out = *this;
  out.vc_ = unite(vc_, extra);
  out.note(s);
  out.note(extra);
  if (graph_) {
    auto g = std::make_shared<DependencyGraph>(*graph_);
    g->add_relation_edges(extra);
    out.graph_ = std::move(g);
  }
  std::string line = "hyp";
  if (name.empty())
    line += " : " + to_string(s);
  else
    line += " " + name;
  if (!extra.empty()) {
    if (name.empty())
      throw Error("a hypothesis with an extra variable condition needs a name");
    line += " " + to_string(extra);
  }
  out.trace_.push_back(line);
  out.entries_.push_back({std::move(name), s, ProofTree(s)});
  return out;
}

ProofForest ProofForest::expand(const RuleInstance &rule) const {
  if (rule.tree >= entries_.size())
    throw Error("tree " + std::to_string(rule.tree) + " does not exist");
  const ForestEntry &entry = entries_[rule.tree];
  const Sequent &s = entry.tree.leaf(rule.leaf);
  if (rule.index >= s.size())
    throw Error("leaf has no formula " + std::to_string(rule.index));
  const Formula &f = s[rule.index];
  if (rule_for(f) != rule.tag)
    throw Error(rule_name(rule.tag) + " does not apply to " + to_string(f));

  std::vector<Formula> rest;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (i != rule.index)
      rest.push_back(s[i]);
  auto with = [&](std::initializer_list<Formula> front) {
    std::vector<Formula> out(front);
    out.insert(out.end(), rest.begin(), rest.end());
    return Sequent(std::move(out));
  };

  ProofForest out = *this;
  std::vector<Sequent> children;
  std::optional<Variable> introduced;
  std::string label = rule_name(rule.tag);

  switch (rule.tag) {
  case RuleTag::AlphaOr:
    children.push_back(with({f.left(), f.right()}));
    break;
  case RuleTag::AlphaNand:
    children.push_back(with({conjugate(f.operand().left()), conjugate(f.operand().right())}));
    break;
  case RuleTag::AlphaNotNot:
    children.push_back(with({f.operand().operand()}));
    break;
  case RuleTag::BetaAnd:
    children.push_back(with({f.left()}));
    children.push_back(with({f.right()}));
    break;
  case RuleTag::BetaNor:
    children.push_back(with({conjugate(f.operand().left())}));
    children.push_back(with({conjugate(f.operand().right())}));
    break;
  case RuleTag::GammaEx:
  case RuleTag::GammaNall: {
    const Formula &q = rule.tag == RuleTag::GammaEx ? f : f.operand();
    Variable x = rule.var ? *rule.var : fresh(q.bound(), VarKind::Gamma);
    if (!x.is_gamma())
      throw Error("gamma-step needs a gamma-variable, got " + to_string(x));
    if (free_vars(s).gamma.count(x))
      throw Error(to_string(x) + " already occurs in the sequent");
    Formula inst = instantiate_quantifier(q, x);
    if (rule.tag == RuleTag::GammaNall)
      inst = conjugate(inst);
    // the principal formula stays where it was
    std::vector<Formula> child{inst};
    for (std::size_t i = 0; i < s.size(); ++i)
      child.push_back(s[i]);
    children.emplace_back(std::move(child));
    introduced = x;
    break;
  }
  case RuleTag::DeltaAll:
  case RuleTag::DeltaNex: {
    const DeltaVariant variant =
        rule.variant ? *rule.variant
                     : (mode_ == Mode::Strong ? DeltaVariant::Liberalized : DeltaVariant::Weak);
    if (mode_ == Mode::Strong && variant == DeltaVariant::Weak)
      throw Error("the non-liberalized delta-rule is unsound for strong reduction");
    if (mode_ == Mode::Weak && variant == DeltaVariant::Liberalized)
      throw Error("liberalized delta-steps need strong mode");
    const Formula &q = rule.tag == RuleTag::DeltaAll ? f : f.operand();
    Variable x = rule.var ? *rule.var : fresh(q.bound(), VarKind::Delta);
    if (!x.is_delta())
      throw Error("delta-step needs a delta-variable, got " + to_string(x));
    if (free_vars(s).delta.count(x))
      throw Error(to_string(x) + " already occurs in the sequent");
    Formula inst = instantiate_quantifier(q, x);
    if (rule.tag == RuleTag::DeltaNex)
      inst = conjugate(inst);
    children.push_back(with({inst}));
    introduced = x;
    Relation extra;
    if (variant == DeltaVariant::Weak) {
      extra = product(free_vars(s).gamma, {x});
    } else {
      if (domain(choice_.order).count(x) || choice_.choices.count(x))
        throw Error(to_string(x) + " is already constrained by the choice-condition");
      VarSet before = q.gamma_vars();
      for (const Variable &u : preimage(vc_, q.delta_vars()))
        before.insert(u);
      extra = product(before, {x});
      VarSet earlier = q.delta_vars();
      for (const Variable &z : preimage(transitive_closure(choice_.order), q.delta_vars()))
        earlier.insert(z);
      out.choice_.order = unite(choice_.order, product(earlier, {x}));
      out.choice_.choices.emplace(x, inst);
      if (rule.variant)
        label = "l" + label;
    }
    if (variant == DeltaVariant::Weak && rule.variant)
      label = "w" + label;
    out.vc_ = unite(vc_, extra);
    out.note(extra);
    if (graph_) {
      auto g = std::make_shared<DependencyGraph>(*graph_);
      g->add_relation_edges(extra);
      out.graph_ = std::move(g);
    }
    break;
  }
  }

  for (const Sequent &c : children)
    out.note(c);
  if (introduced)
    out.used_.insert(*introduced);
  out.entries_[rule.tree].tree =
      entry.tree.expand_leaf(rule.leaf, std::move(children), label);
  out.trace_.push_back("expand " + std::to_string(rule.tree) + "#" + std::to_string(rule.leaf) +
                       " " + label + " " + std::to_string(rule.index) + " " +
                       (introduced ? to_string(*introduced) : "-"));
  if (mode_ == Mode::Strong)
    if (auto why = choice_violation(out.choice_, out.vc_))
      throw std::logic_error("delta-step broke the choice-condition: " + *why);
  return out;
}

ProofForest ProofForest::instantiate(const Substitution &sigma) const {
  ProofForest out = *this;
  if (mode_ == Mode::Weak) {
    out.vc_ = weak_update(sigma, vc_);
  } else {
    const VarSet relevant = relevant_for(sigma, vc_);
    const SubstAnalysis a = analyze(sigma, relevant);
    auto g = std::make_shared<DependencyGraph>(*graph_);
    g->add_subst_edges(a.existential, a.universal, relevant);
    const bool admissible = is_strong_admissible(sigma, vc_);
    if (admissible == g->has_cycle())
      throw std::logic_error("dependency graph and closure check disagree on " +
                             to_string(sigma));
    StrongState next = extended_strong_update(sigma, state());  // throws when inadmissible
    if (g->reachable_relation() != next.vc)
      throw std::logic_error("dependency graph paths differ from the strong update: " +
                             to_string(g->reachable_relation()) + " vs " + to_string(next.vc));
    out.vc_ = std::move(next.vc);
    out.choice_ = std::move(next.choice);
    out.graph_ = std::move(g);
  }
  for (ForestEntry &e : out.entries_) {
    e.root = apply(e.root, sigma);
    e.tree = e.tree.apply(sigma);
    out.note(e.root);
    for (const Sequent &l : e.tree.open_sequents())
      out.note(l);
  }
  for (const auto &[x, t] : sigma) {
    out.used_.insert(x);
    out.used_.insert(t.gamma_vars().begin(), t.gamma_vars().end());
    out.used_.insert(t.delta_vars().begin(), t.delta_vars().end());
  }
  out.trace_.push_back("inst " + to_string(sigma));
  if (mode_ == Mode::Strong)
    if (auto why = choice_violation(out.choice_, out.vc_))
      throw std::logic_error("instantiation broke the choice-condition: " + *why);
  return out;
}

bool ProofForest::is_closed(std::size_t tree) const { return entries_.at(tree).tree.is_closed(); }

bool ProofForest::is_closed() const {
  for (const ForestEntry &e : entries_)
    if (!e.tree.is_closed())
      return false;
  return true;
}

ProofForest ProofForest::qed(std::size_t tree) const {
  if (tree >= entries_.size())
    throw Error("tree " + std::to_string(tree) + " does not exist");
  if (!is_closed(tree))
    throw Error("tree " + std::to_string(tree) + " is not closed");
  ProofForest out = *this;
  out.trace_.push_back("qed " + std::to_string(tree));
  return out;
}

std::string ProofForest::render() const {
  std::string out;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const ForestEntry &e = entries_[i];
    out += "tree " + std::to_string(i);
    if (!e.name.empty())
      out += " (" + e.name + ")";
    out += e.tree.is_closed() ? ", closed" : "";
    out += "\n";
    std::size_t leaf = 0;
    std::string body = e.tree.render();
    // number the leaves so that they can be addressed
    std::istringstream lines(body);
    for (std::string line; std::getline(lines, line);) {
      if (line.size() > 6 && (line.ends_with("(open)") || line.ends_with("(axiom)")))
        line = "#" + std::to_string(leaf++) + " " + line;
      else
        line = "   " + line;
      out += "  " + line + "\n";
    }
  }
  out += "R = " + to_string(vc_) + "\n";
  if (mode_ == Mode::Strong) {
    out += "< = " + to_string(choice_.order) + "\n";
    out += format_choices(choice_);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

Term rename(const Term &t, const std::map<Variable, Variable> &m) {
  if (t.is_var()) {
    auto it = m.find(t.variable());
    return it == m.end() ? t : Term::var(it->second);
  }
  std::vector<Term> args;
  for (const Term &a : t.args())
    args.push_back(rename(a, m));
  return Term::app(t.function(), std::move(args));
}

Formula rename(const Formula &f, const std::map<Variable, Variable> &m) {
  switch (f.connective()) {
  case Connective::Atom: {
    std::vector<Term> args;
    for (const Term &t : f.terms())
      args.push_back(rename(t, m));
    return Formula::atom(f.predicate(), std::move(args));
  }
  case Connective::Not:
    return Formula::negation(rename(f.operand(), m));
  case Connective::And:
    return Formula::conjunction(rename(f.left(), m), rename(f.right(), m));
  case Connective::Or:
    return Formula::disjunction(rename(f.left(), m), rename(f.right(), m));
  case Connective::Forall:
    return Formula::forall(f.bound(), rename(f.body(), m));
  case Connective::Exists:
    return Formula::exists(f.bound(), rename(f.body(), m));
  }
  return f;
}

}  // namespace

std::pair<Sequent, Relation> externalize_choices(const Sequent &root, const StrongState &state,
                                                 const std::map<Variable, Variable> &sigma) {
  const FreeVars fv = free_vars(root);
  VarSet expected;
  for (const Variable &y : fv.delta)
    if (state.choice.choices.count(y))
      expected.insert(y);
  VarSet dom, ran;
  for (const auto &[y, g] : sigma) {
    dom.insert(y);
    if (!g.is_gamma())
      throw Error("externalized variables must become gamma-variables");
    if (fv.gamma.count(g))
      throw Error(to_string(g) + " already occurs in the root");
    if (!ran.insert(g).second)
      throw Error("externalization must be injective");
  }
  if (dom != expected)
    throw Error("externalization must map exactly the chosen delta-variables of the root");

  std::vector<Formula> out;
  for (const Formula &f : root)
    out.push_back(rename(f, sigma));
  Sequent renamed(std::move(out));

  Relation r;
  for (const Edge &e : state.vc)
    if (!ran.count(e.first))
      r.insert(e);
  const Relation order = transitive_closure(state.choice.order);
  for (const auto &[y, g] : sigma)
    for (const Variable &later : image(order, {y}))
      r.emplace(g, later);
  VarSet gammas = free_vars(renamed).gamma;
  for (const Variable &x : domain(state.vc))
    gammas.insert(x);
  VarSet chosen;
  for (const auto &[y, b] : state.choice.choices)
    chosen.insert(y);
  return {renamed, unite(r, product(gammas, chosen))};
}

// ---------------------------------------------------------------------------

ProofForest replay(const std::string &trace, const ProblemSet &problems) {
  std::istringstream in(trace);
  std::optional<ProofForest> forest;
  Signature sig = problems.signature;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos && line.rfind("expand", 0) != 0)
      line = line.substr(0, hash);
    std::istringstream words(line);
    std::string cmd;
    if (!(words >> cmd))
      continue;
    try {
      if (cmd == "mode") {
        std::string m;
        words >> m;
        if (forest)
          throw Error("mode given twice");
        if (m != "weak" && m != "strong")
          throw Error("unknown mode '" + m + "'");
        forest.emplace(m == "strong" ? Mode::Strong : Mode::Weak);
        continue;
      }
      if (!forest)
        throw Error("trace must start with 'mode weak' or 'mode strong'");
      std::string rest;
      std::getline(words, rest);
      if (cmd == "hyp") {
        auto colon = rest.find(':');
        std::string head = rest.substr(0, colon);
        std::istringstream hw(head);
        std::string name;
        hw >> name;
        std::string rel;
        std::getline(hw, rel);
        Relation extra;
        if (rel.find_first_not_of(" \t") != std::string::npos)
          extra = parse_relation(rel);
        if (colon != std::string::npos) {
          forest = forest->hypothesize(parse_sequent(rest.substr(colon + 1), sig), extra, name);
        } else {
          if (name.empty())
            throw Error("hyp needs a problem name");
          forest = forest->hypothesize(problems.find(name).sequent, extra, name);
        }
      } else if (cmd == "expand") {
        std::istringstream ew(rest);
        std::string where, rname, var;
        std::size_t index = 0;
        if (!(ew >> where >> rname >> index >> var))
          throw Error("expected 'expand <tree>#<leaf> <rule> <index> <var>'");
        auto hash = where.find('#');
        if (hash == std::string::npos)
          throw Error("expected <tree>#<leaf>");
        RuleInstance ri{};
        ri.tree = std::stoul(where.substr(0, hash));
        ri.leaf = std::stoul(where.substr(hash + 1));
        ri.index = index;
        if (rname.size() > 1 && (rname[0] == 'w' || rname[0] == 'l') && rname[1] == 'd') {
          ri.variant = rname[0] == 'w' ? DeltaVariant::Weak : DeltaVariant::Liberalized;
          rname = rname.substr(1);
        }
        auto tag = parse_rule_name(rname);
        if (!tag)
          throw Error("unknown rule '" + rname + "'");
        if (ri.variant && !is_delta_rule(*tag))
          throw Error("only delta-rules have variants");
        ri.tag = *tag;
        if (var != "-")
          ri.var = parse_variable(var);
        forest = forest->expand(ri);
      } else if (cmd == "inst") {
        forest = forest->instantiate(parse_substitution(rest, sig));
      } else if (cmd == "qed") {
        forest = forest->qed(std::stoul(rest));
      } else {
        throw Error("unknown command '" + cmd + "'");
      }
    } catch (const Error &e) {
      throw Error("trace line " + std::to_string(line_no) + ": " + e.what());
    } catch (const std::invalid_argument &) {
      throw Error("trace line " + std::to_string(line_no) + ": bad number");
    } catch (const std::out_of_range &) {
      throw Error("trace line " + std::to_string(line_no) + ": number out of range");
    }
  }
  if (!forest)
    throw Error("empty trace");
  return *forest;
}

}  // namespace vcp
