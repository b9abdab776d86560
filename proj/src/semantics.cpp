#include "vcp/semantics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace vcp {

// ---------------------------------------------------------------------------
// Structures

namespace {

std::string element_name(std::size_t i) {
  if (i < 26)
    return std::string(1, static_cast<char>('a' + i));
  return "e" + std::to_string(i);
}

std::size_t power(std::size_t base, std::size_t exp) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i)
    out *= base;
  return out;
}

}  // namespace

Structure Structure::blank(std::size_t size, const Signature &sig) {
  if (size == 0)
    throw Error("a structure needs at least one element");
  Structure s;
  s.size = size;
  for (std::size_t i = 0; i < size; ++i)
    s.elements.push_back(element_name(i));
  for (const auto &[f, arity] : sig.functions())
    s.functions[f] = {arity, std::vector<int>(power(size, arity), 0)};
  for (const auto &[p, arity] : sig.predicates())
    if (p != "=")
      s.predicates[p] = {arity, std::vector<char>(power(size, arity), 0)};
  return s;
}

std::size_t Structure::index(std::span<const int> args) const {
  std::size_t idx = 0;
  for (int a : args)
    idx = idx * size + static_cast<std::size_t>(a);
  return idx;
}

int Structure::apply(const std::string &function, std::span<const int> args) const {
  auto it = functions.find(function);
  if (it == functions.end())
    throw Error("structure does not interpret function '" + function + "'");
  if (it->second.first != args.size())
    throw Error("arity mismatch for function '" + function + "'");
  return it->second.second[index(args)];
}

bool Structure::holds(const std::string &predicate, std::span<const int> args) const {
  if (predicate == "=" && args.size() == 2)
    return args[0] == args[1];
  auto it = predicates.find(predicate);
  if (it == predicates.end())
    throw Error("structure does not interpret predicate '" + predicate + "'");
  if (it->second.first != args.size())
    throw Error("arity mismatch for predicate '" + predicate + "'");
  return it->second.second[index(args)] != 0;
}

int Structure::element(std::string_view name) const {
  for (std::size_t i = 0; i < elements.size(); ++i)
    if (elements[i] == name)
      return static_cast<int>(i);
  throw Error("unknown element '" + std::string(name) + "'");
}

namespace {

// Tokens of the structure format: identifiers and single punctuation marks.
std::vector<std::string> structure_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = i;
      while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
        ++i;
      out.emplace_back(text.substr(start, i - start));
    } else if (std::string_view("(){},=").find(c) != std::string_view::npos) {
      out.emplace_back(1, c);
      ++i;
    } else {
      throw Error(std::string("unexpected character '") + c + "' in structure");
    }
  }
  return out;
}

struct TokenCursor {
  std::vector<std::string> toks;
  std::size_t pos = 0;

  bool done() const { return pos >= toks.size(); }
  const std::string &peek() const {
    static const std::string end;
    return done() ? end : toks[pos];
  }
  std::string next() {
    if (done())
      throw Error("unexpected end of structure statement");
    return toks[pos++];
  }
  void expect(const std::string &t) {
    if (peek() != t)
      throw Error("expected '" + t + "' in structure, found '" + peek() + "'");
    ++pos;
  }
};

std::vector<int> tuple(TokenCursor &cur, const Structure &s) {
  std::vector<int> args;
  if (cur.peek() != "(") {
    args.push_back(s.element(cur.next()));
    return args;
  }
  cur.expect("(");
  if (cur.peek() != ")") {
    args.push_back(s.element(cur.next()));
    while (cur.peek() == ",") {
      cur.expect(",");
      args.push_back(s.element(cur.next()));
    }
  }
  cur.expect(")");
  return args;
}

}  // namespace

Structure parse_structure(std::string_view text, const Signature &sig) {
  std::vector<std::string_view> statements;
  for (std::size_t start = 0; start <= text.size();) {
    std::size_t end = text.find(';', start);
    if (end == std::string_view::npos)
      end = text.size();
    statements.push_back(text.substr(start, end - start));
    start = end + 1;
  }

  std::optional<Structure> s;
  std::map<std::string, std::vector<char>> defined;  // function cells set
  for (std::string_view st : statements) {
    TokenCursor cur{structure_tokens(st)};
    if (cur.done())
      continue;
    if (cur.peek() == "universe") {
      if (s)
        throw Error("universe declared twice");
      cur.next();
      std::vector<std::string> names;
      while (!cur.done()) {
        std::string n = cur.next();
        if (std::find(names.begin(), names.end(), n) != names.end())
          throw Error("element '" + n + "' listed twice");
        names.push_back(n);
      }
      s = Structure::blank(std::max<std::size_t>(names.size(), 1), sig);
      if (names.empty())
        throw Error("empty universe");
      s->elements = names;
      for (const auto &[f, entry] : s->functions)
        defined[f] = std::vector<char>(entry.second.size(), 0);
      continue;
    }
    if (!s)
      throw Error("structure must start with 'universe'");
    const std::string name = cur.next();
    if (cur.peek() == "(" || sig.has_function(name)) {
      // function entries: f(a)=b f(b)=a  or  c = a
      cur.pos = 0;
      while (!cur.done()) {
        std::string f = cur.next();
        auto it = s->functions.find(f);
        if (it == s->functions.end())
          throw Error("unknown function symbol '" + f + "'");
        std::vector<int> args;
        if (cur.peek() == "(")
          args = tuple(cur, *s);
        if (args.size() != it->second.first)
          throw Error("wrong number of arguments for '" + f + "'");
        cur.expect("=");
        std::size_t idx = s->index(args);
        it->second.second[idx] = s->element(cur.next());
        defined[f][idx] = 1;
      }
      continue;
    }
    if (name == "=")
      throw Error("equality is always the identity");
    auto it = s->predicates.find(name);
    if (it == s->predicates.end())
      throw Error("unknown symbol '" + name + "'");
    cur.expect("=");
    auto &[arity, table] = it->second;
    std::fill(table.begin(), table.end(), 0);
    if (cur.peek() == "id") {
      cur.next();
      if (arity != 2)
        throw Error("'id' needs a binary predicate");
      for (std::size_t i = 0; i < s->size; ++i)
        table[i * s->size + i] = 1;
    } else if (cur.peek() == "true" || cur.peek() == "false") {
      if (arity != 0)
        throw Error("'" + cur.peek() + "' needs a nullary predicate");
      table[0] = cur.next() == "true";
    } else {
      cur.expect("{");
      while (cur.peek() != "}") {
        std::vector<int> args = tuple(cur, *s);
        if (args.size() != arity)
          throw Error("tuple of wrong length for '" + name + "'");
        table[s->index(args)] = 1;
        if (cur.peek() == ",")
          cur.next();
        else
          break;
      }
      cur.expect("}");
    }
    if (!cur.done())
      throw Error("trailing input after '" + name + "'");
  }
  if (!s)
    throw Error("structure must start with 'universe'");
  for (const auto &[f, cells] : defined)
    if (std::find(cells.begin(), cells.end(), 0) != cells.end())
      throw Error("function '" + f + "' is not defined everywhere");
  return *s;
}

namespace {

std::string tuple_text(const Structure &s, std::size_t idx, std::size_t arity) {
  std::vector<std::string> parts(arity);
  for (std::size_t i = arity; i-- > 0;) {
    parts[i] = s.elements[idx % s.size];
    idx /= s.size;
  }
  std::string out;
  for (std::size_t i = 0; i < arity; ++i)
    out += (i ? "," : "") + parts[i];
  return out;
}

}  // namespace

std::string to_string(const Structure &s) {
  std::string out = "universe";
  for (const std::string &e : s.elements)
    out += " " + e;
  for (const auto &[p, entry] : s.predicates) {
    const auto &[arity, table] = entry;
    out += "; " + p + " = ";
    if (arity == 0) {
      out += table[0] ? "true" : "false";
      continue;
    }
    bool identity = arity == 2;
    for (std::size_t i = 0; identity && i < s.size; ++i)
      for (std::size_t j = 0; j < s.size; ++j)
        if ((table[i * s.size + j] != 0) != (i == j))
          identity = false;
    if (identity) {
      out += "id";
      continue;
    }
    out += "{";
    bool first = true;
    for (std::size_t idx = 0; idx < table.size(); ++idx) {
      if (!table[idx])
        continue;
      out += first ? "" : ", ";
      first = false;
      out += arity == 1 ? tuple_text(s, idx, 1) : "(" + tuple_text(s, idx, arity) + ")";
    }
    out += "}";
  }
  for (const auto &[f, entry] : s.functions) {
    const auto &[arity, table] = entry;
    out += ";";
    for (std::size_t idx = 0; idx < table.size(); ++idx) {
      out += " " + f;
      if (arity)
        out += "(" + tuple_text(s, idx, arity) + ")";
      out += arity ? "=" : " = ";
      out += s.elements[table[idx]];
    }
  }
  return out;
}

namespace {

// Subsets of {0..cells-1} ordered by cardinality, then lexicographically.
std::vector<std::vector<char>> ordered_subsets(std::size_t cells) {
  if (cells > 20)
    throw CapacityError("too many tuples to enumerate predicate interpretations");
  std::vector<std::vector<char>> out;
  for (std::size_t k = 0; k <= cells; ++k) {
    std::vector<std::size_t> comb(k);
    for (std::size_t i = 0; i < k; ++i)
      comb[i] = i;
    for (;;) {
      std::vector<char> table(cells, 0);
      for (std::size_t i : comb)
        table[i] = 1;
      out.push_back(std::move(table));
      // next combination
      std::size_t i = k;
      while (i > 0 && comb[i - 1] == cells - k + i - 1)
        --i;
      if (i == 0)
        break;
      ++comb[i - 1];
      for (std::size_t j = i; j < k; ++j)
        comb[j] = comb[j - 1] + 1;
    }
  }
  return out;
}

}  // namespace

void enumerate_structures(const Signature &sig, std::size_t size,
                          const std::function<bool(const Structure &)> &visit) {
  Structure s = Structure::blank(size, sig);
  struct Slot {
    std::string name;
    bool predicate;
    std::size_t choices;
  };
  std::vector<Slot> slots;
  std::map<std::size_t, std::vector<std::vector<char>>> subsets;  // by cell count
  for (const auto &[f, entry] : s.functions) {
    const std::size_t cells = entry.second.size();
    double count = std::pow(static_cast<double>(size), static_cast<double>(cells));
    if (count > 1e7)
      throw CapacityError("too many interpretations for function '" + f + "'");
    slots.push_back({f, false, power(size, cells)});
  }
  for (const auto &[p, entry] : s.predicates) {
    const std::size_t cells = entry.second.size();
    if (!subsets.count(cells))
      subsets[cells] = ordered_subsets(cells);
    slots.push_back({p, true, subsets[cells].size()});
  }
  std::sort(slots.begin(), slots.end(), [](const Slot &a, const Slot &b) { return a.name < b.name; });

  auto install = [&](const Slot &slot, std::size_t choice) {
    if (slot.predicate) {
      auto &table = s.predicates[slot.name].second;
      table = subsets[table.size()][choice];
    } else {
      auto &table = s.functions[slot.name].second;
      for (std::size_t i = table.size(); i-- > 0;) {
        table[i] = static_cast<int>(choice % size);
        choice /= size;
      }
    }
  };

  std::vector<std::size_t> digits(slots.size(), 0);
  for (std::size_t i = 0; i < slots.size(); ++i)
    install(slots[i], 0);
  for (;;) {
    if (!visit(s))
      return;
    std::size_t i = slots.size();
    for (; i > 0; --i) {
      if (++digits[i - 1] < slots[i - 1].choices) {
        install(slots[i - 1], digits[i - 1]);
        break;
      }
      digits[i - 1] = 0;
      install(slots[i - 1], 0);
    }
    if (i == 0)
      return;
  }
}

// ---------------------------------------------------------------------------
// Direct evaluation

namespace {

using Scope = std::vector<std::pair<std::string, int>>;

int eval_term(const Term &t, const Structure &a, const Assignment &env, const Scope &scope) {
  if (t.is_var()) {
    const Variable &v = t.variable();
    if (v.is_bound()) {
      for (auto it = scope.rbegin(); it != scope.rend(); ++it)
        if (it->first == v.name)
          return it->second;
      throw Error("bound variable '" + v.name + "' outside its scope");
    }
    auto it = env.find(v);
    if (it == env.end())
      throw Error("no value for free variable " + to_string(v));
    return it->second;
  }
  std::vector<int> args;
  for (const Term &x : t.args())
    args.push_back(eval_term(x, a, env, scope));
  return a.apply(t.function(), args);
}

bool eval_formula(const Formula &f, const Structure &a, const Assignment &env, Scope &scope) {
  switch (f.connective()) {
  case Connective::Atom: {
    std::vector<int> args;
    for (const Term &t : f.terms())
      args.push_back(eval_term(t, a, env, scope));
    return a.holds(f.predicate(), args);
  }
  case Connective::Not:
    return !eval_formula(f.operand(), a, env, scope);
  case Connective::And:
    return eval_formula(f.left(), a, env, scope) && eval_formula(f.right(), a, env, scope);
  case Connective::Or:
    return eval_formula(f.left(), a, env, scope) || eval_formula(f.right(), a, env, scope);
  case Connective::Forall:
  case Connective::Exists: {
    const bool universal = f.connective() == Connective::Forall;
    scope.emplace_back(f.bound(), 0);
    bool result = universal;
    for (std::size_t v = 0; v < a.size; ++v) {
      scope.back().second = static_cast<int>(v);
      if (eval_formula(f.body(), a, env, scope) != universal) {
        result = !universal;
        break;
      }
    }
    scope.pop_back();
    return result;
  }
  }
  return false;
}

}  // namespace

int eval(const Term &t, const Structure &a, const Assignment &env) {
  return eval_term(t, a, env, {});
}

bool eval(const Formula &f, const Structure &a, const Assignment &env) {
  Scope scope;
  return eval_formula(f, a, env, scope);
}

bool eval(const Sequent &s, const Structure &a, const Assignment &env) {
  for (const Formula &f : s)
    if (eval(f, a, env))
      return true;
  return false;
}

bool eval(std::span<const Sequent> g, const Structure &a, const Assignment &env) {
  for (const Sequent &s : g)
    if (!eval(s, a, env))
      return false;
  return true;
}

Assignment apply_epsilon(const ExistentialValuation &e, const Assignment &pi, std::size_t size) {
  Assignment out;
  for (const auto &[x, table] : e.tables) {
    std::size_t idx = 0;
    auto deps = e.deps.find(x);
    if (deps != e.deps.end()) {
      for (const Variable &y : deps->second) {
        auto it = pi.find(y);
        if (it == pi.end())
          throw Error("valuation does not assign " + to_string(y));
        idx = idx * size + static_cast<std::size_t>(it->second);
      }
    }
    out[x] = table.at(idx);
  }
  return out;
}

std::string to_string(const Assignment &pi, const Structure &a) {
  std::string out = "{";
  bool first = true;
  for (const auto &[v, x] : pi) {
    out += first ? " " : ", ";
    first = false;
    out += to_string(v) + " -> " + a.elements.at(x);
  }
  return out + (first ? "}" : " }");
}

std::string to_string(const ExistentialValuation &e, const Structure &a) {
  std::string out = "S = " + to_string(e.s);
  for (const auto &[x, table] : e.tables) {
    const auto &deps = e.deps.at(x);
    out += "; " + to_string(x) + "(";
    for (std::size_t i = 0; i < deps.size(); ++i)
      out += (i ? "," : "") + to_string(deps[i]);
    out += ") =";
    if (deps.empty()) {
      out += " " + a.elements[table[0]];
      continue;
    }
    for (std::size_t idx = 0; idx < table.size(); ++idx)
      out += " [" + tuple_text(a, idx, deps.size()) + "]" + a.elements[table[idx]];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Admissible relations S

std::vector<Relation> admissible_relations(const VarSet &gammas, const VarSet &deltas,
                                           const Relation &r, bool strong, bool maximal_only) {
  const std::vector<Variable> xs(gammas.begin(), gammas.end());
  const std::vector<Variable> ys(deltas.begin(), deltas.end());
  if (ys.size() > 64)
    throw CapacityError("too many delta-variables");
  std::map<Variable, std::size_t> yi;
  for (std::size_t i = 0; i < ys.size(); ++i)
    yi[ys[i]] = i;
  // successors in R of each gamma-variable, as a bit set over ys
  std::vector<std::uint64_t> rsucc(xs.size(), 0);
  std::uint64_t rrange = 0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (const auto &[x, y] : r)
      if (x == xs[i] && yi.count(y)) {
        rsucc[i] |= std::uint64_t{1} << yi[y];
        rrange |= std::uint64_t{1} << yi[y];
      }

  struct Pair {
    std::size_t y, x;
  };
  std::vector<Pair> safe, risky;
  for (std::size_t x = 0; x < xs.size(); ++x)
    for (std::size_t y = 0; y < ys.size(); ++y) {
      if (rsucc[x] >> y & 1)
        continue;  // (y,x) o (x,y) would be reflexive
      // A pair can only take part in a cycle of S o R when x has an R-successor
      // and y an R-predecessor.
      if (!strong || rsucc[x] == 0 || !(rrange >> y & 1))
        safe.push_back({y, x});
      else
        risky.push_back({y, x});
    }

  auto acyclic = [&](const std::vector<Pair> &chosen) {
    std::vector<std::uint64_t> adj(ys.size(), 0);
    for (const Pair &p : chosen)
      adj[p.y] |= rsucc[p.x];
    std::uint64_t remaining = ys.size() == 64 ? ~std::uint64_t{0}
                                              : (std::uint64_t{1} << ys.size()) - 1;
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t y = 0; y < ys.size(); ++y)
        if ((remaining >> y & 1) && (adj[y] & remaining) == 0) {
          remaining &= ~(std::uint64_t{1} << y);
          changed = true;
        }
    }
    return remaining == 0;
  };

  auto to_relation = [&](const std::vector<Pair> &chosen) {
    Relation s;
    for (const Pair &p : chosen)
      s.emplace(ys[p.y], xs[p.x]);
    return s;
  };

  std::vector<Relation> out;
  if (maximal_only) {
    if (risky.size() > 24)
      throw CapacityError("too many candidate dependencies");
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << risky.size()); ++mask) {
      std::vector<Pair> chosen;
      for (std::size_t i = 0; i < risky.size(); ++i)
        if (mask >> i & 1)
          chosen.push_back(risky[i]);
      if (!acyclic(chosen))
        continue;
      bool maximal = true;
      for (std::size_t i = 0; maximal && i < risky.size(); ++i) {
        if (mask >> i & 1)
          continue;
        chosen.push_back(risky[i]);
        if (acyclic(chosen))
          maximal = false;
        chosen.pop_back();
      }
      if (!maximal)
        continue;
      chosen.insert(chosen.end(), safe.begin(), safe.end());
      out.push_back(to_relation(chosen));
    }
    return out;
  }

  std::vector<Pair> all = safe;
  all.insert(all.end(), risky.begin(), risky.end());
  if (all.size() > 24)
    throw CapacityError("too many candidate dependencies");
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << all.size()); ++mask) {
    std::vector<Pair> chosen;
    for (std::size_t i = 0; i < all.size(); ++i)
      if (mask >> i & 1)
        chosen.push_back(all[i]);
    if (strong ? acyclic(chosen) : true)
      out.push_back(to_relation(chosen));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Compiled evaluation used by the oracle loops. Free variables and
// quantifiers are mapped to slots of one flat environment.

namespace {

struct CTerm {
  int slot = -1;
  const std::vector<int> *table = nullptr;
  std::vector<CTerm> args;
};

struct CForm {
  Connective connective = Connective::Atom;
  bool equality = false;
  const std::vector<char> *table = nullptr;
  std::vector<CTerm> terms;
  std::vector<CForm> kids;
  int slot = -1;
};

class Compiled {
public:
  Compiled(const Structure &a, const std::vector<Variable> &free) : a_(a) {
    for (const Variable &v : free)
      slots_.emplace(v, static_cast<int>(slots_.size()));
    width_ = static_cast<int>(slots_.size());
  }

  int slot_of(const Variable &v) const { return slots_.at(v); }
  int width() const { return width_; }
  std::size_t size() const { return a_.size; }

  CForm compile(const Formula &f) {
    Scope scope;
    return formula(f, scope);
  }

  std::vector<CForm> compile(const Sequent &s) {
    std::vector<CForm> out;
    for (const Formula &f : s)
      out.push_back(compile(f));
    return out;
  }

  std::vector<std::vector<CForm>> compile(std::span<const Sequent> g) {
    std::vector<std::vector<CForm>> out;
    for (const Sequent &s : g)
      out.push_back(compile(s));
    return out;
  }

  int term(const CTerm &t, std::vector<int> &env) const {
    if (t.slot >= 0)
      return env[t.slot];
    std::size_t idx = 0;
    for (const CTerm &x : t.args)
      idx = idx * a_.size + static_cast<std::size_t>(term(x, env));
    return (*t.table)[idx];
  }

  bool holds(const CForm &f, std::vector<int> &env) const {
    switch (f.connective) {
    case Connective::Atom: {
      if (f.equality)
        return term(f.terms[0], env) == term(f.terms[1], env);
      std::size_t idx = 0;
      for (const CTerm &x : f.terms)
        idx = idx * a_.size + static_cast<std::size_t>(term(x, env));
      return (*f.table)[idx] != 0;
    }
    case Connective::Not:
      return !holds(f.kids[0], env);
    case Connective::And:
      return holds(f.kids[0], env) && holds(f.kids[1], env);
    case Connective::Or:
      return holds(f.kids[0], env) || holds(f.kids[1], env);
    case Connective::Forall:
      for (std::size_t v = 0; v < a_.size; ++v) {
        env[f.slot] = static_cast<int>(v);
        if (!holds(f.kids[0], env))
          return false;
      }
      return true;
    case Connective::Exists:
      for (std::size_t v = 0; v < a_.size; ++v) {
        env[f.slot] = static_cast<int>(v);
        if (holds(f.kids[0], env))
          return true;
      }
      return false;
    }
    return false;
  }

  bool holds(const std::vector<CForm> &sequent, std::vector<int> &env) const {
    for (const CForm &f : sequent)
      if (holds(f, env))
        return true;
    return false;
  }

  bool holds(const std::vector<std::vector<CForm>> &goal, std::vector<int> &env) const {
    for (const auto &s : goal)
      if (!holds(s, env))
        return false;
    return true;
  }

private:
  CTerm term(const Term &t, const Scope &scope) {
    CTerm out;
    if (t.is_var()) {
      const Variable &v = t.variable();
      if (v.is_bound()) {
        for (auto it = scope.rbegin(); it != scope.rend(); ++it)
          if (it->first == v.name) {
            out.slot = it->second;
            return out;
          }
        throw Error("bound variable '" + v.name + "' outside its scope");
      }
      auto it = slots_.find(v);
      if (it == slots_.end())
        throw Error("no value for free variable " + to_string(v));
      out.slot = it->second;
      return out;
    }
    auto it = a_.functions.find(t.function());
    if (it == a_.functions.end() || it->second.first != t.args().size())
      throw Error("structure does not interpret function '" + t.function() + "'");
    out.table = &it->second.second;
    for (const Term &x : t.args())
      out.args.push_back(term(x, scope));
    return out;
  }

  CForm formula(const Formula &f, Scope &scope) {
    CForm out;
    out.connective = f.connective();
    switch (f.connective()) {
    case Connective::Atom: {
      for (const Term &t : f.terms())
        out.terms.push_back(term(t, scope));
      if (f.predicate() == "=" && f.terms().size() == 2) {
        out.equality = true;
        break;
      }
      auto it = a_.predicates.find(f.predicate());
      if (it == a_.predicates.end() || it->second.first != f.terms().size())
        throw Error("structure does not interpret predicate '" + f.predicate() + "'");
      out.table = &it->second.second;
      break;
    }
    case Connective::Not:
      out.kids.push_back(formula(f.operand(), scope));
      break;
    case Connective::And:
    case Connective::Or:
      out.kids.push_back(formula(f.left(), scope));
      out.kids.push_back(formula(f.right(), scope));
      break;
    case Connective::Forall:
    case Connective::Exists:
      out.slot = width_++;
      scope.emplace_back(f.bound(), out.slot);
      out.kids.push_back(formula(f.body(), scope));
      scope.pop_back();
      break;
    }
    return out;
  }

  const Structure &a_;
  std::map<Variable, int> slots_;
  int width_ = 0;
};

void add_vars(const Sequent &s, VarSet &gammas, VarSet &deltas) {
  FreeVars fv = free_vars(s);
  gammas.insert(fv.gamma.begin(), fv.gamma.end());
  deltas.insert(fv.delta.begin(), fv.delta.end());
}

// Enumeration state shared by the validity and reduction checks. The
// environment holds delta-variables first, then gamma-variables, then the
// slots of quantifiers.
class Oracle {
public:
  Oracle(std::span<const Sequent> g0, std::span<const Sequent> g1, const ChoiceCondition &c,
         const Structure &a)
      : a_(a) {
    for (const Sequent &s : g0)
      add_vars(s, gammas_, deltas_);
    for (const Sequent &s : g1)
      add_vars(s, gammas_, deltas_);
    for (const auto &[y, b] : c.choices) {
      deltas_.insert(y);
      gammas_.insert(b.gamma_vars().begin(), b.gamma_vars().end());
      deltas_.insert(b.delta_vars().begin(), b.delta_vars().end());
    }
    layout();
    g0_ = compiled_->compile(g0);
    g1_ = compiled_->compile(g1);
    for (const auto &[y, b] : c.choices)
      choices_.push_back({compiled_->slot_of(y), compiled_->compile(b)});
    env_.assign(static_cast<std::size_t>(compiled_->width()), 0);
  }

  Oracle(VarSet gammas, VarSet deltas, const Structure &a)
      : a_(a), gammas_(std::move(gammas)), deltas_(std::move(deltas)) {
    layout();
    env_.assign(static_cast<std::size_t>(compiled_->width()), 0);
  }

  const VarSet &gammas() const { return gammas_; }
  const VarSet &deltas() const { return deltas_; }

  // Loads S; returns the number of valuations it admits.
  std::size_t load(const Relation &s, const OracleOptions &opts) {
    s_ = s;
    deps_.assign(xs_.size(), {});
    for (std::size_t i = 0; i < xs_.size(); ++i)
      for (std::size_t j = 0; j < ys_.size(); ++j)
        if (s.count({ys_[j], xs_[i]}))
          deps_[i].push_back(static_cast<int>(j));
    offsets_.assign(xs_.size() + 1, 0);
    for (std::size_t i = 0; i < xs_.size(); ++i)
      offsets_[i + 1] = offsets_[i] + power(a_.size, deps_[i].size());
    cells_.assign(offsets_.back(), 0);
    double count = std::pow(static_cast<double>(a_.size), static_cast<double>(cells_.size()));
    if (count > static_cast<double>(opts.capacity))
      throw CapacityError("more than " + std::to_string(opts.capacity) +
                          " existential valuations for S = " + to_string(s));
    return static_cast<std::size_t>(count);
  }

  // Advances to the next table assignment; false after the last one.
  bool next_valuation() {
    for (std::size_t i = cells_.size(); i-- > 0;) {
      if (++cells_[i] < static_cast<int>(a_.size))
        return true;
      cells_[i] = 0;
    }
    return false;
  }

  // Sets the delta part of the environment to the pi with the given number
  // and recomputes the gamma part.
  void set_pi(std::size_t code) {
    for (std::size_t j = ys_.size(); j-- > 0;) {
      env_[j] = static_cast<int>(code % a_.size);
      code /= a_.size;
    }
    update_gammas();
  }

  std::size_t pi_count() const { return power(a_.size, ys_.size()); }

  void update_gammas() {
    for (std::size_t i = 0; i < xs_.size(); ++i) {
      std::size_t idx = 0;
      for (int d : deps_[i])
        idx = idx * a_.size + static_cast<std::size_t>(env_[d]);
      env_[ys_.size() + i] = cells_[offsets_[i] + idx];
    }
  }

  bool g0() { return compiled_->holds(g0_, env_); }
  bool g1() { return compiled_->holds(g1_, env_); }

  bool compatible() {
    for (const auto &[slot, cf] : choices_) {
      if (!compiled_->holds(cf, env_))
        continue;
      const int saved = env_[slot];
      bool ok = true;
      for (std::size_t v = 0; ok && v < a_.size; ++v) {
        env_[slot] = static_cast<int>(v);
        update_gammas();
        ok = compiled_->holds(cf, env_);
      }
      env_[slot] = saved;
      update_gammas();
      if (!ok)
        return false;
    }
    return true;
  }

  ExistentialValuation valuation() const {
    ExistentialValuation e;
    e.s = s_;
    for (std::size_t i = 0; i < xs_.size(); ++i) {
      std::vector<Variable> deps;
      for (int d : deps_[i])
        deps.push_back(ys_[d]);
      e.deps[xs_[i]] = std::move(deps);
      e.tables[xs_[i]] =
          std::vector<int>(cells_.begin() + static_cast<long>(offsets_[i]),
                           cells_.begin() + static_cast<long>(offsets_[i + 1]));
    }
    return e;
  }

  Assignment pi() const {
    Assignment out;
    for (std::size_t j = 0; j < ys_.size(); ++j)
      out[ys_[j]] = env_[j];
    return out;
  }

private:
  void layout() {
    ys_.assign(deltas_.begin(), deltas_.end());
    xs_.assign(gammas_.begin(), gammas_.end());
    std::vector<Variable> slots = ys_;
    slots.insert(slots.end(), xs_.begin(), xs_.end());
    compiled_.emplace(a_, slots);
  }

  const Structure &a_;
  VarSet gammas_, deltas_;
  std::vector<Variable> ys_, xs_;
  std::optional<Compiled> compiled_;
  std::vector<std::vector<CForm>> g0_, g1_;
  std::vector<std::pair<int, CForm>> choices_;
  std::vector<int> env_;
  Relation s_;
  std::vector<std::vector<int>> deps_;
  std::vector<std::size_t> offsets_;
  std::vector<int> cells_;
};

// Runs `body` for every admissible valuation; `body` returns false to stop.
template <class Body>
std::size_t for_each_valuation(Oracle &o, const Relation &r, bool strong,
                               const OracleOptions &opts, Body body) {
  std::size_t visited = 0;
  for (const Relation &s :
       admissible_relations(o.gammas(), o.deltas(), r, strong, opts.maximal_only)) {
    o.load(s, opts);
    do {
      ++visited;
      if (!body())
        return visited;
    } while (o.next_valuation());
  }
  return visited;
}

const ChoiceCondition no_choices{};

OracleReport validity(std::span<const Sequent> g, const Relation &r, const ChoiceCondition &c,
                      bool strong, const Structure &a, const OracleOptions &opts) {
  Oracle o(g, {}, c, a);
  OracleReport rep;
  rep.valuations = for_each_valuation(o, r, strong, opts, [&] {
    for (std::size_t p = 0; p < o.pi_count(); ++p) {
      o.set_pi(p);
      if (strong && !o.compatible())
        continue;
      if (!o.g0())
        return true;  // try the next valuation
    }
    rep.holds = true;
    rep.valuation = o.valuation();
    return false;
  });
  return rep;
}

}  // namespace

std::size_t enumerate_valuations(const VarSet &gammas, const VarSet &deltas, const Relation &r,
                                 bool strong, const Structure &a,
                                 const std::function<bool(const ExistentialValuation &)> &visit,
                                 const OracleOptions &opts) {
  Oracle o(gammas, deltas, a);
  return for_each_valuation(o, r, strong, opts, [&] { return visit(o.valuation()); });
}

OracleReport check_valid(std::span<const Sequent> g, const Relation &r, const Structure &a,
                         const OracleOptions &opts) {
  return validity(g, r, no_choices, false, a, opts);
}

OracleReport check_strong_valid(std::span<const Sequent> g, const Relation &r,
                                const ChoiceCondition &c, const Structure &a,
                                const OracleOptions &opts) {
  return validity(g, r, c, true, a, opts);
}

OracleReport check_reduces(std::span<const Sequent> g0, std::span<const Sequent> g1,
                           const Relation &r, const Structure &a, const OracleOptions &opts) {
  Oracle o(g0, g1, no_choices, a);
  OracleReport rep;
  rep.holds = true;
  rep.valuations = for_each_valuation(o, r, false, opts, [&] {
    for (std::size_t p = 0; p < o.pi_count(); ++p) {
      o.set_pi(p);
      if (!o.g1())
        return true;
    }
    for (std::size_t p = 0; p < o.pi_count(); ++p) {
      o.set_pi(p);
      if (!o.g0()) {
        rep.holds = false;
        rep.valuation = o.valuation();
        rep.pi = o.pi();
        return false;
      }
    }
    return true;
  });
  return rep;
}

OracleReport check_strong_reduces(std::span<const Sequent> g0, std::span<const Sequent> g1,
                                  const Relation &r, const ChoiceCondition &c,
                                  const Structure &a, const OracleOptions &opts) {
  Oracle o(g0, g1, c, a);
  OracleReport rep;
  rep.holds = true;
  rep.valuations = for_each_valuation(o, r, true, opts, [&] {
    for (std::size_t p = 0; p < o.pi_count(); ++p) {
      o.set_pi(p);
      if (o.g1() && !o.g0() && o.compatible()) {
        rep.holds = false;
        rep.valuation = o.valuation();
        rep.pi = o.pi();
        return false;
      }
    }
    return true;
  });
  return rep;
}

bool is_compatible(const Assignment &pi, const ExistentialValuation &e, const ChoiceCondition &c,
                   const Structure &a) {
  auto context = [&](const Assignment &p) {
    Assignment env = p;
    for (const auto &[x, v] : apply_epsilon(e, p, a.size))
      env[x] = v;
    return env;
  };
  for (const auto &[y, b] : c.choices) {
    if (!eval(b, a, context(pi)))
      continue;
    Assignment other = pi;
    for (std::size_t v = 0; v < a.size; ++v) {
      other[y] = static_cast<int>(v);
      if (!eval(b, a, context(other)))
        return false;
    }
  }
  return true;
}

std::optional<Structure> countermodel(const Sequent &s, std::size_t max_size) {
  const std::vector<Sequent> goal{s};
  const Signature sig = signature_of(goal);
  FreeVars fv = free_vars(s);
  std::vector<Variable> vars(fv.gamma.begin(), fv.gamma.end());
  vars.insert(vars.end(), fv.delta.begin(), fv.delta.end());
  std::optional<Structure> found;
  for (std::size_t n = 1; n <= max_size && !found; ++n) {
    enumerate_structures(sig, n, [&](const Structure &a) {
      Compiled c(a, vars);
      std::vector<CForm> forms = c.compile(s);
      std::vector<int> env(static_cast<std::size_t>(c.width()), 0);
      for (std::size_t code = 0; code < power(n, vars.size()); ++code) {
        std::size_t rest = code;
        for (std::size_t j = vars.size(); j-- > 0;) {
          env[j] = static_cast<int>(rest % n);
          rest /= n;
        }
        if (!c.holds(forms, env)) {
          found = a;
          return false;
        }
      }
      return true;
    });
  }
  return found;
}

}  // namespace vcp
