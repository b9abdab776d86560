#include "vcp/parser.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace vcp {

namespace {

enum class Tok {
  Ident,
  GammaVar,  // ident^e
  DeltaVar,  // ident^a
  Not,
  And,
  Or,
  Implies,
  Eq,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Dot,
  Colon,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (ident_char(c)) {
      while (i < s.size() && ident_char(s[i]))
        ++i;
      std::string name(s.substr(start, i - start));
      Tok kind = Tok::Ident;
      if (i < s.size() && s[i] == '^') {
        if (i + 1 < s.size() && s[i + 1] == 'e')
          kind = Tok::GammaVar;
        else if (i + 1 < s.size() && s[i + 1] == 'a')
          kind = Tok::DeltaVar;
        else
          throw ParseError("expected 'e' or 'a' after '^'", i + 1);
        i += 2;
        if (i < s.size() && ident_char(s[i]))
          throw ParseError("unexpected character after variable kind", i);
      }
      out.push_back({kind, std::move(name), start});
      continue;
    }
    auto single = [&](Tok k) {
      out.push_back({k, std::string(1, c), start});
      ++i;
    };
    switch (c) {
    case '~':
      single(Tok::Not);
      break;
    case '&':
      single(Tok::And);
      break;
    case '|':
      single(Tok::Or);
      break;
    case '=':
      single(Tok::Eq);
      break;
    case '(':
      single(Tok::LParen);
      break;
    case ')':
      single(Tok::RParen);
      break;
    case '{':
      single(Tok::LBrace);
      break;
    case '}':
      single(Tok::RBrace);
      break;
    case ',':
      single(Tok::Comma);
      break;
    case '.':
      single(Tok::Dot);
      break;
    case ':':
      single(Tok::Colon);
      break;
    case '-':
      if (i + 1 < s.size() && s[i + 1] == '>') {
        out.push_back({Tok::Implies, "->", start});
        i += 2;
        break;
      }
      [[fallthrough]];
    default:
      throw ParseError(std::string("unexpected character '") + c + "'", start);
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

const char *describe(Tok k) {
  switch (k) {
  case Tok::Ident:
    return "identifier";
  case Tok::GammaVar:
  case Tok::DeltaVar:
    return "variable";
  case Tok::Not:
    return "'~'";
  case Tok::And:
    return "'&'";
  case Tok::Or:
    return "'|'";
  case Tok::Implies:
    return "'->'";
  case Tok::Eq:
    return "'='";
  case Tok::LParen:
    return "'('";
  case Tok::RParen:
    return "')'";
  case Tok::LBrace:
    return "'{'";
  case Tok::RBrace:
    return "'}'";
  case Tok::Comma:
    return "','";
  case Tok::Dot:
    return "'.'";
  case Tok::Colon:
    return "':'";
  case Tok::End:
    return "end of input";
  }
  return "token";
}

class Parser {
public:
  Parser(std::string_view text, Signature &sig) : toks_(lex(text)), sig_(sig) {}

  bool at(Tok k) const { return toks_[pos_].kind == k; }
  const Token &peek() const { return toks_[pos_]; }
  const Token &next() { return toks_[pos_++]; }

  const Token &expect(Tok k) {
    if (!at(k))
      throw ParseError(std::string("expected ") + describe(k) + ", found " + describe(peek().kind),
                       peek().pos);
    return next();
  }

  void expect_end() {
    if (!at(Tok::End))
      throw ParseError(std::string("unexpected ") + describe(peek().kind), peek().pos);
  }

  void require_input() {
    if (at(Tok::End))
      throw ParseError("empty input", peek().pos);
  }

  Formula formula() {
    Formula lhs = disjunction();
    if (at(Tok::Implies)) {
      next();
      Formula rhs = formula();
      return Formula::disjunction(Formula::negation(std::move(lhs)), std::move(rhs));
    }
    return lhs;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (at(Tok::Or)) {
      next();
      f = Formula::disjunction(std::move(f), conjunction());
    }
    return f;
  }

  Formula conjunction() {
    Formula f = unary();
    while (at(Tok::And)) {
      next();
      f = Formula::conjunction(std::move(f), unary());
    }
    return f;
  }

  Formula unary() {
    if (at(Tok::Not)) {
      next();
      return Formula::negation(unary());
    }
    if (at(Tok::Ident) && (peek().text == "all" || peek().text == "ex")) {
      const bool universal = next().text == "all";
      const Token &v = expect(Tok::Ident);
      if (v.text == "all" || v.text == "ex")
        throw ParseError("keyword used as variable name", v.pos);
      if (is_bound(v.text))
        throw ParseError("re-quantification of '" + v.text + "'", v.pos);
      expect(Tok::Dot);
      scope_.push_back(v.text);
      Formula body = formula();
      scope_.pop_back();
      try {
        return universal ? Formula::forall(v.text, std::move(body))
                         : Formula::exists(v.text, std::move(body));
      } catch (const ParseError &) {
        throw;
      } catch (const Error &e) {
        throw ParseError(e.what(), v.pos);
      }
    }
    return atom();
  }

  Formula atom() {
    if (at(Tok::LParen)) {
      next();
      Formula f = formula();
      expect(Tok::RParen);
      return f;
    }
    const Token head = peek();
    if (head.kind == Tok::Ident && !is_bound(head.text) && !at_equality_after_application()) {
      // predicate application
      next();
      std::vector<Term> args = arguments();
      if (is_bound(head.text))
        throw ParseError("bound variable '" + head.text + "' used as predicate", head.pos);
      declare(head, args.size(), true);
      return Formula::atom(head.text, std::move(args));
    }
    Term lhs = term();
    const Token &eq = expect(Tok::Eq);
    (void)eq;
    Term rhs = term();
    sig_.declare_predicate("=", 2);
    return Formula::equality(std::move(lhs), std::move(rhs));
  }

  Term term() {
    const Token &t = next();
    switch (t.kind) {
    case Tok::GammaVar:
      return Term::var(Variable::gamma(t.text));
    case Tok::DeltaVar:
      return Term::var(Variable::delta(t.text));
    case Tok::Ident: {
      if (t.text == "all" || t.text == "ex")
        throw ParseError("keyword in term position", t.pos);
      if (is_bound(t.text)) {
        if (at(Tok::LParen))
          throw ParseError("bound variable '" + t.text + "' applied to arguments", t.pos);
        return Term::var(Variable::bound(t.text));
      }
      Token head = t;
      std::vector<Term> args = arguments();
      declare(head, args.size(), false);
      return Term::app(head.text, std::move(args));
    }
    default:
      throw ParseError(std::string("expected a term, found ") + describe(t.kind), t.pos);
    }
  }

  std::vector<Term> arguments() {
    std::vector<Term> args;
    if (!at(Tok::LParen))
      return args;
    next();
    args.push_back(term());
    while (at(Tok::Comma)) {
      next();
      args.push_back(term());
    }
    expect(Tok::RParen);
    return args;
  }

  Variable variable() {
    const Token &t = next();
    if (t.kind == Tok::GammaVar)
      return Variable::gamma(t.text);
    if (t.kind == Tok::DeltaVar)
      return Variable::delta(t.text);
    throw ParseError("expected a free variable (x^e or x^a)", t.pos);
  }

  std::size_t position() const { return peek().pos; }

private:
  bool is_bound(const std::string &name) const {
    for (const std::string &s : scope_)
      if (s == name)
        return true;
    return false;
  }

  // An identifier in formula position starts an equation when the matching
  // term is followed by '='. Scan ahead over a balanced argument list.
  bool at_equality_after_application() const {
    std::size_t i = pos_ + 1;
    if (toks_[i].kind == Tok::LParen) {
      int depth = 0;
      for (; toks_[i].kind != Tok::End; ++i) {
        if (toks_[i].kind == Tok::LParen)
          ++depth;
        else if (toks_[i].kind == Tok::RParen && --depth == 0)
          break;
      }
      if (toks_[i].kind == Tok::End)
        return false;
      ++i;
    }
    return toks_[i].kind == Tok::Eq;
  }

  void declare(const Token &head, std::size_t arity, bool predicate) {
    try {
      if (predicate)
        sig_.declare_predicate(head.text, arity);
      else
        sig_.declare_function(head.text, arity);
    } catch (const ParseError &) {
      throw;
    } catch (const Error &e) {
      throw ParseError(e.what(), head.pos);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Signature &sig_;
  std::vector<std::string> scope_;
};

}  // namespace

Formula parse_formula(std::string_view text, Signature &sig) {
  Parser p(text, sig);
  p.require_input();
  Formula f = p.formula();
  p.expect_end();
  return f;
}

Sequent parse_sequent(std::string_view text, Signature &sig) {
  Parser p(text, sig);
  std::vector<Formula> fs;
  if (!p.at(Tok::End)) {
    fs.push_back(p.formula());
    while (p.at(Tok::Comma)) {
      p.next();
      fs.push_back(p.formula());
    }
  }
  p.expect_end();
  return Sequent(std::move(fs));
}

Term parse_term(std::string_view text, Signature &sig) {
  Parser p(text, sig);
  p.require_input();
  Term t = p.term();
  p.expect_end();
  if (!t.bound_vars().empty())
    throw ParseError("term mentions a bound variable", 0);
  return t;
}

Variable parse_variable(std::string_view text) {
  Signature unused;
  Parser p(text, unused);
  p.require_input();
  Variable v = p.variable();
  p.expect_end();
  return v;
}

Substitution parse_substitution(std::string_view text, Signature &sig) {
  Parser p(text, sig);
  p.expect(Tok::LBrace);
  Substitution s;
  VarSet seen;
  if (!p.at(Tok::RBrace)) {
    for (;;) {
      std::size_t at = p.position();
      Variable x = p.variable();
      if (!x.is_gamma())
        throw ParseError("only gamma-variables can be instantiated", at);
      if (!seen.insert(x).second)
        throw ParseError("variable " + to_string(x) + " bound twice", at);
      p.expect(Tok::Implies);
      s.bind(x, p.term());
      if (!p.at(Tok::Comma))
        break;
      p.next();
    }
  }
  p.expect(Tok::RBrace);
  p.expect_end();
  return s;
}

std::vector<std::pair<Variable, Variable>> parse_variable_pairs(std::string_view text) {
  Signature unused;
  Parser p(text, unused);
  p.expect(Tok::LBrace);
  std::vector<std::pair<Variable, Variable>> out;
  if (!p.at(Tok::RBrace)) {
    for (;;) {
      p.expect(Tok::LParen);
      Variable a = p.variable();
      p.expect(Tok::Comma);
      Variable b = p.variable();
      p.expect(Tok::RParen);
      out.emplace_back(std::move(a), std::move(b));
      if (!p.at(Tok::Comma))
        break;
      p.next();
    }
  }
  p.expect(Tok::RBrace);
  p.expect_end();
  return out;
}

const Problem &ProblemSet::find(const std::string &name) const {
  for (const Problem &p : problems)
    if (p.name == name)
      return p;
  throw Error("no problem named '" + name + "'");
}

ProblemSet parse_problems(std::string_view text) {
  ProblemSet out;
  std::size_t offset = 0;
  std::size_t line_no = 0;
  while (offset <= text.size()) {
    std::size_t eol = text.find('\n', offset);
    if (eol == std::string_view::npos)
      eol = text.size();
    ++line_no;
    std::string_view line = text.substr(offset, eol - offset);
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    std::size_t colon = line.find(':');
    bool blank = line.find_first_not_of(" \t\r") == std::string_view::npos;
    if (!blank) {
      if (colon == std::string_view::npos)
        throw ParseError("line " + std::to_string(line_no) + ": expected 'name : sequent'", offset);
      std::string_view name = line.substr(0, colon);
      auto b = name.find_first_not_of(" \t");
      auto e = name.find_last_not_of(" \t");
      if (b == std::string_view::npos)
        throw ParseError("line " + std::to_string(line_no) + ": missing problem name", offset);
      name = name.substr(b, e - b + 1);
      for (char c : name)
        if (!ident_char(c) && c != '-' && c != '.')
          throw ParseError("line " + std::to_string(line_no) + ": bad problem name", offset);
      for (const Problem &p : out.problems)
        if (p.name == name)
          throw ParseError("line " + std::to_string(line_no) + ": duplicate problem name", offset);
      std::string_view body = line.substr(colon + 1);
      try {
        Sequent s = parse_sequent(body, out.signature);
        out.problems.push_back({std::string(name), std::move(s)});
      } catch (const ParseError &e) {
        throw ParseError("line " + std::to_string(line_no) + ": " + e.message(),
                         offset + colon + 1 + e.position());
      }
    }
    offset = eol + 1;
  }
  return out;
}

ProblemSet load_problems(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_problems(buf.str());
}

}  // namespace vcp
