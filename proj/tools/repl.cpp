#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "commands.hpp"
#include "vcp/prover.hpp"

namespace vcp::cli {

namespace {

const char *kHelp =
    "commands:\n"
    "  show                        print the forest, R, < and C\n"
    "  alpha|beta|gamma|delta <leaf> <idx> [var]\n"
    "                              expand formula <idx> of leaf <leaf>; <leaf> may be\n"
    "                              written <tree>#<leaf>\n"
    "  inst { x^e -> t, ... }      instantiate gamma-variables\n"
    "  close                       search for a closing substitution and apply it\n"
    "  undo                        drop the last step\n"
    "  save <path>                 write the trace\n"
    "  help, quit\n";

bool in_family(RuleTag tag, const std::string &family) {
  switch (tag) {
  case RuleTag::AlphaOr:
  case RuleTag::AlphaNand:
  case RuleTag::AlphaNotNot:
    return family == "alpha";
  case RuleTag::BetaAnd:
  case RuleTag::BetaNor:
    return family == "beta";
  case RuleTag::GammaEx:
  case RuleTag::GammaNall:
    return family == "gamma";
  case RuleTag::DeltaAll:
  case RuleTag::DeltaNex:
    return family == "delta";
  }
  return false;
}

RuleInstance parse_step(const ProofForest &f, const std::string &family,
                        std::istringstream &words) {
  std::string where, var;
  std::size_t index = 0;
  if (!(words >> where >> index))
    throw Error("expected '" + family + " <leaf> <idx> [var]'");
  words >> var;
  RuleInstance r{};
  if (auto hash = where.find('#'); hash != std::string::npos) {
    r.tree = std::stoul(where.substr(0, hash));
    r.leaf = std::stoul(where.substr(hash + 1));
  } else {
    r.leaf = std::stoul(where);
  }
  if (r.tree >= f.entries().size())
    throw Error("no tree " + std::to_string(r.tree));
  const ProofTree &tree = f.entries()[r.tree].tree;
  if (r.leaf >= tree.leaf_count())
    throw Error("no leaf " + std::to_string(r.leaf));
  const Sequent &s = tree.leaf(r.leaf);
  if (index >= s.size())
    throw Error("leaf " + std::to_string(r.leaf) + " has no formula " + std::to_string(index));
  r.index = index;
  auto tag = rule_for(s[index]);
  if (!tag || !in_family(*tag, family))
    throw Error(to_string(s[index]) + " is not a " + family + "-formula");
  r.tag = *tag;
  if (!var.empty()) {
    if (family != "gamma" && family != "delta")
      throw Error("only gamma- and delta-steps take a variable");
    r.var = parse_variable(var);
  }
  return r;
}

}  // namespace

int cmd_repl(const std::string &file, const std::string &name, const std::string &mode,
             std::istream &in, std::ostream &out) {
  ProblemSet set = load_problems(file);
  const Problem *problem = nullptr;
  if (!name.empty())
    problem = &set.find(name);
  else if (set.problems.size() == 1)
    problem = &set.problems.front();
  else
    throw Error("the file holds several problems; name one of them");

  std::vector<ProofForest> history{
      ProofForest(parse_mode(mode)).hypothesize(problem->sequent, {}, problem->name)};
  out << history.back().render();

  for (std::string line; out << "> " << std::flush, std::getline(in, line);) {
    std::istringstream words(line);
    std::string cmd;
    if (!(words >> cmd))
      continue;
    const ProofForest &now = history.back();
    try {
      if (cmd == "quit" || cmd == "exit")
        break;
      if (cmd == "help") {
        out << kHelp;
      } else if (cmd == "show") {
        out << now.render();
      } else if (cmd == "alpha" || cmd == "beta" || cmd == "gamma" || cmd == "delta") {
        history.push_back(now.expand(parse_step(now, cmd, words)));
        out << history.back().render();
      } else if (cmd == "inst") {
        std::string rest;
        std::getline(words, rest);
        history.push_back(now.instantiate(parse_substitution(rest, set.signature)));
        out << history.back().render();
      } else if (cmd == "close") {
        auto sigma = close_attempt(now);
        if (!sigma) {
          out << "no admissible closing substitution\n";
          continue;
        }
        ProofForest next = now.instantiate(*sigma);
        for (std::size_t t = 0; t < next.entries().size(); ++t)
          if (next.is_closed(t))
            next = next.qed(t);
        history.push_back(std::move(next));
        out << "closed with " << to_string(*sigma) << "\n" << history.back().render();
      } else if (cmd == "undo") {
        if (history.size() == 1)
          out << "nothing to undo\n";
        else
          history.pop_back();
        out << history.back().render();
      } else if (cmd == "save") {
        std::string path;
        if (!(words >> path))
          throw Error("expected 'save <path>'");
        std::ofstream f(path);
        if (!f)
          throw Error("cannot write '" + path + "'");
        for (const std::string &t : now.trace())
          f << t << "\n";
        out << "trace written to " << path << "\n";
      } else {
        out << "unknown command '" << cmd << "'; try help\n";
      }
    } catch (const Error &e) {
      out << "error: " << e.what() << "\n";
    } catch (const std::logic_error &e) {
      out << "error: " << e.what() << "\n";
    }
  }
  return kProved;
}

}  // namespace vcp::cli
