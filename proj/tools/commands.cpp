#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "acceptance/criteria.hpp"
#include "vcp/prover.hpp"
#include "vcp/semantics.hpp"

namespace vcp::cli {

Mode parse_mode(const std::string &text) {
  if (text == "weak")
    return Mode::Weak;
  if (text == "strong")
    return Mode::Strong;
  throw Error("unknown mode '" + text + "', expected weak or strong");
}

std::string read_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

namespace {

const Problem &pick_problem(const ProblemSet &set, const std::string &name) {
  if (!name.empty())
    return set.find(name);
  if (set.problems.size() != 1)
    throw Error("the file holds " + std::to_string(set.problems.size()) +
                " problems; name one of them");
  return set.problems.front();
}

// Checks the root against the semantics on every structure up to `max_size`.
// Returns the first structure where it fails.
std::optional<Structure> oracle_disagreement(const Sequent &root, Mode mode,
                                             std::size_t max_size, std::size_t &checked) {
  const std::vector<Sequent> goal{root};
  const Signature sig = signature_of(goal);
  std::optional<Structure> bad;
  for (std::size_t n = 1; n <= max_size && !bad; ++n)
    enumerate_structures(sig, n, [&](const Structure &a) {
      ++checked;
      const bool ok = mode == Mode::Strong ? is_strong_valid(goal, {}, {}, a)
                                           : is_r_valid(goal, {}, a);
      if (!ok)
        bad = a;
      return ok;
    });
  return bad;
}

}  // namespace

int cmd_prove(const ProveOptions &opt, std::ostream &out) {
  const Mode mode = parse_mode(opt.mode);
  const ProblemSet set = load_problems(opt.file);
  const Problem &problem = pick_problem(set, opt.name);

  SearchLimits limits;
  limits.gamma_multiplicity = opt.gamma;
  limits.node_budget = opt.budget;
  out << "problem " << problem.name << ": " << to_string(problem.sequent) << "\n";
  out << "mode " << opt.mode << ", gamma-multiplicity " << opt.gamma << ", node budget "
      << opt.budget << "\n";
  const ProofResult result = search(problem.sequent, mode, limits, problem.name);

  if (!result.proved) {
    out << "unproven: " << result.reason << "\n";
    if (result.countermodel)
      out << "countermodel: " << to_string(*result.countermodel) << "\n";
    else
      out << "no countermodel up to size " << limits.countermodel_size << "\n";
    out << "RESULT: unproven\n";
    return kUnproven;
  }

  out << "proved with " << to_string(result.closing) << "\n";
  out << result.forest->render();
  if (opt.answers) {
    const VarSet query = free_vars(problem.sequent).gamma;
    if (query.empty())
      out << "no free gamma-variables to answer for\n";
    else
      out << "answers:\n" << format_answers(extract_answers(result, query));
  }
  if (!opt.emit_proof.empty()) {
    std::ofstream f(opt.emit_proof);
    if (!f)
      throw Error("cannot write '" + opt.emit_proof + "'");
    f << result.trace();
    out << "proof written to " << opt.emit_proof << "\n";
  }

  // A proof is only reported after the kernel accepted its trace again.
  const ProofForest again = replay(result.trace(), set);
  if (!again.is_closed()) {
    out << "kernel replay of the proof left open leaves\n";
    out << "RESULT: error\n";
    return kOracleDisagrees;
  }
  if (opt.check_sizes > 0) {
    std::size_t checked = 0;
    if (auto bad = oracle_disagreement(problem.sequent, mode, opt.check_sizes, checked)) {
      out << "oracle disagrees: the root is not valid in " << to_string(*bad) << "\n";
      out << "RESULT: error\n";
      return kOracleDisagrees;
    }
    out << "oracle agrees on " << checked << " structures up to size " << opt.check_sizes
        << "\n";
  }
  out << "RESULT: proved\n";
  return kProved;
}

int cmd_replay(const std::string &trace_path, const std::string &problems_path,
               std::ostream &out) {
  const ProblemSet set = load_problems(problems_path);
  const std::string trace = read_file(trace_path);
  if (trace.find_first_not_of(" \t\r\n") == std::string::npos) {
    out << "empty trace: nothing is closed\n";
    return kUnproven;
  }
  const ProofForest f = replay(trace, set);
  out << f.render();
  const bool closed = !f.entries().empty() && f.is_closed();
  out << (closed ? "all trees closed\n" : "open leaves remain\n");
  return closed ? kProved : kUnproven;
}

namespace {

struct Operands {
  Signature sig;
  std::vector<Sequent> g0, g1;
  Relation vc;
  ChoiceCondition cc;
};

Operands parse_operands(const OracleOptions &opt) {
  Operands ops;
  for (const std::string &s : opt.g0)
    ops.g0.push_back(parse_sequent(s, ops.sig));
  for (const std::string &s : opt.g1)
    ops.g1.push_back(parse_sequent(s, ops.sig));
  ops.vc = parse_relation(opt.vc);
  for (const std::string &c : opt.choices) {
    auto [y, b] = parse_choice(c, ops.sig);
    ops.cc.choices.insert_or_assign(y, b);
  }
  ops.cc.order = parse_relation(opt.order);
  return ops;
}

// Verdict for one structure; detail lines go to `detail`.
bool answer_query(const std::string &query, const Operands &ops, const Structure &a,
                  std::ostream &detail) {
  auto show_valuation = [&](const char *label, const OracleReport &r) {
    if (r.valuation)
      detail << "  " << label << ": " << to_string(*r.valuation, a) << "\n";
    if (r.pi)
      detail << "  failing pi: " << to_string(*r.pi, a) << "\n";
  };
  if (query == "valid") {
    const OracleReport r = check_valid(ops.g0, ops.vc, a);
    if (r.holds)
      show_valuation("witness e", r);
    return r.holds;
  }
  if (query == "strong-valid") {
    const OracleReport r = check_strong_valid(ops.g0, ops.vc, ops.cc, a);
    if (r.holds) {
      show_valuation("witness e", r);
      return true;
    }
    const OracleReport weak = check_valid(ops.g0, ops.vc, a);
    if (weak.holds && weak.valuation) {
      detail << "  weakly valid with e: " << to_string(*weak.valuation, a) << "\n";
      if (auto cycle = find_cycle(compose(weak.valuation->s, ops.vc)))
        detail << "  S o R cycle of that e: " << format_cycle(*cycle) << "\n";
    }
    return false;
  }
  if (query == "reduces" || query == "strong-reduces") {
    const OracleReport r = query == "reduces"
                               ? check_reduces(ops.g0, ops.g1, ops.vc, a)
                               : check_strong_reduces(ops.g0, ops.g1, ops.vc, ops.cc, a);
    if (!r.holds)
      show_valuation("refuting e", r);
    return r.holds;
  }
  throw Error("unknown query '" + query + "'");
}

}  // namespace

int cmd_oracle(const OracleOptions &opt, std::ostream &out) {
  const Operands ops = parse_operands(opt);
  if (ops.g0.empty())
    throw Error("--g0 needs at least one sequent");
  if ((opt.query == "reduces" || opt.query == "strong-reduces") && ops.g1.empty())
    throw Error("--g1 needs at least one sequent for a reduction");
  if (opt.structure.empty() == (opt.all_sizes == 0))
    throw Error("give exactly one of --structure and --all-sizes");

  if (!opt.structure.empty()) {
    const std::string text = std::filesystem::exists(opt.structure) ? read_file(opt.structure)
                                                                    : opt.structure;
    const Structure a = parse_structure(text, ops.sig);
    std::ostringstream detail;
    const bool holds = answer_query(opt.query, ops, a, detail);
    out << to_string(a) << ": " << (holds ? "true" : "false") << "\n" << detail.str();
    return holds ? kProved : kUnproven;
  }

  bool all = true;
  for (std::size_t n = 1; n <= opt.all_sizes; ++n) {
    std::size_t total = 0, failed = 0;
    std::string first;
    enumerate_structures(ops.sig, n, [&](const Structure &a) {
      ++total;
      std::ostringstream detail;
      if (!answer_query(opt.query, ops, a, detail)) {
        if (failed++ == 0)
          first = to_string(a) + "\n" + detail.str();
      }
      return true;
    });
    all = all && failed == 0;
    out << "size " << n << ": " << (failed == 0 ? "true" : "false") << " (" << total - failed
        << " of " << total << " structures)\n";
    if (failed > 0)
      out << "  first failure: " << first;
  }
  return all ? kProved : kUnproven;
}

int cmd_selftest(std::uint64_t seed, std::ostream &out) {
  int failed = 0;
  for (const acceptance::Verdict &v : acceptance::run_all(seed)) {
    out << acceptance::format(v) << "\n";
    failed += v.pass ? 0 : 1;
  }
  out << failed << " of " << acceptance::criteria().size() << " criteria failed\n";
  return failed == 0 ? kProved : kUnproven;
}

}  // namespace vcp::cli
