#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace vcp::cli;

int main(int argc, char **argv) {
  CLI::App app{"Tableau prover with variable- and choice-conditions"};
  app.require_subcommand(1);

  ProveOptions prove;
  auto *p = app.add_subcommand("prove", "search for a proof of one problem");
  p->add_option("file", prove.file, "problem file")->required();
  p->add_option("name", prove.name, "problem name; optional if the file holds one problem");
  p->add_option("--mode", prove.mode, "weak or strong")
      ->check(CLI::IsMember({"weak", "strong"}))
      ->capture_default_str();
  p->add_option("--gamma", prove.gamma, "gamma-multiplicity")->capture_default_str();
  p->add_option("--budget", prove.budget, "proof node budget")->capture_default_str();
  p->add_option("--emit-proof", prove.emit_proof, "write the replayable trace here");
  p->add_flag("--answers", prove.answers, "print values of the free gamma-variables");
  p->add_option("--check-sizes", prove.check_sizes,
                "cross-check a proof on all structures up to this size");

  std::string trace_path, problems_path;
  auto *r = app.add_subcommand("replay", "re-run a trace through the kernel");
  r->add_option("trace", trace_path, "trace file")->required();
  r->add_option("problems", problems_path, "problem file")->required();

  OracleOptions oracle;
  auto *o = app.add_subcommand("oracle", "decide validity and reduction on finite structures");
  o->add_option("query", oracle.query, "valid, strong-valid, reduces or strong-reduces")
      ->required()
      ->check(CLI::IsMember({"valid", "strong-valid", "reduces", "strong-reduces"}));
  o->add_option("--structure", oracle.structure, "structure file or text");
  o->add_option("--all-sizes", oracle.all_sizes, "every structure of size 1..m");
  o->add_option("--g0", oracle.g0, "sequent of G0 (repeatable)");
  o->add_option("--g1", oracle.g1, "sequent of G1 (repeatable)");
  o->add_option("--vc", oracle.vc, "variable condition, e.g. {(x^e,y^a)}");
  o->add_option("--choice", oracle.choices, "choice entry 'y^a : B' (repeatable)");
  o->add_option("--order", oracle.order, "ordering of delta-variables");

  std::string repl_file, repl_name, repl_mode = "strong";
  auto *i = app.add_subcommand("repl", "step through a proof interactively");
  i->add_option("file", repl_file, "problem file")->required();
  i->add_option("name", repl_name, "problem name");
  i->add_option("--mode", repl_mode, "weak or strong")
      ->check(CLI::IsMember({"weak", "strong"}))
      ->capture_default_str();

  std::uint64_t seed = 20240611;
  auto *s = app.add_subcommand("selftest", "run the acceptance criteria");
  s->add_option("--seed", seed, "seed for the randomized suites")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? 0 : kError;
  }

  const bool is_prove = p->parsed();
  try {
    if (is_prove)
      return cmd_prove(prove, std::cout);
    if (r->parsed())
      return cmd_replay(trace_path, problems_path, std::cout);
    if (o->parsed())
      return cmd_oracle(oracle, std::cout);
    if (i->parsed())
      return cmd_repl(repl_file, repl_name, repl_mode, std::cin, std::cout);
    return cmd_selftest(seed, std::cout);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    if (is_prove)
      std::cout << "RESULT: error\n";
    return kError;
  }
}
