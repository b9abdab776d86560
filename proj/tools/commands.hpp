#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vcp/calculus.hpp"

namespace vcp::cli {

// Exit codes shared by the subcommands.
inline constexpr int kProved = 0;
inline constexpr int kUnproven = 1;
inline constexpr int kError = 2;
inline constexpr int kOracleDisagrees = 3;

struct ProveOptions {
  std::string file;
  std::string name;  // empty: the file must hold exactly one problem
  std::string mode = "strong";
  std::size_t gamma = 2;
  std::size_t budget = 20000;
  std::string emit_proof;
  bool answers = false;
  std::size_t check_sizes = 0;
};

struct OracleOptions {
  std::string query;
  std::string structure;  // a file holding a structure, or the text itself
  std::size_t all_sizes = 0;
  std::vector<std::string> g0;
  std::vector<std::string> g1;
  std::string vc = "{}";
  std::vector<std::string> choices;
  std::string order = "{}";
};

Mode parse_mode(const std::string &text);
std::string read_file(const std::string &path);

int cmd_prove(const ProveOptions &opt, std::ostream &out);
int cmd_replay(const std::string &trace_path, const std::string &problems_path,
               std::ostream &out);
int cmd_oracle(const OracleOptions &opt, std::ostream &out);
int cmd_repl(const std::string &file, const std::string &name, const std::string &mode,
             std::istream &in, std::ostream &out);
int cmd_selftest(std::uint64_t seed, std::ostream &out);

}  // namespace vcp::cli
