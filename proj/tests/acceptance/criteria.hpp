#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace vcp::acceptance {

struct Verdict {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  std::function<Verdict(std::uint64_t seed)> run;
};

/// The nine acceptance criteria in order. Randomized ones draw from `seed`.
const std::vector<Criterion> &criteria();

/// Runs every criterion, catching exceptions as failures.
std::vector<Verdict> run_all(std::uint64_t seed);

std::string format(const Verdict &v);

// Exact outcome counters of the property suites, exposed for the unit tests.
struct SuiteStats {
  std::size_t instances = 0;
  std::size_t checks = 0;
  std::size_t nonvacuous = 0;  // checks whose premise held
  std::size_t violations = 0;
  std::string first_violation;
};

SuiteStats kernel_soundness(std::uint64_t seed, std::size_t sequences);

/// `item` names one lemma part, e.g. "reduction-3" or "strong-reduction-6b".
SuiteStats lemma_suite(const std::string &item, std::uint64_t seed, std::size_t instances);
const std::vector<std::string> &lemma_items();

}  // namespace vcp::acceptance
