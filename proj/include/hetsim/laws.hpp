#pragma once

// Seeded property suite over every module, shared by `hetsim selftest` and
// the test binaries.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hetsim/random.hpp"

namespace hetsim::laws {

struct LawConfig {
  std::uint64_t seed = 1;
  std::size_t cases = 25;      // random instances per check family
  std::size_t max_states = 3;  // carrier bound for random systems and relations
};

struct LawResult {
  std::string name;
  bool passed = true;
  std::uint64_t checks = 0;
  std::string detail;  // counterexample dump when !passed
};

/// Raised inside a law body to report a counterexample.
class LawFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// State handed to a law body: its own generator and a check counter.
struct LawContext {
  const LawConfig& config;
  gen::Rng rng;
  std::uint64_t checks = 0;

  /// Counts one check; throws LawFailure with `what()` when `ok` is false.
  template <class What>
  void expect(bool ok, What&& what) {
    ++checks;
    if (!ok) throw LawFailure(what());
  }
  /// Carrier size in [lo, max(lo, max_states)].
  std::size_t size(std::size_t lo = 0);
};

struct Law {
  std::string name;
  std::string summary;
  std::function<void(LawContext&)> body;
};

/// Every law group, in report order.
const std::vector<Law>& all_laws();

/// Runs one law with a generator seeded from the config seed and the law name.
LawResult run_law(const Law& law, const LawConfig& config);
std::vector<LawResult> run_all(const LawConfig& config);

/// Plain-text report: a header with the configuration, one line per law,
/// indented counterexamples, and a summary line.
std::string format_report(const LawConfig& config, const std::vector<LawResult>& results);

}  // namespace hetsim::laws
