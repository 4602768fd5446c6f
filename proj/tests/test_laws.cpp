#include <doctest.h>

#include "hetsim/laws.hpp"

using namespace hetsim::laws;

TEST_SUITE("laws") {
  TEST_CASE("every law group passes with the default configuration") {
    const LawConfig cfg;
    const auto results = run_all(cfg);
    CHECK(results.size() == all_laws().size());
    for (const auto& r : results) {
      INFO(r.name << "\n" << r.detail);
      CHECK(r.passed);
      CHECK(r.checks > 0);
    }
  }

  TEST_CASE("reports are deterministic and seed dependent") {
    LawConfig cfg;
    cfg.cases = 5;
    cfg.max_states = 2;
    const std::string a = format_report(cfg, run_all(cfg));
    CHECK(a == format_report(cfg, run_all(cfg)));
    cfg.seed = 99;
    CHECK(format_report(cfg, run_all(cfg)).rfind("selftest seed=99 cases=5 max-states=2\n", 0) == 0);
  }

  TEST_CASE("single-state carriers") {
    LawConfig cfg;
    cfg.cases = 5;
    cfg.max_states = 1;
    for (const auto& r : run_all(cfg)) {
      INFO(r.name << "\n" << r.detail);
      CHECK(r.passed);
    }
  }

  TEST_CASE("failures are reported with a counterexample") {
    const Law broken{"broken", "always fails", [](LawContext& ctx) {
                       ctx.expect(true, [] { return std::string(); });
                       ctx.expect(false, [] { return std::string("x\ny"); });
                     }};
    const LawConfig cfg;
    const LawResult r = run_law(broken, cfg);
    CHECK_FALSE(r.passed);
    CHECK(r.checks == 2);
    const std::string rep = format_report(cfg, {r});
    CHECK(rep.find("FAIL broken") != std::string::npos);
    CHECK(rep.find("  counterexample:\n") != std::string::npos);
    CHECK(rep.find("summary: 0 passed, 1 failed") != std::string::npos);
  }
}
