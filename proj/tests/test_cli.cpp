#include <doctest.h>

#include <sstream>

#include "hetsim/cli.hpp"
#include "helpers.hpp"

using testing::data;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = hetsim::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("gsim prints the relation or a verdict for one pair") {
    const Run all = run({"gsim", "--left", data("loop_a.chc"), "--right", data("loop_a.chc"), "--connector",
                         data("id.conn")});
    CHECK(all.code == 0);
    CHECK(all.out == "s0\ts0\n");
    const Run same = run({"gsim", "--left", data("loop_a.chc"), "--right", data("loop_a.chc"), "--connector",
                          data("id.conn"), "--pair", "s0", "s0"});
    CHECK(same.code == 0);
    CHECK(same.out == "similar\ts0\ts0\n");
    const Run fail = run({"gsim", "--left", data("loop_a.chc"), "--right", data("deadlock.chc"), "--connector",
                          data("dia.conn"), "--pair", "s0", "t0"});
    CHECK(fail.code == 1);
    CHECK(fail.out ==
          "not similar\ts0\tt0\n"
          "counterexample\npair\ts0\tt0\nround\t1\nclause\t(dia(a),dia(a)) with A=({s0})\nend\n");
  }

  TEST_CASE("gsim bisimulation and weak connectors") {
    const Run b = run({"gsim", "--left", data("cycle.aut"), "--right", data("cycle.aut"), "--connector",
                       data("id.conn"), "--bisim"});
    CHECK(b.code == 0);
    CHECK(b.out == "s0\ts0\ns1\ts1\ns2\ts2\n");
    const Run w = run({"gsim", "--left", data("tau_then_a.chc"), "--right", data("a_only.chc"), "--connector",
                       data("weak_t.conn"), "--pair", "x0", "y0"});
    CHECK(w.code == 0);
    CHECK(w.out == "similar\tx0\ty0\n");
  }

  TEST_CASE("distinguish") {
    const Run f = run({"distinguish", "--left", data("step.chc"), "--right", data("deadlock.chc"),
                       "--connector-lambda", data("dia.conn"), "--pair", "s0", "t0"});
    CHECK(f.code == 1);
    CHECK(f.out.rfind("<dia(a),dia(a)>T\n", 0) == 0);
    const Run s = run({"distinguish", "--left", data("step.chc"), "--right", data("step.chc"),
                       "--connector-lambda", data("dia.conn"), "--pair", "s0", "s0"});
    CHECK(s.code == 0);
    CHECK(s.out == "similar\n");
    const Run bad = run({"distinguish", "--left", data("step.chc"), "--right", data("step.chc"),
                         "--connector-lambda", data("id.conn"), "--pair", "s0", "s0"});
    CHECK(bad.code == 2);
  }

  TEST_CASE("ioco and compatibility") {
    const Run ok = run({"ioco", "--spec", data("spec.chc"), "--impl", data("impl_ok.chc")});
    CHECK(ok.code == 0);
    CHECK(ok.out.rfind("ioco\ts0\tm0\nrelation\n", 0) == 0);
    const Run bad = run({"ioco", "--spec", data("spec.chc"), "--impl", data("impl_bad.chc")});
    CHECK(bad.code == 1);
    CHECK(bad.out == "not ioco\ts0\tm0\ncounterexample\npair\ts0\tm0\nround\t2\nclause\t(ioco-in)\nend\n");
    CHECK(run({"ioco", "--spec", data("spec_coffee.chc"), "--compat", data("spec_tea.chc")}).code == 1);
    CHECK(run({"ioco", "--spec", data("spec_coffee.chc"), "--compat", data("spec_coffee.chc")}).code == 0);
    CHECK(run({"ioco", "--spec", data("spec.chc")}).code == 2);
    CHECK(run({"ioco", "--spec", data("loop_a.chc"), "--impl", data("impl_ok.chc")}).code == 2);
  }

  TEST_CASE("usage errors and caps") {
    CHECK(run({}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({"gsim", "--left", data("missing.chc"), "--right", data("loop_a.chc"), "--connector",
               data("id.conn")})
              .code == 2);
    CHECK(run({"gsim", "--left", data("loop_a.chc")}).code == 2);
    CHECK(run({"gsim", "--left", data("loop_a.chc"), "--right", data("loop_a.chc"), "--connector", data("id.conn"),
               "--pair", "s0", "nope"})
              .code == 2);
    CHECK(run({"gsim", "--left", data("loop_a.chc"), "--right", data("loop_a.chc"), "--connector",
               data("dia.conn"), "--support-cap", "0"})
              .code == 3);
    CHECK(run({"--help"}).code == 0);
  }

  TEST_CASE("selftest") {
    const Run a = run({"selftest", "--seed", "3", "--cases", "4", "--max-states", "2"});
    CHECK(a.code == 0);
    CHECK(a.out.rfind("selftest seed=3 cases=4 max-states=2\n", 0) == 0);
    CHECK(a.out.find("summary: 19 passed, 0 failed") != std::string::npos);
    CHECK(run({"selftest", "--seed", "3", "--cases", "4", "--max-states", "2"}).out == a.out);
  }
}
