#include <doctest.h>

#include "hetsim/ioformats.hpp"
#include "hetsim/random.hpp"
#include "hetsim/simulation.hpp"
#include "helpers.hpp"

using namespace hetsim;
using E = ConnectorExpr;

namespace {

// Direct check of the simulation condition, independent of is_simulation.
bool simulates(const Rel& r, const Coalgebra& c, const Coalgebra& d, const Connector& l) {
  for (auto [x, y] : r.pairs())
    if (!l.lift(r, c(x), d(y))) return false;
  return true;
}

Rel converse_rel(const Rel& r) {
  Rel c(r.dst(), r.src());
  for (auto [x, y] : r.pairs()) c.insert(y, x);
  return c;
}

}  // namespace

TEST_SUITE("simulation") {
  TEST_CASE("loop and deadlock") {
    const Coalgebra loop = load_system(testing::data("loop_a.chc"));
    const Coalgebra dead = load_system(testing::data("deadlock.chc"));
    const E dia = E::kant({{Lifting::dia("a"), Lifting::dia("a")}});
    const SimResult fwd = greatest_simulation(loop, dead, dia);
    CHECK(fwd.relation.empty());
    REQUIRE(fwd.removal_log.size() == 1);
    CHECK(fwd.removal_log[0].round == 1);
    CHECK(fwd.removal_log[0].clause == "(dia(a),dia(a)) with A=({s0})");
    REQUIRE(fwd.removal_log[0].witness);
    CHECK(fwd.rounds == 2);
    CHECK(fwd.relation_before(1) == Rel::full(loop.states(), dead.states()));
    CHECK(fwd.relation_before(2).empty());
    const SimResult back = greatest_simulation(dead, loop, dia);
    CHECK(back.relation == Rel::full(dead.states(), loop.states()));
    CHECK(back.removal_log.empty());
  }

  TEST_CASE("removal rounds follow the step chain") {
    // chain of three a-steps against a chain of two
    const Coalgebra c = parse_chc("functor PLTS labels=a\nstates c0 c1 c2 c3\nc0: a->c1\nc1: a->c2\nc2: a->c3\n");
    const Coalgebra d = parse_chc("functor PLTS labels=a\nstates d0 d1 d2\nd0: a->d1\nd1: a->d2\n");
    const SimResult sim = greatest_simulation(c, d, E::lf());
    CHECK_FALSE(sim.relation.contains("c0", "d0"));
    CHECK(sim.relation.contains("c1", "d0"));
    CHECK(sim.relation.contains("c3", "d2"));
    std::size_t round_c0_d0 = 0;
    for (const auto& r : sim.removal_log)
      if (r.x == 0 && r.y == 0) round_c0_d0 = r.round;
    CHECK(round_c0_d0 == 3);
    for (std::size_t i = 1; i < sim.removal_log.size(); ++i)
      CHECK(sim.removal_log[i - 1].round <= sim.removal_log[i].round);
    CHECK(sim.relation_before(sim.rounds) == sim.relation);
  }

  TEST_CASE("greatest simulation is the union of all simulations") {
    gen::Rng rng(11);
    const auto k = FunctorKind::plts(FinSet{"a", "b"});
    const std::vector<E> exprs{E::lf(), E::lr({{"a", "a"}, {"b", "b"}}), E::kr({{"a", "b"}, {"b", "a"}}),
                               E::kant({{Lifting::dia("a"), Lifting::dia("a")}, {Lifting::box("b"), Lifting::box("b")}})};
    for (int round = 0; round < 12; ++round) {
      const Coalgebra c = gen::system(k, 1 + gen::below(rng, 3), rng, 2, "x");
      const Coalgebra d = gen::system(k, 1 + gen::below(rng, 3), rng, 2, "y");
      for (const auto& e : exprs) {
        const Connector l = bind(e, k, k);
        const SimResult sim = greatest_simulation(c, d, l);
        CHECK(simulates(sim.relation, c, d, l));
        CHECK_FALSE(is_simulation(sim.relation, c, d, l));
        Rel joined(c.states(), d.states());
        testing::for_each_relation(c.states(), d.states(), [&](const Rel& r) {
          if (!simulates(r, c, d, l)) return;
          CHECK(r.subset_of(sim.relation));
          for (auto [x, y] : r.pairs()) joined.insert(x, y);
        });
        CHECK(joined == sim.relation);
      }
    }
  }

  TEST_CASE("is_simulation reports the first offending pair") {
    const Coalgebra loop = load_system(testing::data("loop_a.chc"));
    const Coalgebra step = load_system(testing::data("step.chc"));
    const Connector lf = bind(E::lf(), loop.kind(), step.kind());
    const Rel r = Rel::full(loop.states(), step.states());
    const auto bad = is_simulation(r, loop, step, lf);
    REQUIRE(bad);
    CHECK(*bad == std::pair<std::size_t, std::size_t>{0, 1});
  }

  TEST_CASE("converse simulations and composites") {
    gen::Rng rng(5);
    const auto k = FunctorKind::plts(FinSet{"a"});
    const Connector lf = bind(E::lf(), k, k);
    const Connector lf_conv = bind(E::conv(E::lf()), k, k);
    for (int round = 0; round < 10; ++round) {
      const Coalgebra c = gen::system(k, 1 + gen::below(rng, 3), rng, 2, "x");
      const Coalgebra d = gen::system(k, 1 + gen::below(rng, 3), rng, 2, "y");
      const Coalgebra e = gen::system(k, 1 + gen::below(rng, 3), rng, 2, "z");
      const Rel r = greatest_simulation(c, d, lf).relation;
      const Rel s = greatest_simulation(d, e, lf).relation;
      // r is an L-simulation iff r° is an L°-simulation
      CHECK(simulates(converse_rel(r), d, c, lf_conv));
      CHECK(greatest_simulation(d, c, lf_conv).relation == converse_rel(r));
      // simulations compose
      CHECK(simulates(compose(s, r), c, e, lf));
      CHECK(compose(s, r).subset_of(greatest_simulation(c, e, lf).relation));
    }
  }

  TEST_CASE("bisimulation") {
    const Coalgebra m = load_system(testing::data("cycle.aut"));
    const SimResult b = greatest_bisimulation(m, m, E::lf());
    CHECK(b.relation == Rel::identity(m.states()));
    const Coalgebra loop = load_system(testing::data("loop_a.chc"));
    const Coalgebra two = parse_chc("functor PLTS labels=a\nstates u v\nu: a->v\nv: a->u\n");
    CHECK(greatest_bisimulation(loop, two, E::lf()).relation == Rel::full(loop.states(), two.states()));
    const Coalgebra step = load_system(testing::data("step.chc"));
    const SimResult sb = greatest_bisimulation(step, loop, E::lf());
    CHECK(sb.relation.empty());
    const SimResult self = greatest_bisimulation(step, step, E::lf());
    CHECK(self.relation == Rel::identity(step.states()));
  }

  TEST_CASE("pointwise connector order") {
    const auto k = FunctorKind::plts(FinSet{"a", "b"});
    const Connector lr = bind(E::lr({{"a", "a"}, {"b", "b"}}), k, k);
    const Connector lf = bind(E::lf(), k, k);
    const FinSet x{"x0"}, y{"y0", "y1"};
    const LeqReport up = connector_leq_on(lr, lf, x, y);
    CHECK(up.holds);
    CHECK(up.exhaustive);
    CHECK(up.checked > 0);
    const LeqReport down = connector_leq_on(lf, lr, x, y);
    CHECK_FALSE(down.holds);
    REQUIRE(down.counterexample);
    CHECK(lf.lift(down.counterexample->r, down.counterexample->a, down.counterexample->b));
    CHECK_FALSE(lr.lift(down.counterexample->r, down.counterexample->a, down.counterexample->b));
    const LeqReport sampled = connector_leq_on(lr, lf, FinSet{"x0", "x1", "x2"}, FinSet{"y0", "y1", "y2"}, 500, 3);
    CHECK(sampled.holds);
    CHECK_FALSE(sampled.exhaustive);
    CHECK(sampled.checked == 500);
  }
}
