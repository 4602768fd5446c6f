#include <doctest.h>

#include "hetsim/connectors.hpp"
#include "hetsim/ioformats.hpp"
#include "hetsim/oracle.hpp"
#include "hetsim/random.hpp"
#include "helpers.hpp"

using namespace hetsim;
using testing::plts;
using testing::rel;
using E = ConnectorExpr;

namespace {

const FinSet kA{"a"};

EvalOptions no_closed_forms() {
  EvalOptions o;
  o.use_closed_forms = false;
  return o;
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("Barr extension of the diagonal and the empty relation") {
    const auto k = FunctorKind::plts(kA);
    const FinSet x{"x"};
    const auto diag = oracle::brute_barr(k, Rel::identity(x));
    CHECK(diag.left.size() == 2);
    CHECK(diag.pairs.size() == 2);
    for (const auto& [i, j] : diag.pairs) CHECK(diag.left[i] == diag.right[j]);
    const auto none = oracle::brute_barr(k, Rel(x, x));
    REQUIRE(none.pairs.size() == 1);
    CHECK(none.contains(plts({}), plts({})));
    CHECK_FALSE(none.contains(plts({{0, 0}}), plts({{0, 0}})));
  }

  TEST_CASE("composite with the identity connector") {
    const auto k = FunctorKind::plts(kA);
    const Connector id = bind(E::id(), k, k);
    const FinSet x{"x0", "x1"};
    testing::for_each_relation(x, x, [&](const Rel& r) {
      for (const auto& a : enumerate_terms(k, 2))
        for (const auto& b : enumerate_terms(k, 2)) {
          const bool direct = id.lift(r, a, b);
          CHECK(oracle::brute_compose(id, id, r, a, b, no_closed_forms()) == direct);
          CHECK(oracle::brute_compose(id, id, r, a, b, no_closed_forms(), oracle::FactorMode::all_boxes) == direct);
        }
    });
  }

  TEST_CASE("maximal boxes agree with the full join on tiny carriers") {
    const auto k = FunctorKind::plts(kA);
    const Connector lf = bind(E::lf(), k, k);
    const Connector kr = bind(E::lr({{"a", "a"}}), k, k);
    for (std::size_t nx = 1; nx <= 2; ++nx) {
      const FinSet x = FinSet::numbered("x", nx), y{"y0"};
      testing::for_each_relation(x, y, [&](const Rel& r) {
        for (const auto& a : enumerate_terms(k, nx))
          for (const auto& b : enumerate_terms(k, 1)) {
            const bool boxes = oracle::brute_compose(lf, kr, r, a, b, no_closed_forms());
            CHECK(boxes == oracle::brute_compose_join(lf, kr, r, a, b, 3, no_closed_forms()));
          }
      });
    }
  }

  TEST_CASE("composite of Kantorovich connectors on a one-state chain") {
    const auto k = FunctorKind::plts(FinSet{"a", "b"});
    const E r_expr = E::kant({{Lifting::dia("a"), Lifting::dia("b")}});
    const E q_expr = E::kant({{Lifting::dia("b"), Lifting::dia("a")}});
    const Connector kr = bind(r_expr, k, k);
    const Connector kq = bind(q_expr, k, k);
    const Connector kqr = bind(E::kant({{Lifting::dia("a"), Lifting::dia("a")}}), k, k);
    const FinSet x{"s"};
    const Rel r = Rel::identity(x);
    const FunctorTerm a_step = plts({{0, 0}});
    const FunctorTerm b_step = plts({{1, 0}});
    CHECK(oracle::brute_compose(kq, kr, r, a_step, a_step, no_closed_forms()));
    CHECK(kqr.lift(r, a_step, a_step));
    CHECK_FALSE(oracle::brute_compose(kq, kr, r, a_step, b_step, no_closed_forms()));
    CHECK_FALSE(kqr.lift(r, a_step, b_step));
  }

  TEST_CASE("formula theory") {
    const Coalgebra step = load_system(testing::data("step.chc"));
    const Coalgebra dead = load_system(testing::data("deadlock.chc"));
    const LambdaRel empty(step.kind(), dead.kind(), {});
    CHECK(oracle::formula_enum_theory(step, dead, empty) == Rel::full(step.states(), dead.states()));
    const LambdaRel dia(step.kind(), dead.kind(), {{Lifting::dia("a"), Lifting::dia("a")}});
    const Rel th = oracle::formula_enum_theory(step, dead, dia);
    CHECK_FALSE(th.contains("s0", "t0"));
    CHECK(th.contains("s1", "t0"));
    const LambdaRel back(dead.kind(), step.kind(), {{Lifting::dia("a"), Lifting::dia("a")}});
    CHECK(oracle::formula_enum_theory(dead, step, back) == Rel::full(dead.states(), step.states()));
    const auto layers = oracle::formula_theory_layers(step, dead, dia);
    CHECK(layers.stabilized);
    // depth 0 has T and F; depth 1 adds <dia(a),dia(a)>T
    CHECK(oracle::formula_extensions(layers, 0).size() == 2);
    CHECK(oracle::formula_extensions(layers, 1).size() == 3);
  }

  TEST_CASE("weak simulation oracle") {
    const Coalgebra c = load_system(testing::data("tau_then_a.chc"));
    const Coalgebra d = load_system(testing::data("a_only.chc"));
    const Rel w = oracle::weak_sim_oracle(c, d, "t");
    CHECK(w.contains("x0", "y0"));
    CHECK(w.contains("x1", "y0"));
    CHECK_FALSE(w.contains("x1", "y1"));
    CHECK(w.contains("x2", "y1"));
    const Rel back = oracle::weak_sim_oracle(d, c, "t");
    CHECK(back.contains("y0", "x0"));
    CHECK(back.contains("y0", "x1"));
    CHECK_FALSE(back.contains("y0", "x2"));
  }

  TEST_CASE("shared trace oracle") {
    const Coalgebra loop = load_system(testing::data("loop_a.chc"));
    const Coalgebra step = load_system(testing::data("step.chc"));
    CHECK(oracle::shared_trace_oracle(loop, loop).contains("s0", "s0"));
    CHECK(oracle::shared_trace_oracle(loop, step).empty());
  }

  TEST_CASE("ioco oracle") {
    const Coalgebra spec = load_system(testing::data("spec.chc"));
    const Coalgebra good = load_system(testing::data("impl_ok.chc"));
    const Coalgebra bad = load_system(testing::data("impl_bad.chc"));
    CHECK(oracle::ioco_oracle(spec, good).contains("s0", "m0"));
    CHECK_FALSE(oracle::ioco_oracle(spec, bad).contains("s0", "m0"));
    CHECK_FALSE(oracle::ioco_oracle(spec, bad).contains("s1", "m1"));
  }
}
