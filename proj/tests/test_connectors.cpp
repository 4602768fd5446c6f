#include <doctest.h>

#include "hetsim/closed_forms.hpp"
#include "hetsim/connectors.hpp"
#include "hetsim/errors.hpp"
#include "hetsim/ioformats.hpp"
#include "hetsim/oracle.hpp"
#include "helpers.hpp"

using namespace hetsim;
using testing::dlts;
using testing::plts;
using testing::rel;
using E = ConnectorExpr;

namespace {

const FinSet kA{"a"};
const FinSet kAB{"a", "b"};

// The forth/back clause pair written out directly over arrows.
bool forth_by_hand(const Rel& r, const PltsTerm& s, const PltsTerm& t) {
  for (const auto& x : s.arrows) {
    bool found = false;
    for (const auto& y : t.arrows) found = found || (x.label == y.label && r.contains(x.state, y.state));
    if (!found) return false;
  }
  return true;
}

Rel converse_rel(const Rel& r) {
  Rel c(r.dst(), r.src());
  for (auto [x, y] : r.pairs()) c.insert(y, x);
  return c;
}

SuspTerm susp(std::vector<std::optional<std::size_t>> in, std::vector<std::optional<std::size_t>> out) {
  SuspTerm t;
  t.in.image = std::move(in);
  t.out.image = std::move(out);
  return t;
}

}  // namespace

TEST_SUITE("connectors") {
  TEST_CASE("Kantorovich connector between nondeterministic and probabilistic systems") {
    const auto c = FunctorKind::plts(kA);
    const auto d = FunctorKind::dlts(kAB);
    const E e = E::kant({{Lifting::dia("a"), Lifting::pge("a", Rational(1, 2))}});
    const Connector l = bind(e, c, d);
    const FinSet x{"x0", "x1"}, y{"y0", "y1", "y2"};
    const FunctorTerm a = plts({{0, 1}});
    const FunctorTerm half = dlts({{{0, 1}, Rational(1, 2)}, {{1, 2}, Rational(1, 2)}});
    const FunctorTerm quarter = dlts({{{0, 1}, Rational(1, 4)}, {{1, 2}, Rational(3, 4)}});
    CHECK(l.lift(rel(x, y, {{"x1", "y1"}}), a, half));
    CHECK_FALSE(l.lift(rel(x, y, {{"x1", "y1"}}), a, quarter));
    CHECK_FALSE(l.lift(rel(x, y, {{"x1", "y2"}}), a, half));
    CHECK(l.lift(Rel(x, y), plts({}), quarter));
    const LiftVerdict v = l.explain(rel(x, y, {{"x1", "y2"}}), a, half);
    CHECK_FALSE(v.holds);
    REQUIRE(v.witness);
    CHECK(v.witness->args.size() == 1);
    CHECK(v.witness->args[0].count() == 1);
    CHECK(v.witness->args[0][1]);
    REQUIRE(l.lambda());
    CHECK(l.lambda()->size() == 1);
  }

  TEST_CASE("Egli-Milner lifting matches the Barr extension, lf is its forth half") {
    const auto k = FunctorKind::plts(kAB);
    const FinSet x{"x0", "x1"}, y{"y0"};
    const Connector lf = bind(E::lf(), k, k);
    testing::for_each_relation(x, y, [&](const Rel& r) {
      const auto barr = oracle::brute_barr(k, r);
      for (const auto& a : enumerate_terms(k, 2))
        for (const auto& b : enumerate_terms(k, 1)) {
          const bool em = egli_milner_lift(r, a.as<PltsTerm>(), b.as<PltsTerm>());
          CHECK(em == barr.contains(a, b));
          CHECK(lf.lift(r, a, b) == forth_by_hand(r, a.as<PltsTerm>(), b.as<PltsTerm>()));
          CHECK(lf.lift(r, a, b) == forth_lift(r, a.as<PltsTerm>(), b.as<PltsTerm>()));
          CHECK(em == (forth_by_hand(r, a.as<PltsTerm>(), b.as<PltsTerm>()) &&
                       forth_by_hand(converse_rel(r), b.as<PltsTerm>(), a.as<PltsTerm>())));
        }
    });
  }

  TEST_CASE("coupling lifting matches the Barr extension") {
    const auto k = FunctorKind::dlts(kA);
    const FinSet x{"x0", "x1"}, y{"y0", "y1"};
    testing::for_each_relation(x, y, [&](const Rel& r) {
      const auto barr = oracle::brute_barr(k, r);
      for (const auto& a : enumerate_terms(k, 2))
        for (const auto& b : enumerate_terms(k, 2))
          CHECK(coupling_lift(r, a.as<DltsTerm>(), b.as<DltsTerm>()) == barr.contains(a, b));
    });
    const FinSet one{"z"};
    CHECK(coupling_lift(Rel::full(x, one), dlts({{{0, 0}, Rational(1, 3)}, {{0, 1}, Rational(2, 3)}}),
                        dlts({{{0, 0}, Rational(1)}})));
  }

  TEST_CASE("label relation liftings") {
    const auto c = FunctorKind::plts(kAB);
    const auto d = FunctorKind::plts(FinSet{"u"});
    const FinSet x{"x0"}, y{"y0", "y1"};
    const Rel r = rel(x, y, {{"x0", "y1"}});
    const LabelPairs both{{"a", "u"}, {"b", "u"}};
    // every a- or b-step must be answered by a u-step into r
    CHECK(connector_lift(E::kr(both), c, d, r, plts({{0, 0}, {1, 0}}), plts({{0, 1}})));
    CHECK_FALSE(connector_lift(E::kr(both), c, d, r, plts({{0, 0}}), plts({{0, 0}})));
    CHECK(connector_lift(E::kr({{"a", "u"}}), c, d, r, plts({{1, 0}}), plts({})));
    // lr also needs the back clause
    CHECK_FALSE(connector_lift(E::lr(both), c, d, r, plts({{0, 0}, {1, 0}}), plts({{0, 0}, {0, 1}})));
    CHECK(connector_lift(E::lr(both), c, d, r, plts({{0, 0}, {1, 0}}), plts({{0, 1}})));
    // a u-step must be answered by both an a- and a b-step
    CHECK_FALSE(connector_lift(E::lr(both), c, d, r, plts({{0, 0}}), plts({{0, 1}})));
    CHECK(kr_lift(Rel::from_pairs(kAB, FinSet{"u"}, {{"a", "u"}}), r, plts({{0, 0}}), plts({{0, 1}})));
  }

  TEST_CASE("lr over the diagonal is the Egli-Milner lifting") {
    const auto k = FunctorKind::plts(kAB);
    const FinSet x{"x0", "x1"}, y{"y0"};
    const Connector lr = bind(E::lr({{"a", "a"}, {"b", "b"}}), k, k);
    testing::for_each_relation(x, y, [&](const Rel& r) {
      for (const auto& a : enumerate_terms(k, 2))
        for (const auto& b : enumerate_terms(k, 1))
          CHECK(lr.lift(r, a, b) == egli_milner_lift(r, a.as<PltsTerm>(), b.as<PltsTerm>()));
    });
  }

  TEST_CASE("converse swaps sides") {
    const auto k = FunctorKind::plts(kA);
    const FinSet x{"x0", "x1"}, y{"y0", "y1"};
    const E e = E::kr({{"a", "a"}});
    const Connector l = bind(e, k, k);
    const Connector c = bind(E::conv(e), k, k);
    CHECK(converse(E::conv(e)) == e);
    testing::for_each_relation(x, y, [&](const Rel& r) {
      for (const auto& a : enumerate_terms(k, 2))
        for (const auto& b : enumerate_terms(k, 2)) CHECK(c.lift(converse_rel(r), b, a) == l.lift(r, a, b));
    });
  }

  TEST_CASE("composite of label relation liftings") {
    const FinSet la{"a"}, lb{"b"}, lc{"c"};
    const E q = E::lr({{"b", "c"}});
    const E rr = E::lr({{"a", "b"}});
    const Connector comp = bind(E::comp(q, rr), FunctorKind::plts(la), FunctorKind::plts(lc));
    CHECK(comp.closed_form() == std::optional<std::string>("lqlr"));
    EvalOptions brute;
    brute.use_closed_forms = false;
    const Connector slow = bind(E::comp(q, rr), FunctorKind::plts(la), FunctorKind::plts(lc), brute);
    CHECK_FALSE(slow.closed_form());
    const FinSet x{"x"}, z{"z"};
    const Rel r = rel(x, z, {{"x", "z"}});
    CHECK(comp.lift(r, plts({{0, 0}}), plts({{0, 0}})));
    CHECK_FALSE(comp.lift(r, plts({{0, 0}}), plts({})));
    CHECK(slow.lift(r, plts({{0, 0}}), plts({{0, 0}})));
    CHECK_FALSE(slow.lift(r, plts({{0, 0}}), plts({})));
    CHECK(lqlr_comp_lift(Rel::from_pairs(lb, lc, {{"b", "c"}}), Rel::from_pairs(la, lb, {{"a", "b"}}), r,
                         plts({{0, 0}}), plts({{0, 0}})));
  }

  TEST_CASE("closed forms name the description used") {
    const auto k = FunctorKind::plts(kA);
    CHECK(bind(E::comp(E::id(), E::lf()), k, k).closed_form() == std::optional<std::string>("identity"));
    CHECK(bind(E::comp(E::lf(), E::id()), k, k).closed_form() == std::optional<std::string>("identity"));
    CHECK_FALSE(bind(E::comp(E::lf(), E::lf()), k, k).closed_form());
    CHECK(bind(E::comp(E::lt(), E::conv(E::lt())), k, k).closed_form() == std::optional<std::string>("shared-step"));
    const auto s = FunctorKind::susp(FinSet{"i"}, FinSet{"o"});
    CHECK(bind(E::comp(E::conv(E::ioco()), E::ioco()), s, s).closed_form() ==
          std::optional<std::string>("ioco-compat"));
    CHECK_FALSE(bind(E::lf(), k, k).closed_form());
  }

  TEST_CASE("shared step agrees with its Kantorovich and generic forms") {
    const auto k = FunctorKind::plts(kAB);
    const Connector closed = bind(E::comp(E::lt(), E::conv(E::lt())), k, k);
    EvalOptions brute;
    brute.use_closed_forms = false;
    const Connector slow = bind(E::comp(E::lt(), E::conv(E::lt())), k, k, brute);
    const Connector kant = bind(E::kant({{Lifting::bigbox(), Lifting::bigdia()}}), k, k);
    const FinSet x{"x0", "x1"}, y{"y0"};
    testing::for_each_relation(x, y, [&](const Rel& r) {
      for (const auto& a : enumerate_terms(k, 2))
        for (const auto& b : enumerate_terms(k, 1)) {
          const bool v = closed.lift(r, a, b);
          CHECK(v == shared_step_lift(r, a.as<PltsTerm>(), b.as<PltsTerm>()));
          CHECK(v == slow.lift(r, a, b));
          CHECK(v == kant.lift(r, a, b));
        }
    });
  }

  TEST_CASE("input output conformance clauses") {
    const FinSet x{"x0", "x1"}, y{"y0", "y1"};
    const Rel r = rel(x, y, {{"x0", "y0"}, {"x1", "y1"}});
    // spec accepts i; implementation must follow and may only emit allowed outputs
    CHECK(ioco_lift(r, susp({1}, {0}), susp({1}, {0})));
    CHECK_FALSE(ioco_lift(r, susp({1}, {0}), susp({0}, {0})));
    CHECK(ioco_lift(r, susp({std::nullopt}, {0}), susp({0}, {0})));
    CHECK_FALSE(ioco_lift(r, susp({std::nullopt}, {std::nullopt, 0}), susp({0}, {0, std::nullopt})));
    CHECK(ioco_in_lift(r, MapTerm{{std::nullopt}}, MapTerm{{1}}));
    CHECK_FALSE(ioco_out_lift(r, MapTerm{{std::nullopt}}, MapTerm{{1}}));
    // compatibility: shared inputs related, some shared output related
    CHECK(ioco_compat_lift(r, susp({0}, {0, std::nullopt}), susp({0}, {0, 1})));
    CHECK_FALSE(ioco_compat_lift(r, susp({0}, {0, std::nullopt}), susp({0}, {std::nullopt, 1})));
    CHECK_FALSE(ioco_compat_lift(r, susp({1}, {0}), susp({0}, {0})));
    const auto s = FunctorKind::susp(FinSet{"i"}, FinSet{"o"});
    CHECK(natural_dst(E::ioco(), s) == FunctorKind::suspie(FinSet{"i"}, FinSet{"o"}));
  }

  TEST_CASE("weak saturation") {
    const auto k = FunctorKind::plts(FinSet{"a", "t"});
    const Coalgebra c(k, FinSet{"x0", "x1", "x2"}, {plts({{1, 1}}), plts({{0, 2}}), plts({})});
    const Coalgebra w = weak_saturate(c, "t");
    CHECK(w.kind() == FunctorKind::plts(FinSet{"a", "eps", "t"}));
    const auto& fl = w.kind().labels();
    const std::size_t a = fl.index_of("a"), eps = fl.index_of("eps"), t = fl.index_of("t");
    CHECK(w(0) == FunctorTerm(plts({{a, 2}, {eps, 0}, {eps, 1}, {t, 1}})));
    CHECK(w(1) == FunctorTerm(plts({{a, 2}, {eps, 1}})));
    CHECK(w(2) == FunctorTerm(plts({{eps, 2}})));
    const LabelPairs hat = weak_label_relation(k.labels(), "t");
    CHECK(hat == LabelPairs{{"a", "a"}, {"t", "eps"}});
  }

  TEST_CASE("expression surface and kinds") {
    CHECK(E::lt().str() == "(pull-left (lf) (incl))");
    CHECK(parse_connector(E::lt().str()) == E::lt());
    const E q = E::comp(E::lr({{"b", "c"}}), E::lr({{"a", "b"}}));
    CHECK(q.str() == "(comp (lr (rel (b c))) (lr (rel (a b))))");
    CHECK(parse_connector(q.str()) == q);
    CHECK(natural_dst(E::kr({{"a", "u"}}), FunctorKind::plts(kAB)) == FunctorKind::plts(FinSet{"u"}));
    CHECK(natural_dst(E::weak("t"), FunctorKind::plts(FinSet{"a", "t"})) ==
          FunctorKind::plts(FinSet{"a", "eps", "t"}));
    CHECK_THROWS_AS(bind(E::lf(), FunctorKind::plts(kA), FunctorKind::dlts(kA)), KindMismatch);
    CHECK_THROWS_AS(bind(E::ioco(), FunctorKind::plts(kA), FunctorKind::plts(kA)), KindMismatch);
    CHECK_THROWS_AS(bind(E::kr({{"c", "a"}}), FunctorKind::plts(kA), FunctorKind::plts(kA)), KindMismatch);
    CHECK_THROWS_AS(bind(E::kant({{Lifting::dia("a"), Lifting::pge("a", Rational(1))}}), FunctorKind::plts(kA),
                         FunctorKind::plts(kA)),
                    KindMismatch);
  }

  TEST_CASE("lax extension laws on a small instance") {
    const auto k = FunctorKind::plts(kA);
    const FinSet x{"x0", "x1"};
    const E lt_pull = E::pull_left(E::id(), NatTrans::incl());
    const Connector pulled = bind(lt_pull, FunctorKind::det(kA), k);
    const Connector lt = bind(E::lt(), FunctorKind::det(kA), k);
    for (const auto& a : enumerate_terms(FunctorKind::det(kA), 2))
      for (const auto& b : enumerate_terms(k, 2))
        testing::for_each_relation(x, x, [&](const Rel& r) {
          if (pulled.lift(r, a, b)) CHECK(lt.lift(r, a, b));
        });
    const Connector lf = bind(E::lf(), k, k);
    // identity is lifted to (at least) the identity
    for (const auto& a : enumerate_terms(k, 2)) CHECK(lf.lift(Rel::identity(x), a, a));
  }

  TEST_CASE("bigbox-only composites take the shared kind as middle") {
    const auto k = FunctorKind::plts(FinSet{"a", "b"});
    const E big = E::kant({{Lifting::bigdia(), Lifting::bigbox()}});
    const Connector c = bind(E::comp(big, big), k, k);
    CHECK(c.children()[0].src() == k);
    CHECK_NOTHROW(bind(E::conv(E::comp(big, big)), k, k));
    CHECK_THROWS_AS(bind(E::comp(big, big), k, FunctorKind::plts(FinSet{"a"})), KindMismatch);
  }
}
