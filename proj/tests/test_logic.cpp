#include <doctest.h>

#include "hetsim/errors.hpp"
#include "hetsim/ioformats.hpp"
#include "hetsim/logic.hpp"
#include "hetsim/oracle.hpp"
#include "hetsim/random.hpp"
#include "helpers.hpp"

using namespace hetsim;
using E = ConnectorExpr;

namespace {

const FinSet kAB{"a", "b"};

LambdaRel dia_ab(const FunctorKind& l, const FunctorKind& r) {
  return LambdaRel(l, r, {{Lifting::dia("a"), Lifting::dia("a")}, {Lifting::dia("b"), Lifting::dia("b")}});
}

}  // namespace

TEST_SUITE("logic") {
  TEST_CASE("parse and print") {
    const auto k = FunctorKind::plts(kAB);
    const LambdaRel lam(k, k, {{Lifting::dia("a"), Lifting::dia("a")}, {Lifting::bigbox(), Lifting::bigbox()}});
    for (const char* s : {"T", "F", "(T & F)", "(<dia(a),dia(a)>T | F)", "<dia(a),dia(a)><dia(a),dia(a)>T",
                          "<bigbox,bigbox>(T, <dia(a),dia(a)>F)"})
      CHECK(parse_formula(s, lam).str() == s);
    CHECK(parse_formula("  <dia(a), dia(a)>  T ", lam).str() == "<dia(a),dia(a)>T");
    CHECK(parse_formula("<bigbox,bigbox>(T, F)", lam).depth() == 1);
    CHECK(parse_formula("(T & <dia(a),dia(a)><dia(a),dia(a)>T)", lam).depth() == 2);
    CHECK_THROWS_AS(parse_formula("<dia(b),dia(b)>T", lam), ParseError);
    CHECK_THROWS_AS(parse_formula("<dia(a),dia(a)>(T, T)", lam), ParseError);
    CHECK_THROWS_AS(parse_formula("(T & F", lam), ParseError);
    CHECK_THROWS_AS(parse_formula("T T", lam), ParseError);
    CHECK_THROWS_AS(parse_formula("~T", lam), ParseError);
  }

  TEST_CASE("evaluation on both sides") {
    const auto c = FunctorKind::plts(FinSet{"a"});
    const auto d = FunctorKind::dlts(kAB);
    const LambdaRel lam(c, d, {{Lifting::dia("a"), Lifting::pge("a", Rational(1, 4))}});
    const Coalgebra lts = load_system(testing::data("step.chc"));
    const Coalgebra prob = parse_chc(
        "functor DLTS labels=a,b\nstates p0 p1 p2\np0: a->p1:1/4 b->p2:3/4\np1: a->p1:1\np2: b->p2:1\n");
    const Formula f = parse_formula("<dia(a),pge(a,1/4)>T", lam);
    CHECK(eval_formula(f, lts, Side::left, 0));
    CHECK_FALSE(eval_formula(f, lts, Side::left, 1));
    CHECK(eval_formula(f, prob, Side::right, 0));
    CHECK(eval_formula(f, prob, Side::right, 1));
    CHECK_FALSE(eval_formula(f, prob, Side::right, 2));
    const Formula g = parse_formula("<dia(a),pge(a,1/4)><dia(a),pge(a,1/4)>T", lam);
    CHECK(formula_extension(g, prob, Side::right).count() == 2);
    CHECK(formula_extension(g, lts, Side::left).none());
    CHECK_THROWS_AS(eval_formula(f, lts, Side::left, 5), CarrierMismatch);
  }

  TEST_CASE("two-level distinguishing formula") {
    const auto k = FunctorKind::plts(kAB);
    const Coalgebra c = parse_chc("functor PLTS labels=a,b\nstates c0 c1 c2\nc0: a->c1\nc1: b->c2\n");
    const Coalgebra d = parse_chc("functor PLTS labels=a,b\nstates d0 d1\nd0: a->d1\n");
    const LambdaRel lam = dia_ab(k, k);
    const auto f = distinguishing_formula(c, d, lam, 0, 0);
    REQUIRE(f);
    CHECK(f->str() == "<dia(a),dia(a)><dia(b),dia(b)>T");
    CHECK(eval_formula(*f, c, Side::left, 0));
    CHECK_FALSE(eval_formula(*f, d, Side::right, 0));
    CHECK_FALSE(distinguishing_formula(d, c, lam, 0, 0));
  }

  TEST_CASE("formulas separate exactly the dissimilar pairs") {
    gen::Rng rng(21);
    const auto k = FunctorKind::plts(kAB);
    const std::vector<LambdaRel> lams{
        dia_ab(k, k),
        LambdaRel(k, k, {{Lifting::dia("a"), Lifting::dia("a")}, {Lifting::box("b"), Lifting::box("b")}}),
        LambdaRel(k, k, {{Lifting::dia("a"), Lifting::dia("b")}, {Lifting::bigbox(), Lifting::bigbox()}})};
    for (int round = 0; round < 15; ++round) {
      const Coalgebra c = gen::system(k, 1 + gen::below(rng, 3), rng, 2, "x");
      const Coalgebra d = gen::system(k, 1 + gen::below(rng, 3), rng, 2, "y");
      for (const auto& lam : lams) {
        std::vector<LambdaRel::Pair> pairs = lam.pairs();
        const SimResult sim = greatest_simulation(c, d, E::kant(pairs));
        CHECK(oracle::formula_enum_theory(c, d, lam) == sim.relation);
        Distinguisher dist(c, d, lam, sim);
        for (std::size_t x = 0; x < c.size(); ++x)
          for (std::size_t y = 0; y < d.size(); ++y) {
            const auto f = dist.formula(x, y);
            CHECK(f.has_value() != sim.relation.contains(x, y));
            if (!f) continue;
            CHECK(eval_formula(*f, c, Side::left, x));
            CHECK_FALSE(eval_formula(*f, d, Side::right, y));
            CHECK(distinguishing_formula(c, d, lam, x, y).has_value());
          }
      }
    }
  }

  TEST_CASE("zero-ary modalities on partial maps") {
    const auto s = FunctorKind::susp(FinSet{"i"}, FinSet{"o"});
    const LambdaRel lam(s, s, {{Lifting::up("i"), Lifting::up("i")}});
    const Formula f = parse_formula("<up(i),up(i)>()", lam);
    CHECK(f.str() == "<up(i),up(i)>()");
    const Coalgebra m = parse_chc("functor SUSP in=i out=o\nstates q0 q1\nq0: i->q1 o->q0\nq1: o->q1\n");
    CHECK(eval_formula(f, m, Side::left, 0));
    CHECK_FALSE(eval_formula(f, m, Side::left, 1));
  }
}
