#include <doctest.h>

#include <stdexcept>

#include "hetsim/errors.hpp"
#include "hetsim/liftings.hpp"
#include "helpers.hpp"

using namespace hetsim;
using testing::dlts;
using testing::plts;

namespace {

const FinSet kAB{"a", "b"};

Subset bits(std::size_t n, std::initializer_list<std::size_t> on) {
  Subset s(n);
  for (auto i : on) s.set(i);
  return s;
}

bool holds(const Lifting& l, const FunctorKind& k, std::vector<Subset> args, const FunctorTerm& t, std::size_t n) {
  return eval_lifting(l, k, args, t, n);
}

// All argument tuples of the given arity over n states.
std::vector<std::vector<Subset>> all_args(std::size_t arity, std::size_t n) {
  std::vector<std::vector<Subset>> out{{}};
  for (std::size_t i = 0; i < arity; ++i) {
    std::vector<std::vector<Subset>> next;
    for (const auto& prefix : out)
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
        auto tuple = prefix;
        tuple.emplace_back(n, m);
        next.push_back(std::move(tuple));
      }
    out = std::move(next);
  }
  return out;
}

struct Case {
  FunctorKind kind;
  std::vector<Lifting> liftings;
};

std::vector<Case> catalog() {
  const FinSet io_in{"i"}, io_out{"o"};
  return {
      {FunctorKind::plts(kAB), {Lifting::dia("a"), Lifting::box("b"), Lifting::bigbox(), Lifting::bigdia()}},
      {FunctorKind::dlts(kAB),
       {Lifting::dia("a"), Lifting::box("a"), Lifting::pge("a", Rational(1, 2)), Lifting::pdual("b", Rational(1, 4)),
        Lifting::pge("b", Rational(0)), Lifting::bigdia()}},
      {FunctorKind::det(kAB), {Lifting::dia("a"), Lifting::box("b"), Lifting::bigbox()}},
      {FunctorKind::susp(io_in, io_out), {Lifting::dia("i"), Lifting::box("o"), Lifting::down("i"), Lifting::up("o")}},
      {FunctorKind::pmap(kAB), {Lifting::dia("a"), Lifting::down("b")}},
  };
}

}  // namespace

TEST_SUITE("liftings") {
  TEST_CASE("diamond and box on nondeterministic terms") {
    const auto k = FunctorKind::plts(kAB);
    const FunctorTerm t = plts({{0, 0}, {0, 1}});
    CHECK(holds(Lifting::dia("a"), k, {bits(2, {1})}, t, 2));
    CHECK_FALSE(holds(Lifting::box("a"), k, {bits(2, {1})}, t, 2));
    CHECK(holds(Lifting::box("b"), k, {bits(2, {})}, t, 2));
    CHECK_FALSE(holds(Lifting::dia("b"), k, {bits(2, {0, 1})}, t, 2));
    CHECK(holds(Lifting::bigbox(), k, {bits(2, {0, 1}), bits(2, {})}, t, 2));
    CHECK_FALSE(holds(Lifting::bigdia(), k, {bits(2, {}), bits(2, {0, 1})}, t, 2));
  }

  TEST_CASE("probability thresholds") {
    const auto k = FunctorKind::dlts(kAB);
    const FunctorTerm t = dlts({{{0, 0}, Rational(1, 4)}, {{0, 1}, Rational(1, 4)}, {{1, 1}, Rational(1, 2)}});
    CHECK(holds(Lifting::pge("a", Rational(1, 4)), k, {bits(2, {1})}, t, 2));
    CHECK_FALSE(holds(Lifting::pge("a", Rational(1, 2)), k, {bits(2, {1})}, t, 2));
    CHECK(holds(Lifting::pge("a", Rational(1, 2)), k, {bits(2, {0, 1})}, t, 2));
    CHECK(holds(Lifting::pge("b", Rational(0)), k, {bits(2, {})}, t, 2));
    // mass outside {1} under a is 1/4, not below 1/4
    CHECK_FALSE(holds(Lifting::pdual("a", Rational(1, 4)), k, {bits(2, {1})}, t, 2));
    CHECK(holds(Lifting::pdual("a", Rational(1, 2)), k, {bits(2, {1})}, t, 2));
  }

  TEST_CASE("partial maps") {
    const auto k = FunctorKind::susp(FinSet{"i"}, FinSet{"o"});
    SuspTerm t;
    t.in.image = {std::nullopt};
    t.out.image = {0};
    CHECK(holds(Lifting::down("i"), k, {}, t, 1));
    CHECK_FALSE(holds(Lifting::up("i"), k, {}, t, 1));
    CHECK(holds(Lifting::box("i"), k, {bits(1, {})}, t, 1));
    CHECK_FALSE(holds(Lifting::dia("i"), k, {bits(1, {0})}, t, 1));
    CHECK(holds(Lifting::dia("o"), k, {bits(1, {0})}, t, 1));
  }

  TEST_CASE("surface forms") {
    CHECK(Lifting::dia("a").str() == "dia(a)");
    CHECK(Lifting::pge("a", Rational(2, 4)).str() == "pge(a,1/2)");
    CHECK(dual_lifting(Lifting::pge("a", Rational(1, 2))).str() == "dual(pge(a,1/2))");
    CHECK(dual_lifting(Lifting::down("o")) == Lifting::up("o"));
    CHECK(dual_lifting(Lifting::up("o")) == Lifting::down("o"));
    CHECK(dual_lifting(Lifting::dia("a")) == Lifting::box("a"));
    CHECK(dual_lifting(Lifting::bigbox()) == Lifting::bigdia());
    for (const char* s : {"dia(a)", "box(b)", "down(o)", "up(o)", "pge(a,1/3)", "dual(pge(a,1/3))", "bigbox",
                          "bigdia"})
      CHECK(parse_lifting(s).str() == parse_lifting(parse_lifting(s).str()).str());
    CHECK(parse_lifting("dual(dia(a))") == Lifting::box("a"));
    CHECK(parse_lifting("pge(a,1)") == Lifting::pge("a", Rational(1)));
  }

  TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse_lifting("pge(a,0.5)"), ParseError);
    CHECK_THROWS_AS(parse_lifting("dia(a,b)"), ParseError);
    CHECK_THROWS_AS(parse_lifting("wobble(a)"), ParseError);
    CHECK_THROWS_AS(parse_lifting("dia("), ParseError);
    CHECK_THROWS_AS(Lifting::pge("a", Rational(3, 2)), ValidationError);
  }

  TEST_CASE("applicability") {
    CHECK_THROWS_AS(BoundLifting(Lifting::pge("a", Rational(1, 2)), FunctorKind::plts(kAB)), KindMismatch);
    CHECK_THROWS_AS(BoundLifting(Lifting::dia("c"), FunctorKind::plts(kAB)), KindMismatch);
    CHECK_THROWS_AS(BoundLifting(Lifting::down("a"), FunctorKind::plts(kAB)), KindMismatch);
    CHECK_THROWS_AS(BoundLifting(Lifting::bigbox(), FunctorKind::susp(FinSet{"i"}, FinSet{"o"})), KindMismatch);
    CHECK(applicable(Lifting::up("i"), FunctorKind::susp(FinSet{"i"}, FinSet{"o"})));
    CHECK_FALSE(applicable(Lifting::dia("a"), FunctorKind::pair(FunctorKind::det(kAB), FunctorKind::det(kAB))));
    const auto k = FunctorKind::plts(kAB);
    CHECK_THROWS_AS(eval_lifting(Lifting::dia("a"), k, {}, plts({}), 1), std::invalid_argument);
    CHECK_THROWS_AS(BoundLifting(Lifting::bigbox(), FunctorKind::plts(FinSet{"a", "b", "c"}), 2), Intractable);
    CHECK(BoundLifting(Lifting::bigbox(), FunctorKind::plts(FinSet{"a", "b", "c"})).arity() == 3);
    CHECK_THROWS_AS(LambdaRel(k, k, {{Lifting::dia("a"), Lifting::bigdia()}}), ValidationError);
  }

  TEST_CASE("dual is the complement of the lifting on the complement") {
    for (const auto& c : catalog())
      for (const auto& l : c.liftings)
        for (std::size_t n = 1; n <= 2; ++n) {
          const Lifting d = dual_lifting(l);
          CHECK(dual_lifting(d) == l);
          const BoundLifting bl(l, c.kind), bd(d, c.kind);
          REQUIRE(bl.arity() == bd.arity());
          for (const auto& t : enumerate_terms(c.kind, n))
            for (const auto& args : all_args(bl.arity(), n)) {
              std::vector<Subset> comp;
              for (const auto& a : args) comp.push_back(~a);
              CHECK(bd.eval(args, t, n) == !bl.eval(comp, t, n));
            }
        }
  }

  TEST_CASE("liftings are monotone and natural") {
    for (const auto& c : catalog())
      for (const auto& l : c.liftings) {
        const BoundLifting bl(l, c.kind);
        const std::size_t n = 2;
        const auto tuples = all_args(bl.arity(), n);
        for (const auto& t : enumerate_terms(c.kind, n)) {
          for (const auto& a : tuples)
            for (const auto& b : tuples) {
              bool le = true;
              for (std::size_t i = 0; i < a.size(); ++i) le = le && a[i].is_subset_of(b[i]);
              if (le && bl.eval(a, t, n)) CHECK(bl.eval(b, t, n));
            }
          // naturality under the collapse 0,1 -> 0 of a 2-element carrier
          const std::vector<std::size_t> f{0, 0};
          const FunctorTerm ft = fmap(f, t);
          for (const auto& a : all_args(bl.arity(), 1)) {
            std::vector<Subset> pre;
            for (const auto& s : a) pre.push_back(s[0] ? bits(2, {0, 1}) : bits(2, {}));
            CHECK(bl.eval(a, ft, 1) == bl.eval(pre, t, n));
          }
        }
      }
  }

  TEST_CASE("positive skeletons") {
    const auto k = FunctorKind::plts(kAB);
    const PosExpr sk = PosExpr::conj({PosExpr::apply(Lifting::dia("a"), {PosExpr::placeholder(0)}),
                                      PosExpr::apply(Lifting::box("b"), {PosExpr::placeholder(2)})});
    const Lifting p = Lifting::pos(sk);
    CHECK(p.arity(k) == 3);
    const FunctorTerm t = plts({{0, 0}, {1, 1}});
    CHECK(holds(p, k, {bits(2, {0}), bits(2, {}), bits(2, {1})}, t, 2));
    CHECK_FALSE(holds(p, k, {bits(2, {0}), bits(2, {}), bits(2, {0})}, t, 2));
    const Lifting d = dual_lifting(p);
    CHECK(holds(d, k, {bits(2, {0}), bits(2, {}), bits(2, {})}, t, 2));
    CHECK(parse_lifting(p.str()) == p);
    CHECK_THROWS_AS(
        Lifting::pos(PosExpr::apply(Lifting::dia("a"), {PosExpr::apply(Lifting::dia("a"), {PosExpr::placeholder(0)})})),
        ValidationError);
    CHECK_THROWS_AS(Lifting::pos(PosExpr::placeholder(0)), ValidationError);
    CHECK_THROWS_AS(BoundLifting(Lifting::pos(PosExpr::apply(Lifting::bigbox(), {})), k), ValidationError);
    CHECK(holds(Lifting::pos(PosExpr::top()), k, {}, t, 2));
  }

  TEST_CASE("lambda relations") {
    const auto p = FunctorKind::plts(FinSet{"a"});
    const auto d = FunctorKind::dlts(kAB);
    const LambdaRel lam(p, d, {{Lifting::dia("a"), Lifting::pge("a", Rational(1, 2))},
                               {Lifting::dia("a"), Lifting::pge("a", Rational(1, 2))}});
    CHECK(lam.size() == 1);
    const LambdaRel dual = lambda_dual(lam);
    CHECK(dual.contains(Lifting::box("a"), Lifting::pdual("a", Rational(1, 2))));
    const LambdaRel conv = lambda_converse(lam);
    CHECK(conv.left() == d);
    CHECK(conv.contains(Lifting::pge("a", Rational(1, 2)), Lifting::dia("a")));
    const LambdaRel theta(d, p, {{Lifting::pge("a", Rational(1, 2)), Lifting::box("a")},
                                 {Lifting::dia("b"), Lifting::dia("a")}});
    const LambdaRel comp = lambda_compose(theta, lam);
    CHECK(comp.left() == p);
    CHECK(comp.right() == p);
    CHECK(comp.size() == 1);
    CHECK(comp.contains(Lifting::dia("a"), Lifting::box("a")));
    CHECK_THROWS_AS(LambdaRel(p, d, {{Lifting::dia("b"), Lifting::dia("b")}}), KindMismatch);
  }
}
