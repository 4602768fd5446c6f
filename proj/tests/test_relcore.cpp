#include <doctest.h>

#include <random>

#include "hetsim/errors.hpp"
#include "hetsim/random.hpp"
#include "hetsim/relcore.hpp"
#include "helpers.hpp"

using namespace hetsim;
using testing::for_each_relation;
using testing::rel;

TEST_SUITE("relcore") {
  TEST_CASE("finset keeps declared order and rejects duplicates") {
    FinSet s{"b", "a", "c"};
    CHECK(s.size() == 3);
    CHECK(s[0] == "b");
    CHECK(s.index_of("c") == 2);
    CHECK_FALSE(s.contains("d"));
    CHECK_THROWS_AS(s.index_of("d"), CarrierMismatch);
    CHECK_THROWS_AS(FinSet({"a", "a"}), ValidationError);
    CHECK(s.format(s.subset({"a", "c"})) == "{a,c}");
    CHECK(FinSet::numbered("s", 3) == FinSet{"s0", "s1", "s2"});
  }

  TEST_CASE("composition examples") {
    FinSet x{"x"}, y{"y1", "y2"}, z{"z"};
    const Rel r = rel(x, y, {{"x", "y1"}, {"x", "y2"}});
    const Rel s = rel(y, z, {{"y2", "z"}});
    CHECK(compose(s, r) == rel(x, z, {{"x", "z"}}));
    CHECK(compose(Rel::identity(y), r) == r);
    CHECK(compose(s, Rel(x, y)).empty());
    CHECK_THROWS_AS(compose(r, r), CarrierMismatch);
  }

  TEST_CASE("converse examples") {
    FinSet x{"x"}, y{"y"}, z{"z"};
    CHECK(converse(Rel::identity(x)) == Rel::identity(x));
    CHECK(converse(rel(x, y, {{"x", "y"}})) == rel(y, x, {{"y", "x"}}));
    const Rel r = rel(x, y, {{"x", "y"}}), s = rel(y, z, {{"y", "z"}});
    CHECK(converse(compose(s, r)) == rel(z, x, {{"z", "x"}}));
    CHECK(converse(compose(s, r)) == compose(converse(r), converse(s)));
  }

  TEST_CASE("image examples") {
    FinSet x{"x", "w"}, y{"y1", "y2"};
    const Rel r = rel(x, y, {{"x", "y1"}, {"x", "y2"}});
    CHECK(image(r, x.none()).none());
    CHECK(image(Rel::identity(x), x.subset({"w"})) == x.subset({"w"}));
    CHECK(image(r, x.subset({"x"})) == y.all());
    CHECK_THROWS_AS(image(r, Subset(5)), CarrierMismatch);
  }

  TEST_CASE("relation algebra holds exhaustively at size 2") {
    FinSet x = FinSet::numbered("x", 2), y = FinSet::numbered("y", 2), z = FinSet::numbered("z", 1);
    for_each_relation(x, y, [&](const Rel& r) {
      CHECK(converse(converse(r)) == r);
      for_each_relation(y, z, [&](const Rel& s) {
        CHECK(converse(compose(s, r)) == compose(converse(r), converse(s)));
        for_each_relation(z, x, [&](const Rel& u) { CHECK(compose(u, compose(s, r)) == compose(compose(u, s), r)); });
      });
    });
  }

  TEST_CASE("graphs of maps are total and univalent") {
    FinSet x = FinSet::numbered("x", 3), y = FinSet::numbered("y", 2);
    const Rel f = Rel::graph(x, y, {0, 1, 1});
    CHECK(Rel::identity(x).subset_of(compose(converse(f), f)));
    CHECK(compose(f, converse(f)).subset_of(Rel::identity(y)));
    CHECK(is_left_total(f));
    CHECK(is_right_total(f));
  }

  TEST_CASE("couniversal factorization examples") {
    FinSet x{"x"}, z{"z"};
    auto empty = couniv_factorize(Rel(x, z));
    CHECK(empty.mid.size() == 3);
    CHECK(compose(empty.s, empty.t).empty());

    const Rel one = rel(x, z, {{"x", "z"}});
    auto f1 = couniv_factorize(one);
    CHECK(f1.mid.size() == 4);
    CHECK(compose(f1.s, f1.t) == one);

    FinSet x2{"x1", "x2"};
    const Rel full = Rel::full(x2, z);
    auto f2 = couniv_factorize(full);
    CHECK(f2.mid.size() == 8);
    CHECK(compose(f2.s, f2.t) == full);
    CHECK_FALSE(f2.warning.has_value());
    CHECK(couniv_factorize(full, 4).warning.has_value());
  }

  TEST_CASE("couniv recomposition is exact for every relation up to 3x3") {
    for (std::size_t n = 0; n <= 3; ++n)
      for (std::size_t m = 0; m <= 3; ++m)
        for_each_relation(FinSet::numbered("x", n), FinSet::numbered("z", m), [&](const Rel& r) {
          auto f = couniv_factorize(r);
          CHECK(compose(f.s, f.t) == r);
          auto g = factor_through(r, maximal_boxes(r));
          CHECK(compose(g.s, g.t) == r);
        });
  }

  TEST_CASE("maximal boxes of the diagonal") {
    FinSet x{"x1", "x2"}, y{"y1", "y2"};
    auto boxes = maximal_boxes(rel(x, y, {{"x1", "y1"}, {"x2", "y2"}}));
    CHECK(boxes.size() == 4);
    CHECK(maximal_boxes(Rel::full(x, y)).size() == 1);
  }

  TEST_CASE("factorizations map into the couniversal one") {
    std::mt19937_64 rng(5);
    for (int round = 0; round < 200; ++round) {
      FinSet x = FinSet::numbered("x", 1 + gen::below(rng, 3));
      FinSet y = FinSet::numbered("y", 1 + gen::below(rng, 3));
      FinSet z = FinSet::numbered("z", 1 + gen::below(rng, 3));
      const Rel t2 = gen::relation(x, y, rng), s2 = gen::relation(y, z, rng);
      const Rel r = compose(s2, t2);
      auto fac = couniv_factorize(r);
      std::vector<std::size_t> f;
      for (std::size_t j = 0; j < y.size(); ++j) {
        const Subset a = image(converse(t2), y.subset({y[j]}));
        const Subset b = s2.row(j);
        std::size_t hit = fac.boxes.size();
        for (std::size_t k = 0; k < fac.boxes.size(); ++k)
          if (fac.boxes[k].left == a && fac.boxes[k].right == b) hit = k;
        REQUIRE(hit < fac.boxes.size());
        f.push_back(hit);
      }
      const Rel g = Rel::graph(y, fac.mid, f);
      CHECK(compose(fac.s, g) == s2);
      CHECK(compose(converse(g), fac.t) == t2);
    }
  }
}
