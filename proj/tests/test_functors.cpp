#include <doctest.h>

#include "hetsim/errors.hpp"
#include "hetsim/functors.hpp"
#include "helpers.hpp"

using namespace hetsim;
using testing::dlts;
using testing::plts;

namespace {

const FinSet kA{"a"};
const FinSet kAB{"a", "b"};

std::vector<FunctorKind> small_kinds() {
  return {FunctorKind::plts(kAB),   FunctorKind::dlts(kA),
          FunctorKind::det(kAB),    FunctorKind::pmap(kAB),
          FunctorKind::tmap(kA),    FunctorKind::nemap(kAB),
          FunctorKind::susp(FinSet{"i"}, FinSet{"o"}),
          FunctorKind::suspie(FinSet{"i"}, FinSet{"o"}),
          FunctorKind::pair(FunctorKind::det(kA), FunctorKind::plts(kA))};
}

// Every total map {0..n-1} -> {0..m-1}.
std::vector<std::vector<std::size_t>> all_maps(std::size_t n, std::size_t m) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> f(n, 0);
  if (n > 0 && m == 0) return out;
  for (;;) {
    out.push_back(f);
    std::size_t i = 0;
    while (i < n && ++f[i] == m) f[i++] = 0;
    if (i == n) break;
  }
  return out;
}

}  // namespace

TEST_SUITE("functors") {
  TEST_CASE("term validation") {
    const auto d = FunctorKind::dlts(kAB);
    CHECK_FALSE(term_validate(d, dlts({{{0, 1}, Rational(1, 2)}, {{0, 2}, Rational(1, 2)}}), 3));
    auto bad = term_validate(d, dlts({{{0, 1}, Rational(1, 2)}, {{1, 2}, Rational(1, 3)}}), 3);
    REQUIRE(bad);
    CHECK(*bad == "mass 5/6 ≠ 1");

    const auto s = FunctorKind::susp(FinSet{"i"}, FinSet{"o"});
    SuspTerm t;
    t.in.image = {std::nullopt};
    t.out.image = {std::nullopt};
    auto nb = term_validate(s, t, 1);
    REQUIRE(nb);
    CHECK(nb->find("non-blocking") != std::string::npos);

    const auto ie = FunctorKind::suspie(FinSet{"i"}, FinSet{"o"});
    t.out.image = {0};
    CHECK(term_validate(ie, t, 1));
    CHECK_FALSE(term_validate(s, t, 1));
    CHECK(term_validate(FunctorKind::plts(kA), plts({{0, 3}}), 2));
  }

  TEST_CASE("fmap examples") {
    const std::vector<std::size_t> merge{0, 0};
    CHECK(fmap(merge, plts({{0, 0}, {0, 1}})) == FunctorTerm(plts({{0, 0}})));
    CHECK(fmap(merge, dlts({{{0, 0}, Rational(1, 2)}, {{0, 1}, Rational(1, 2)}})) ==
          FunctorTerm(dlts({{{0, 0}, Rational(1)}})));
    const std::vector<std::size_t> id{0, 1};
    const FunctorTerm t = plts({{1, 0}, {0, 1}});
    CHECK(fmap(id, t) == t);
  }

  TEST_CASE("support examples") {
    CHECK(support(plts({{0, 2}})) == std::vector<std::size_t>{2});
    CHECK(support(plts({})).empty());
    SuspTerm t;
    t.in.image = {1};
    t.out.image = {2};
    CHECK(support(t) == std::vector<std::size_t>{1, 2});
  }

  TEST_CASE("enumeration counts") {
    CHECK(enumerate_terms(FunctorKind::plts(kA), 1).size() == 2);
    CHECK(enumerate_terms(FunctorKind::det(kA), 1).size() == 1);
    CHECK(enumerate_terms(FunctorKind::dlts(kA), 1).size() == 1);
    CHECK(enumerate_terms(FunctorKind::plts(kAB), 2).size() == 16);
    CHECK(enumerate_terms(FunctorKind::dlts(kA), 2).size() == 5);
    CHECK(enumerate_terms(FunctorKind::nemap(kAB), 1).size() == 3);
    CHECK(enumerate_terms(FunctorKind::tmap(kAB), 3).size() == 9);
    CHECK(enumerate_terms(FunctorKind::susp(FinSet{"i"}, FinSet{"o"}), 2).size() == 6);
    CHECK(enumerate_terms(FunctorKind::nemap(kAB), 0).empty());
    TermEnumOptions tight;
    tight.cap = 10;
    CHECK_THROWS_AS(enumerate_terms(FunctorKind::plts(kAB), 2, tight), Intractable);
    for (const auto& k : small_kinds())
      for (std::size_t n = 0; n <= 2; ++n) CHECK(count_terms(k, n) == enumerate_terms(k, n).size());
  }

  TEST_CASE("validation accepts exactly the enumerated terms") {
    for (const auto& k : small_kinds())
      for (std::size_t n = 0; n <= 2; ++n) {
        const auto terms = enumerate_terms(k, n);
        for (const auto& t : terms) CHECK_FALSE(term_validate(k, t, n));
        auto sorted = terms;
        std::sort(sorted.begin(), sorted.end());
        CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
      }
  }

  TEST_CASE("functor laws and support naturality exhaustively on small carriers") {
    for (const auto& k : small_kinds()) {
      for (std::size_t n = 0; n <= 2; ++n)
        for (std::size_t m = 1; m <= 2; ++m)
          for (const auto& f : all_maps(n, m))
            for (const auto& g : all_maps(m, 2)) {
              std::vector<std::size_t> gf(n);
              for (std::size_t i = 0; i < n; ++i) gf[i] = g[f[i]];
              for (const auto& t : enumerate_terms(k, n)) {
                const FunctorTerm ft = fmap(f, t);
                CHECK_FALSE(term_validate(k, ft, m));
                CHECK(fmap(g, ft) == fmap(gf, t));
                std::vector<std::size_t> img;
                for (auto s : support(t)) img.push_back(f[s]);
                std::sort(img.begin(), img.end());
                img.erase(std::unique(img.begin(), img.end()), img.end());
                CHECK(support(ft) == img);
              }
            }
    }
  }

  TEST_CASE("kinds") {
    CHECK(FunctorKind::pair(FunctorKind::pmap(FinSet{"i"}), FunctorKind::nemap(FinSet{"o"})) ==
          FunctorKind::susp(FinSet{"i"}, FinSet{"o"}));
    CHECK(FunctorKind::plts(FinSet{"b", "a"}).labels() == kAB);
    CHECK_THROWS_AS(FunctorKind::det(FinSet{}), ValidationError);
    CHECK_THROWS_AS(FunctorKind::susp(FinSet{"x"}, FinSet{"x"}), ValidationError);
    CHECK(FunctorKind::dlts(kA).has_distributions());
    CHECK_FALSE(FunctorKind::plts(kA).has_distributions());
  }

  TEST_CASE("coalgebra validation names the state") {
    const auto k = FunctorKind::det(kA);
    try {
      Coalgebra c(k, FinSet{"s0", "s1"}, {DetTerm{{0, 1}}, DetTerm{{0, 7}}});
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("at s1") != std::string::npos);
    }
  }

  TEST_CASE("term rendering") {
    const auto k = FunctorKind::plts(kAB);
    CHECK(format_term(k, plts({{0, 1}, {1, 0}}), FinSet{"s0", "s1"}) == "{a->s1 b->s0}");
  }
}
