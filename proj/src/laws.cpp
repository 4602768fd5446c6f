#include "hetsim/laws.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "hetsim/closed_forms.hpp"
#include "hetsim/errors.hpp"
#include "hetsim/ioformats.hpp"
#include "hetsim/logic.hpp"
#include "hetsim/oracle.hpp"
#include "hetsim/simulation.hpp"

namespace hetsim::laws {

std::size_t LawContext::size(std::size_t lo) {
  const std::size_t hi = std::max(lo, config.max_states);
  return lo + gen::below(rng, hi - lo + 1);
}

namespace {

using gen::below;
using gen::chance;

std::string show(const Rel& r) {
  std::string out = "{";
  bool first = true;
  for (auto [x, y] : r.pairs()) {
    out += (first ? "(" : ",(") + r.src()[x] + "," + r.dst()[y] + ")";
    first = false;
  }
  return out + "}";
}

std::string show(const FunctorKind& k, const FunctorTerm& t, const FinSet& carrier) {
  return format_term(k, t, carrier);
}

const FinSet kAB{"a", "b"};
const FinSet kA{"a"};

std::size_t min_states(const FunctorKind& k) {
  switch (k.tag()) {
    case KindTag::plts:
    case KindTag::pmap:
      return 0;
    case KindTag::pair:
      return std::max(min_states(k.first()), min_states(k.second()));
    default:
      return 1;
  }
}

std::vector<FunctorKind> kind_samples() {
  return {FunctorKind::plts(kAB), FunctorKind::dlts(kA),         FunctorKind::det(kAB),
          FunctorKind::pmap(kAB), FunctorKind::tmap(kA),         FunctorKind::nemap(kAB),
          FunctorKind::susp(FinSet{"i"}, FinSet{"o"}), FunctorKind::suspie(FinSet{"i"}, FinSet{"o"})};
}

struct Sample {
  std::string name;
  ConnectorExpr expr;
  FunctorKind left;
  FunctorKind right;
};

std::vector<Sample> catalog_samples() {
  const auto plts = FunctorKind::plts(kAB);
  const auto dlts = FunctorKind::dlts(kA);
  const auto pmap = FunctorKind::pmap(kAB);
  const auto susp = FunctorKind::susp(FinSet{"i"}, FinSet{"o"});
  const auto suspie = FunctorKind::suspie(FinSet{"i"}, FinSet{"o"});
  const LabelPairs rel{{"a", "b"}, {"b", "b"}};
  const LabelPairs onto_a{{"a", "a"}, {"b", "a"}};
  using E = ConnectorExpr;
  std::vector<Sample> out;
  for (const auto& k : kind_samples()) out.push_back({"id " + k.str(), E::id(), k, k});
  out.push_back({"kant dia", E::kant({{Lifting::dia("a"), Lifting::dia("a")}, {Lifting::dia("b"), Lifting::dia("b")}}),
                 plts, plts});
  out.push_back({"kant dia+box", E::kant({{Lifting::dia("a"), Lifting::dia("a")}, {Lifting::box("b"), Lifting::box("b")}}),
                 plts, plts});
  out.push_back({"kant bigbox", E::kant({{Lifting::bigbox(), Lifting::bigbox()}}), plts, plts});
  out.push_back({"kant pge", E::kant({{Lifting::pge("a", Rational(1, 2)), Lifting::pge("a", Rational(1, 2))}}), dlts, dlts});
  out.push_back({"kant pge/dia", E::kant({{Lifting::pge("a", Rational(1, 2)), Lifting::dia("a")}}), dlts,
                 FunctorKind::plts(kA)});
  out.push_back({"kant down", E::kant({{Lifting::down("a"), Lifting::down("a")}, {Lifting::dia("b"), Lifting::dia("b")}}),
                 pmap, pmap});
  out.push_back({"kr", E::kr(rel), plts, plts});
  out.push_back({"lr", E::lr(rel), plts, plts});
  out.push_back({"lf", E::lf(), plts, plts});
  out.push_back({"lt", E::lt(), FunctorKind::det(kAB), plts});
  out.push_back({"weak", E::weak("b"), plts, FunctorKind::plts(FinSet{"a", "b", kEpsilonLabel})});
  out.push_back({"ioco", E::ioco(), susp, suspie});
  out.push_back({"pull-left", E::pull_left(E::lf(), NatTrans::relabel_conv(onto_a)), plts, FunctorKind::plts(kA)});
  out.push_back({"pull-right", E::pull_right(NatTrans::relabel(onto_a), E::lf()), plts, FunctorKind::plts(kA)});
  out.push_back({"meet", E::meet(E::kr(rel), E::conv(E::kr(rel))), plts, plts});
  out.push_back({"conv", E::conv(E::kant({{Lifting::dia("a"), Lifting::box("a")}})), plts, plts});
  out.push_back({"comp lqlr", E::comp(E::lr(rel), E::conv(E::lr(rel))), plts, plts});
  out.push_back({"comp lt", E::comp(E::lt(), E::conv(E::lt())), plts, plts});
  out.push_back({"comp ioco", E::comp(E::conv(E::ioco()), E::ioco()), susp, susp});
  return out;
}

struct Point {
  Rel r;
  FunctorTerm a;
  FunctorTerm b;
};

Point draw(LawContext& cx, const Connector& l, std::size_t nx, std::size_t ny) {
  const FinSet x = FinSet::numbered("x", nx);
  const FinSet y = FinSet::numbered("y", ny);
  return {gen::relation(x, y, cx.rng), gen::term(l.src(), nx, cx.rng, 2), gen::term(l.dst(), ny, cx.rng, 2)};
}

std::string point_str(const Connector& l, const Point& p) {
  return "L=" + l.expr().str() + " r=" + show(p.r) + " a=" + show(l.src(), p.a, p.r.src()) +
         " b=" + show(l.dst(), p.b, p.r.dst());
}

// ---------------------------------------------------------------------------

void rel_algebra(LawContext& cx) {
  for (std::size_t i = 0; i < cx.config.cases * 4; ++i) {
    const FinSet w = FinSet::numbered("w", cx.size());
    const FinSet x = FinSet::numbered("x", cx.size());
    const FinSet y = FinSet::numbered("y", cx.size());
    const FinSet z = FinSet::numbered("z", cx.size());
    const Rel r = gen::relation(w, x, cx.rng), s = gen::relation(x, y, cx.rng), t = gen::relation(y, z, cx.rng);
    cx.expect(compose(t, compose(s, r)) == compose(compose(t, s), r), [&] {
      return "associativity fails for r=" + show(r) + " s=" + show(s) + " t=" + show(t);
    });
    cx.expect(converse(converse(r)) == r, [&] { return "converse is not an involution on " + show(r); });
    cx.expect(converse(compose(s, r)) == compose(converse(r), converse(s)),
              [&] { return "(s·r)° differs from r°·s° for r=" + show(r) + " s=" + show(s); });
    cx.expect(compose(r, Rel::identity(w)) == r && compose(Rel::identity(x), r) == r,
              [&] { return "identity is not a unit for " + show(r); });
    const Rel r2 = gen::grow(r, cx.rng);
    cx.expect(compose(s, r).subset_of(compose(s, r2)), [&] { return "composition is not monotone at " + show(r); });
    if (x.size() > 0) {
      auto f = gen::map(w.size(), x.size(), cx.rng);
      const Rel g = Rel::graph(w, x, f);
      cx.expect(is_left_total(g) && Rel::identity(w).subset_of(compose(converse(g), g)) &&
                    compose(g, converse(g)).subset_of(Rel::identity(x)),
                [&] { return "graph of a map is not a map: " + show(g); });
    }
  }
}

void couniv(LawContext& cx) {
  for (std::size_t i = 0; i < cx.config.cases * 2; ++i) {
    const FinSet x = FinSet::numbered("x", cx.size());
    const FinSet y = FinSet::numbered("y", cx.size());
    const Rel r = gen::relation(x, y, cx.rng);
    auto full = couniv_factorize(r);
    cx.expect(compose(full.s, full.t) == r, [&] { return "s·t differs from r=" + show(r); });
    auto boxes = maximal_boxes(r);
    auto small = factor_through(r, boxes);
    cx.expect(compose(small.s, small.t) == r, [&] { return "maximal boxes do not factor r=" + show(r); });
    for (const auto& b : full.boxes) {
      bool covered = std::any_of(boxes.begin(), boxes.end(), [&](const Box& m) {
        return b.left.is_subset_of(m.left) && b.right.is_subset_of(m.right);
      });
      cx.expect(covered, [&] { return "a box of " + show(r) + " lies in no maximal box"; });
    }
  }
}

void functor_laws(LawContext& cx) {
  for (const auto& k : kind_samples()) {
    for (std::size_t i = 0; i < cx.config.cases; ++i) {
      const std::size_t n0 = cx.size(min_states(k));
      const std::size_t n1 = cx.size(std::max<std::size_t>(1, min_states(k)));
      const std::size_t n2 = cx.size(1);
      const FunctorTerm t = gen::term(k, n0, cx.rng);
      cx.expect(!term_validate(k, t, n0), [&] { return "generated an invalid " + k.str() + " term"; });
      std::vector<std::size_t> id(n0);
      for (std::size_t j = 0; j < n0; ++j) id[j] = j;
      cx.expect(fmap(id, t) == t, [&] { return "F id differs from id on " + k.str(); });
      const auto f = gen::map(n0, n1, cx.rng);
      const auto g = gen::map(n1, n2, cx.rng);
      std::vector<std::size_t> gf(n0);
      for (std::size_t j = 0; j < n0; ++j) gf[j] = g[f[j]];
      const FunctorTerm ft = fmap(f, t);
      cx.expect(!term_validate(k, ft, n1), [&] { return "F f produced an invalid " + k.str() + " term"; });
      cx.expect(fmap(g, ft) == fmap(gf, t), [&] { return "F(g·f) differs from Fg·Ff on " + k.str(); });
      // Terms live on their support.
      const auto supp = support(t);
      cx.expect(fmap(supp, restrict_to(t, supp)) == t, [&] { return "restriction to the support loses data"; });
    }
  }
}

void lifting_laws(LawContext& cx) {
  std::vector<std::pair<FunctorKind, Lifting>> lifts;
  for (const auto& k : kind_samples()) {
    if (k.tag() == KindTag::pair) continue;
    for (std::size_t i = 0; i < 4; ++i) lifts.emplace_back(k, gen::lifting(k, cx.rng));
  }
  lifts.emplace_back(FunctorKind::plts(kAB), Lifting::bigbox());
  lifts.emplace_back(FunctorKind::plts(kAB), Lifting::bigdia());
  lifts.emplace_back(FunctorKind::pmap(kAB), Lifting::down("a"));
  lifts.emplace_back(FunctorKind::pmap(kAB), Lifting::up("b"));
  for (const auto& [k, l] : lifts) {
    const BoundLifting bl(l, k);
    const BoundLifting bd(dual_lifting(l), k);
    cx.expect(dual_lifting(dual_lifting(l)) == l, [&] { return "dual is not an involution on " + l.str(); });
    cx.expect(parse_lifting(l.str()) == l, [&] { return "lifting " + l.str() + " does not reparse"; });
    for (std::size_t i = 0; i < cx.config.cases; ++i) {
      const std::size_t n = cx.size(std::max<std::size_t>(1, min_states(k)));
      const std::size_t m = cx.size(std::max<std::size_t>(1, min_states(k)));
      const FinSet x = FinSet::numbered("x", n);
      const FunctorTerm t = gen::term(k, n, cx.rng);
      std::vector<Subset> a, b, co;
      for (std::size_t j = 0; j < bl.arity(); ++j) {
        a.push_back(gen::relation(FinSet{"_"}, x, cx.rng).row(0));
        b.push_back(a.back() | gen::relation(FinSet{"_"}, x, cx.rng).row(0));
        co.push_back(~a.back());
      }
      cx.expect(!bl.eval(a, t, n) || bl.eval(b, t, n),
                [&] { return l.str() + " is not monotone at " + show(k, t, x); });
      cx.expect(bd.eval(a, t, n) != bl.eval(co, t, n),
                [&] { return "dual of " + l.str() + " is not the complement conjugate at " + show(k, t, x); });
      // Naturality: λ_X(f⁻¹[A]) = (Ff)⁻¹[λ_Y(A)].
      const auto f = gen::map(n, m, cx.rng);
      std::vector<Subset> ay, pre;
      for (std::size_t j = 0; j < bl.arity(); ++j) {
        ay.push_back(gen::relation(FinSet{"_"}, FinSet::numbered("y", m), cx.rng).row(0));
        Subset p(n);
        for (std::size_t s = 0; s < n; ++s)
          if (ay.back()[f[s]]) p.set(s);
        pre.push_back(p);
      }
      cx.expect(bl.eval(pre, t, n) == bl.eval(ay, fmap(f, t), m),
                [&] { return l.str() + " is not natural at " + show(k, t, x); });
    }
  }
}

void egli_milner_barr(LawContext& cx) {
  const auto k = FunctorKind::plts(kA);
  const std::size_t hi = std::min<std::size_t>(cx.config.max_states, 2);
  for (std::size_t nx = 0; nx <= hi; ++nx)
    for (std::size_t ny = 0; ny <= hi; ++ny) {
      const FinSet x = FinSet::numbered("x", nx), y = FinSet::numbered("y", ny);
      const auto left = enumerate_terms(k, nx), right = enumerate_terms(k, ny);
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (nx * ny)); ++mask) {
        Rel r(x, y);
        for (std::size_t i = 0; i < nx * ny; ++i)
          if (mask >> i & 1U) r.insert(i / ny, i % ny);
        const auto table = oracle::brute_barr(k, r);
        for (const auto& a : left)
          for (const auto& b : right)
            cx.expect(egli_milner_lift(r, a.as<PltsTerm>(), b.as<PltsTerm>()) == table.contains(a, b), [&] {
              return "Egli-Milner and Barr disagree at r=" + show(r) + " " + show(k, a, x) + " " + show(k, b, y);
            });
      }
    }
}

void coupling_barr(LawContext& cx) {
  const auto k = FunctorKind::dlts(kA);
  const std::size_t hi = std::min<std::size_t>(cx.config.max_states, 2);
  for (std::size_t nx = 1; nx <= hi; ++nx)
    for (std::size_t ny = 1; ny <= hi; ++ny) {
      const FinSet x = FinSet::numbered("x", nx), y = FinSet::numbered("y", ny);
      const auto left = enumerate_terms(k, nx), right = enumerate_terms(k, ny);
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (nx * ny)); ++mask) {
        Rel r(x, y);
        for (std::size_t i = 0; i < nx * ny; ++i)
          if (mask >> i & 1U) r.insert(i / ny, i % ny);
        const auto table = oracle::brute_barr(k, r);
        for (const auto& a : left)
          for (const auto& b : right)
            cx.expect(coupling_lift(r, a.as<DltsTerm>(), b.as<DltsTerm>()) == table.contains(a, b), [&] {
              return "coupling and Barr disagree at r=" + show(r) + " " + show(k, a, x) + " " + show(k, b, y);
            });
      }
    }
}

std::vector<Connector> connector_pool(LawContext& cx) {
  std::vector<Connector> pool;
  for (const auto& s : catalog_samples()) pool.push_back(bind(s.expr, s.left, s.right));
  const auto plts = FunctorKind::plts(kAB);
  for (std::size_t i = 0; i < cx.config.cases; ++i) {
    for (;;) {
      try {
        pool.push_back(bind(gen::plts_expression(kAB, cx.rng, 3), plts, plts));
        break;
      } catch (const KindMismatch&) {
      }
    }
  }
  return pool;
}

void connector_monotone(LawContext& cx) {
  for (const auto& l : connector_pool(cx)) {
    for (std::size_t i = 0; i < cx.config.cases; ++i) {
      Point p = draw(cx, l, cx.size(min_states(l.src())), cx.size(min_states(l.dst())));
      const Rel bigger = gen::grow(p.r, cx.rng);
      cx.expect(!l.lift(p.r, p.a, p.b) || l.lift(bigger, p.a, p.b),
                [&] { return "not monotone: " + point_str(l, p) + " r'=" + show(bigger); });
    }
  }
}

void connector_natural(LawContext& cx) {
  for (const auto& l : connector_pool(cx)) {
    for (std::size_t i = 0; i < cx.config.cases; ++i) {
      // a' L(g°·r·f) b'  iff  Ff(a') Lr Gg(b')
      const std::size_t nx = cx.size(std::max<std::size_t>(1, min_states(l.src())));
      const std::size_t ny = cx.size(std::max<std::size_t>(1, min_states(l.dst())));
      const std::size_t nx2 = cx.size(min_states(l.src()));
      const std::size_t ny2 = cx.size(min_states(l.dst()));
      const FinSet x = FinSet::numbered("x", nx), y = FinSet::numbered("y", ny);
      const FinSet x2 = FinSet::numbered("u", nx2), y2 = FinSet::numbered("v", ny2);
      const auto f = gen::map(nx2, nx, cx.rng);
      const auto g = gen::map(ny2, ny, cx.rng);
      const Rel r = gen::relation(x, y, cx.rng);
      const Rel pulled = compose(converse(Rel::graph(y2, y, g)), compose(r, Rel::graph(x2, x, f)));
      const FunctorTerm a = gen::term(l.src(), nx2, cx.rng, 2);
      const FunctorTerm b = gen::term(l.dst(), ny2, cx.rng, 2);
      cx.expect(l.lift(pulled, a, b) == l.lift(r, fmap(f, a), fmap(g, b)), [&] {
        return "not natural: L=" + l.expr().str() + " r=" + show(r) + " a'=" + show(l.src(), a, x2) +
               " b'=" + show(l.dst(), b, y2);
      });
    }
  }
}

void connector_converse(LawContext& cx) {
  const auto plts = FunctorKind::plts(kAB);
  using E = ConnectorExpr;
  for (std::size_t i = 0; i < cx.config.cases; ++i) {
    const LabelPairs q = gen::label_relation(kAB, kAB, cx.rng);
    LabelPairs qc;
    for (const auto& [l, m] : q) qc.emplace_back(m, l);
    const Connector lr = bind(E::lr(q), plts, plts);
    const Connector split = bind(E::meet(E::kr(q), E::conv(E::kr(qc))), plts, plts);
    const Connector lrc = bind(E::lr(qc), plts, plts);
    const Connector conv_lr = bind(E::conv(E::lr(q)), plts, plts);

    std::vector<LambdaRel::Pair> pairs;
    for (std::size_t j = 0; j < 2; ++j) pairs.emplace_back(gen::lifting(plts, cx.rng), gen::lifting(plts, cx.rng));
    const LambdaRel lambda(plts, plts, pairs);
    const Connector kant_conv = bind(E::conv(E::kant(pairs)), plts, plts);
    const Connector kant_dual = bind(E::kant(lambda_converse(lambda_dual(lambda)).pairs()), plts, plts);

    const auto any = gen::plts_expression(kAB, cx.rng, 2);
    std::optional<Connector> inv, twice;
    try {
      inv = bind(any, plts, plts);
      twice = bind(E::conv(E::conv(any)), plts, plts);
    } catch (const KindMismatch&) {
      inv = lr;
      twice = bind(E::conv(E::conv(E::lr(q))), plts, plts);
    }

    for (std::size_t j = 0; j < cx.config.cases; ++j) {
      Point p = draw(cx, lr, cx.size(), cx.size());
      cx.expect(lr.lift(p.r, p.a, p.b) == split.lift(p.r, p.a, p.b),
                [&] { return "LR differs from KR ∧ KR°-converse: " + point_str(lr, p); });
      cx.expect(conv_lr.lift(p.r, p.a, p.b) == lrc.lift(p.r, p.a, p.b),
                [&] { return "(L_R)° differs from L_{R°}: " + point_str(lr, p); });
      cx.expect(kant_conv.lift(p.r, p.a, p.b) == kant_dual.lift(p.r, p.a, p.b),
                [&] { return "Kantorovich converse law fails: " + point_str(kant_conv, p); });
      cx.expect(inv->lift(p.r, p.a, p.b) == twice->lift(p.r, p.a, p.b),
                [&] { return "double converse changes " + point_str(*inv, p); });
      cx.expect(conv_lr.lift(p.r, p.a, p.b) == lr.lift(converse(p.r), p.b, p.a),
                [&] { return "converse does not swap arguments: " + point_str(conv_lr, p); });
    }
  }
}

EvalOptions brute_options() {
  EvalOptions o;
  o.use_closed_forms = false;
  return o;
}

void identity_composition(LawContext& cx) {
  const auto plts = FunctorKind::plts(kA);
  using E = ConnectorExpr;
  const std::size_t hi = std::min<std::size_t>(cx.config.max_states, 2);
  const std::vector<E> ls{E::kr({{"a", "a"}}), E::lr({{"a", "a"}}), E::lf(),
                          E::kant({{Lifting::dia("a"), Lifting::box("a")}})};
  for (const auto& e : ls) {
    const Connector l = bind(e, plts, plts);
    const Connector left_id = bind(E::comp(E::id(), e), plts, plts, brute_options());
    const Connector right_id = bind(E::comp(e, E::id()), plts, plts, brute_options());
    for (std::size_t i = 0; i < cx.config.cases; ++i) {
      Point p = draw(cx, l, gen::below(cx.rng, hi + 1), gen::below(cx.rng, hi + 1));
      const bool want = l.lift(p.r, p.a, p.b);
      cx.expect(left_id.lift(p.r, p.a, p.b) == want, [&] { return "Id·L differs from L: " + point_str(l, p); });
      cx.expect(right_id.lift(p.r, p.a, p.b) == want, [&] { return "L·Id differs from L: " + point_str(l, p); });
    }
  }
  // Associativity on a chain of three label-relation connectors.
  const auto ab = FunctorKind::plts(kAB);
  for (std::size_t i = 0; i < cx.config.cases; ++i) {
    const auto r1 = gen::label_relation(kAB, kAB, cx.rng), r2 = gen::label_relation(kAB, kAB, cx.rng),
               r3 = gen::label_relation(kAB, kAB, cx.rng);
    const Connector left = bind(E::comp(E::lr(r3), E::comp(E::kr(r2), E::lr(r1))), ab, ab, brute_options());
    const Connector right = bind(E::comp(E::comp(E::lr(r3), E::kr(r2)), E::lr(r1)), ab, ab, brute_options());
    Point p = draw(cx, left, gen::below(cx.rng, std::min<std::size_t>(hi, 1) + 1),
                   gen::below(cx.rng, std::min<std::size_t>(hi, 1) + 1));
    cx.expect(left.lift(p.r, p.a, p.b) == right.lift(p.r, p.a, p.b),
              [&] { return "composition is not associative: " + point_str(left, p); });
  }
}

void closed_forms(LawContext& cx) {
  using E = ConnectorExpr;
  const auto plts = FunctorKind::plts(kAB);
  const auto susp = FunctorKind::susp(FinSet{"i"}, FinSet{"o", "p"});
  const std::size_t hi = std::min<std::size_t>(cx.config.max_states, 2);
  for (std::size_t i = 0; i < cx.config.cases; ++i) {
    const auto q = gen::label_relation(kAB, kAB, cx.rng), r = gen::label_relation(kAB, kAB, cx.rng);
    std::vector<std::pair<E, FunctorKind>> exprs{
        {E::comp(E::lr(q), E::lr(r)), plts},
        {E::comp(E::lr(q), E::conv(E::lr(r))), plts},
        {E::comp(E::lt(), E::conv(E::lt())), plts},
        {E::comp(E::conv(E::ioco()), E::ioco()), susp},
    };
    for (const auto& [e, k] : exprs) {
      const Connector fast = bind(e, k, k);
      const Connector slow = bind(e, k, k, brute_options());
      const std::size_t lo = min_states(k);
      Point p = draw(cx, fast, lo + gen::below(cx.rng, hi - std::min(hi, lo) + 1),
                     lo + gen::below(cx.rng, hi - std::min(hi, lo) + 1));
      cx.expect(fast.closed_form().has_value(), [&] { return "no closed form registered for " + e.str(); });
      cx.expect(fast.lift(p.r, p.a, p.b) == slow.lift(p.r, p.a, p.b),
                [&] { return "closed form " + *fast.closed_form() + " differs from the search: " + point_str(fast, p); });
    }
  }
}

std::vector<std::pair<std::string, ConnectorExpr>> sim_connectors() {
  using E = ConnectorExpr;
  return {{"id", E::id()},
          {"kr", E::kr({{"a", "a"}, {"b", "a"}, {"b", "b"}})},
          {"lf", E::lf()},
          {"kant", E::kant({{Lifting::dia("a"), Lifting::dia("a")}, {Lifting::box("b"), Lifting::box("b")}})}};
}

void greatest_simulation_laws(LawContext& cx) {
  const auto plts = FunctorKind::plts(kAB);
  for (const auto& [name, e] : sim_connectors()) {
    const Connector l = bind(e, plts, plts);
    for (std::size_t i = 0; i < cx.config.cases; ++i) {
      const Coalgebra c = gen::system(plts, cx.size(), cx.rng, 2, "c");
      const Coalgebra d = gen::system(plts, cx.size(), cx.rng, 2, "d");
      const SimResult sim = greatest_simulation(c, d, l);
      cx.expect(!is_simulation(sim.relation, c, d, l), [&] { return name + ": result is not a simulation"; });
      cx.expect(sim.relation_before(sim.rounds) == sim.relation,
                [&] { return name + ": final round does not start from the result"; });
      for (const auto& rm : sim.removal_log) {
        Rel bigger = sim.relation;
        bigger.insert(rm.x, rm.y);
        cx.expect(is_simulation(bigger, c, d, l).has_value(), [&] {
          return name + ": adding removed pair (" + c.states()[rm.x] + "," + d.states()[rm.y] + ") keeps a simulation";
        });
      }
      const Rel guess = gen::relation(c.states(), d.states(), cx.rng, 70);
      if (!is_simulation(guess, c, d, l))
        cx.expect(guess.subset_of(sim.relation), [&] { return name + ": simulation " + show(guess) + " not below gsim"; });
      const SimResult bis = greatest_bisimulation(c, d, l);
      const SimResult sib = greatest_bisimulation(d, c, bind(converse(e), plts, plts));
      cx.expect(converse(bis.relation) == sib.relation,
                [&] { return name + ": bisimilarity is not symmetric under swapping systems"; });
      cx.expect(bis.relation.subset_of(sim.relation), [&] { return name + ": bisimilarity exceeds similarity"; });
    }
  }
}

std::vector<LambdaRel::Pair> all_labels(const FinSet& labels, Lifting (*make)(std::string)) {
  std::vector<LambdaRel::Pair> out;
  for (const auto& l : labels.elements()) out.emplace_back(make(l), make(l));
  return out;
}

struct LogicCase {
  std::string name;
  FunctorKind left;
  FunctorKind right;
  std::vector<LambdaRel::Pair> pairs;
};

std::vector<LogicCase> logic_cases() {
  const auto plts = FunctorKind::plts(kAB);
  auto dia = all_labels(kAB, &Lifting::dia);
  auto both = dia;
  for (auto& p : all_labels(kAB, &Lifting::box)) both.push_back(p);
  std::vector<LambdaRel::Pair> prob;
  for (const auto& l : kAB.elements()) prob.emplace_back(Lifting::dia(l), Lifting::pge(l, Rational(1, 2)));
  return {{"dia", plts, plts, dia}, {"dia+box", plts, plts, both}, {"dia/pge", plts, FunctorKind::dlts(kAB), prob}};
}

void expressiveness(LawContext& cx) {
  for (const auto& lc : logic_cases()) {
    const LambdaRel lambda(lc.left, lc.right, lc.pairs);
    for (std::size_t i = 0; i < cx.config.cases; ++i) {
      const Coalgebra c = gen::system(lc.left, cx.size(1), cx.rng, 3, "c");
      const Coalgebra d = gen::system(lc.right, cx.size(1), cx.rng, 3, "d");
      const SimResult sim = greatest_simulation(c, d, ConnectorExpr::kant(lc.pairs));
      const Rel theory = oracle::formula_enum_theory(c, d, lambda);
      cx.expect(sim.relation == theory, [&] {
        return lc.name + ": similarity " + show(sim.relation) + " differs from theory inclusion " + show(theory) +
               "\n" + serialize_chc(c) + serialize_chc(d);
      });
    }
  }
}

void distinguishing(LawContext& cx) {
  for (const auto& lc : logic_cases()) {
    const LambdaRel lambda(lc.left, lc.right, lc.pairs);
    for (std::size_t i = 0; i < cx.config.cases; ++i) {
      const Coalgebra c = gen::system(lc.left, cx.size(1), cx.rng, 3, "c");
      const Coalgebra d = gen::system(lc.right, cx.size(1), cx.rng, 3, "d");
      const SimResult sim = greatest_simulation(c, d, ConnectorExpr::kant(lc.pairs));
      Distinguisher dist(c, d, lambda, sim);
      for (std::size_t x = 0; x < c.size(); ++x)
        for (std::size_t y = 0; y < d.size(); ++y) {
          auto f = dist.formula(x, y);
          cx.expect(f.has_value() != sim.relation.contains(x, y), [&] { return lc.name + ": formula/similarity mismatch"; });
          if (!f) continue;
          cx.expect(eval_formula(*f, c, Side::left, x) && !eval_formula(*f, d, Side::right, y), [&] {
            return lc.name + ": " + f->str() + " does not separate " + c.states()[x] + " from " + d.states()[y];
          });
          cx.expect(parse_formula(f->str(), lambda).str() == f->str(),
                    [&] { return "formula " + f->str() + " does not reparse"; });
        }
    }
  }
}

void weak_simulation(LawContext& cx) {
  const FinSet labels{"a", "t"};
  const auto plts = FunctorKind::plts(labels);
  for (std::size_t i = 0; i < cx.config.cases; ++i) {
    const Coalgebra c = gen::system(plts, cx.size(1), cx.rng, 2, "c");
    const Coalgebra d = gen::system(plts, cx.size(1), cx.rng, 2, "d");
    const Coalgebra sat = weak_saturate(d, "t");
    const SimResult sim = greatest_simulation(c, sat, ConnectorExpr::weak("t"));
    const Rel want = oracle::weak_sim_oracle(c, d, "t");
    cx.expect(sim.relation == want, [&] {
      return "weak similarity " + show(sim.relation) + " differs from the oracle " + show(want) + "\n" +
             serialize_chc(c) + serialize_chc(d);
    });
  }
}

void shared_traces(LawContext& cx) {
  const auto plts = FunctorKind::plts(kAB);
  const ConnectorExpr e = ConnectorExpr::comp(ConnectorExpr::lt(), ConnectorExpr::conv(ConnectorExpr::lt()));
  for (std::size_t i = 0; i < cx.config.cases; ++i) {
    const Coalgebra c = gen::system(plts, cx.size(1), cx.rng, 2, "c");
    const Coalgebra d = gen::system(plts, cx.size(1), cx.rng, 2, "d");
    const SimResult bis = greatest_bisimulation(c, d, e);
    const Rel want = oracle::shared_trace_oracle(c, d);
    cx.expect(bis.relation == want, [&] {
      return "LT·LT° bisimilarity " + show(bis.relation) + " differs from shared traces " + show(want) + "\n" +
             serialize_chc(c) + serialize_chc(d);
    });
  }
}

void ioco_law(LawContext& cx) {
  const FinSet in{"i", "j"}, out{"o", "p"};
  for (std::size_t i = 0; i < cx.config.cases; ++i) {
    const Coalgebra spec = gen::system(FunctorKind::susp(in, out), cx.size(1), cx.rng, 2, "s");
    const Coalgebra impl = gen::system(FunctorKind::suspie(in, out), cx.size(1), cx.rng, 2, "m");
    const SimResult sim = greatest_simulation(spec, impl, ConnectorExpr::ioco());
    const Rel want = oracle::ioco_oracle(spec, impl);
    cx.expect(sim.relation == want, [&] {
      return "IOCO similarity " + show(sim.relation) + " differs from the ioco fixpoint " + show(want) + "\n" +
             serialize_chc(spec) + serialize_chc(impl);
    });
  }
}

void bisim_transfer(LawContext& cx) {
  using E = ConnectorExpr;
  const FinSet b{"u", "v"};
  const auto fa = FunctorKind::plts(kAB), gb = FunctorKind::plts(b);
  for (std::size_t i = 0; i < cx.config.cases; ++i) {
    const LabelPairs r = gen::right_total_label_relation(kAB, b, cx.rng);
    const Coalgebra c = gen::system(fa, cx.size(1), cx.rng, 2, "c");
    const Coalgebra d = gen::system(gb, cx.size(1), cx.rng, 2, "d");
    const Rel sr = greatest_simulation(c, d, E::lr(r)).relation;
    const Rel sf = greatest_bisimulation(c, c, E::id()).relation;
    const Rel sg = greatest_bisimulation(d, d, E::id()).relation;
    for (auto [x, y] : sr.pairs())
      for (auto [x2, y2] : sr.pairs())
        cx.expect(!sf.contains(x, x2) || sg.contains(y, y2), [&] {
          return "bisimilarity does not transfer along " + c.states()[x] + "~" + d.states()[y] + ", " +
                 c.states()[x2] + "~" + d.states()[y2];
        });
  }
  const std::size_t hi = std::min<std::size_t>(cx.config.max_states, 2);
  for (std::size_t i = 0; i < 3; ++i) {
    const LabelPairs r = gen::right_total_label_relation(kAB, b, cx.rng);
    const Connector l = bind(E::comp(E::lr(r), E::conv(E::lr(r))), gb, gb);
    const Connector id = bind(E::id(), gb, gb);
    const auto rep = connector_leq_on(l, id, FinSet::numbered("x", hi), FinSet::numbered("y", hi), 1 << 16, cx.rng());
    cx.checks += rep.checked;
    cx.expect(rep.holds, [&] { return "LR·LR° is not below Id: " + rep.note; });
  }
}

void formats_roundtrip(LawContext& cx) {
  for (const auto& k : kind_samples()) {
    for (std::size_t i = 0; i < cx.config.cases; ++i) {
      const Coalgebra c = gen::system(k, cx.size(min_states(k)), cx.rng, 3);
      const std::string text = serialize_chc(c);
      cx.expect(parse_chc(text) == c, [&] { return "native format does not round-trip:\n" + text; });
      cx.expect(serialize_chc(parse_chc(text)) == text, [&] { return "native serialization is not canonical"; });
      if (k.tag() == KindTag::plts && c.size() > 0) {
        const std::string aut = serialize_aut(c);
        cx.expect(parse_aut(aut, k.labels()).system == c, [&] { return ".aut does not round-trip:\n" + aut; });
      }
      const Rel r = gen::relation(c.states(), c.states(), cx.rng);
      cx.expect(parse_relation(write_relation(r), c.states(), c.states()) == r,
                [&] { return "relation " + show(r) + " does not round-trip"; });
    }
  }
  for (const auto& s : catalog_samples())
    cx.expect(parse_connector(s.expr.str()).str() == s.expr.str(), [&] { return s.expr.str() + " does not reparse"; });
  for (std::size_t i = 0; i < cx.config.cases; ++i) {
    const auto e = gen::plts_expression(kAB, cx.rng, 3);
    cx.expect(parse_connector(e.str()).str() == e.str(), [&] { return e.str() + " does not reparse"; });
  }
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

const std::vector<Law>& all_laws() {
  static const std::vector<Law> laws{
      {"rel-algebra", "associativity, converse, units and map graphs", rel_algebra},
      {"couniv-factorization", "r = s·t through all boxes and through maximal boxes", couniv},
      {"functor-laws", "F id = id, F(g·f) = Fg·Ff, validity and supports", functor_laws},
      {"lifting-laws", "monotonicity, naturality and duality of predicate liftings", lifting_laws},
      {"egli-milner-barr", "Egli-Milner lifting equals the Barr extension", egli_milner_barr},
      {"coupling-barr", "coupling lifting equals the Barr extension of D", coupling_barr},
      {"connector-monotonicity", "r ⊆ r' implies Lr ⊆ Lr'", connector_monotone},
      {"connector-naturality", "L(g°·r·f) = (Gg)°·Lr·Ff pointwise", connector_natural},
      {"connector-converse", "converse laws for LR and Kantorovich connectors", connector_converse},
      {"identity-composition", "Id·L = L = L·Id and associativity via the composite search", identity_composition},
      {"closed-forms", "registered composites agree with the composite search", closed_forms},
      {"greatest-simulation", "fixpoint is a maximal simulation; bisimulation symmetry", greatest_simulation_laws},
      {"expressiveness", "Kantorovich similarity equals theory inclusion", expressiveness},
      {"distinguishing-formulas", "every dissimilar pair gets a separating formula", distinguishing},
      {"weak-simulation", "saturation + label relation equals weak similarity", weak_simulation},
      {"shared-traces", "LT·LT° bisimilarity equals sharing an infinite trace", shared_traces},
      {"ioco", "IOCO similarity equals the ioco fixpoint", ioco_law},
      {"bisim-transfer", "L_R-bisimilarity transfers bisimilarity; LR·LR° ≤ Id", bisim_transfer},
      {"formats-roundtrip", "native, .aut, relation and connector formats round-trip", formats_roundtrip},
  };
  return laws;
}

LawResult run_law(const Law& law, const LawConfig& config) {
  LawContext cx{config, gen::Rng(config.seed ^ fnv1a(law.name))};
  LawResult res;
  res.name = law.name;
  try {
    law.body(cx);
  } catch (const LawFailure& f) {
    res.passed = false;
    res.detail = f.what();
  } catch (const std::exception& e) {
    res.passed = false;
    res.detail = std::string("error: ") + e.what();
  }
  res.checks = cx.checks;
  return res;
}

std::vector<LawResult> run_all(const LawConfig& config) {
  std::vector<LawResult> out;
  for (const auto& law : all_laws()) out.push_back(run_law(law, config));
  return out;
}

std::string format_report(const LawConfig& config, const std::vector<LawResult>& results) {
  std::ostringstream out;
  out << "selftest seed=" << config.seed << " cases=" << config.cases << " max-states=" << config.max_states << "\n";
  std::size_t failed = 0;
  for (const auto& r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name << " checks=" << r.checks << "\n";
    if (!r.passed) {
      ++failed;
      std::istringstream lines(r.detail);
      std::string line;
      out << "  counterexample:\n";
      while (std::getline(lines, line)) out << "    " << line << "\n";
    }
  }
  out << "summary: " << results.size() - failed << " passed, " << failed << " failed\n";
  return out.str();
}

}  // namespace hetsim::laws
