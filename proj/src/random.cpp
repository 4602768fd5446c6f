#include "hetsim/random.hpp"

#include <algorithm>
#include <map>

#include "hetsim/errors.hpp"

namespace hetsim::gen {

std::size_t below(Rng& rng, std::size_t n) {
  if (n == 0) throw std::invalid_argument("below(0)");
  return static_cast<std::size_t>(rng() % n);
}

bool chance(Rng& rng, std::size_t num, std::size_t den) { return below(rng, den) < num; }

Rel relation(const FinSet& x, const FinSet& y, Rng& rng, std::size_t percent) {
  Rel r(x, y);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j)
      if (chance(rng, percent, 100)) r.insert(i, j);
  return r;
}

Rel grow(const Rel& r, Rng& rng, std::size_t percent) {
  Rel out = r;
  for (std::size_t i = 0; i < r.src().size(); ++i)
    for (std::size_t j = 0; j < r.dst().size(); ++j)
      if (chance(rng, percent, 100)) out.insert(i, j);
  return out;
}

std::vector<std::size_t> map(std::size_t from, std::size_t to, Rng& rng) {
  std::vector<std::size_t> f(from);
  for (auto& v : f) v = below(rng, to);
  return f;
}

LabelPairs label_relation(const FinSet& a, const FinSet& b, Rng& rng, std::size_t percent) {
  LabelPairs out;
  for (const auto& l : a.elements())
    for (const auto& m : b.elements())
      if (chance(rng, percent, 100)) out.emplace_back(l, m);
  return out;
}

LabelPairs right_total_label_relation(const FinSet& a, const FinSet& b, Rng& rng) {
  LabelPairs out = label_relation(a, b, rng, 40);
  if (a.empty()) return out;
  for (const auto& m : b.elements()) {
    bool hit = std::any_of(out.begin(), out.end(), [&](const auto& p) { return p.second == m; });
    if (!hit) out.emplace_back(a[below(rng, a.size())], m);
  }
  return out;
}

namespace {

MapTerm random_map(std::size_t letters, std::size_t n, Rng& rng, bool total, bool nonempty) {
  MapTerm m;
  m.image.assign(letters, std::nullopt);
  if (n == 0) return m;
  for (auto& slot : m.image)
    if (total || chance(rng, 1, 2)) slot = below(rng, n);
  if (nonempty && letters > 0 && std::none_of(m.image.begin(), m.image.end(), [](const auto& s) { return s.has_value(); }))
    m.image[below(rng, letters)] = below(rng, n);
  return m;
}

}  // namespace

FunctorTerm term(const FunctorKind& kind, std::size_t n, Rng& rng, std::size_t branching) {
  const std::size_t labels = kind.labels().size();
  switch (kind.tag()) {
    case KindTag::plts: {
      PltsTerm t;
      if (n == 0 || labels == 0) return t;
      const std::size_t k = below(rng, branching + 1);
      for (std::size_t i = 0; i < k; ++i) t.arrows.push_back({below(rng, labels), below(rng, n)});
      return t;
    }
    case KindTag::dlts: {
      if (n == 0 || labels == 0) throw Intractable("no distributions over an empty carrier");
      const std::size_t k = 1 + below(rng, std::min<std::size_t>(std::max<std::size_t>(branching, 1), 4));
      std::vector<long long> quarters(k, 1);
      for (std::size_t extra = 4 - k; extra > 0; --extra) ++quarters[below(rng, k)];
      std::map<Arrow, Rational> acc;
      for (std::size_t i = 0; i < k; ++i) acc[{below(rng, labels), below(rng, n)}] += Rational(quarters[i], 4);
      DltsTerm t;
      for (auto& [a, w] : acc) t.weights.emplace_back(a, w);
      return t;
    }
    case KindTag::det:
      if (n == 0) throw Intractable("no deterministic terms over an empty carrier");
      return DetTerm{{below(rng, labels), below(rng, n)}};
    case KindTag::pmap:
      return random_map(labels, n, rng, false, false);
    case KindTag::tmap:
      return random_map(labels, n, rng, true, false);
    case KindTag::nemap:
      return random_map(labels, n, rng, false, true);
    case KindTag::susp:
    case KindTag::suspie: {
      SuspTerm t;
      t.in = random_map(kind.inputs().size(), n, rng, kind.tag() == KindTag::suspie, false);
      t.out = random_map(kind.outputs().size(), n, rng, false, true);
      return t;
    }
    case KindTag::pair:
      return make_pair_term(term(kind.first(), n, rng, branching), term(kind.second(), n, rng, branching));
  }
  throw KindMismatch("unknown kind");
}

Coalgebra system(const FunctorKind& kind, std::size_t n, Rng& rng, std::size_t branching, const std::string& prefix) {
  std::vector<FunctorTerm> trans;
  for (std::size_t i = 0; i < n; ++i) trans.push_back(term(kind, n, rng, branching));
  return Coalgebra(kind, FinSet::numbered(prefix, n), std::move(trans));
}

Lifting lifting(const FunctorKind& kind, Rng& rng) {
  switch (kind.tag()) {
    case KindTag::plts:
    case KindTag::det: {
      const auto& l = kind.labels()[below(rng, kind.labels().size())];
      return chance(rng, 1, 2) ? Lifting::dia(l) : Lifting::box(l);
    }
    case KindTag::dlts: {
      const auto& l = kind.labels()[below(rng, kind.labels().size())];
      switch (below(rng, 4)) {
        case 0:
          return Lifting::dia(l);
        case 1:
          return Lifting::box(l);
        case 2:
          return Lifting::pge(l, Rational(static_cast<long long>(below(rng, 5)), 4));
        default:
          return Lifting::pdual(l, Rational(static_cast<long long>(below(rng, 5)), 4));
      }
    }
    case KindTag::pmap:
    case KindTag::tmap:
    case KindTag::nemap: {
      const auto& l = kind.labels()[below(rng, kind.labels().size())];
      return chance(rng, 1, 2) ? Lifting::dia(l) : Lifting::box(l);
    }
    case KindTag::susp:
    case KindTag::suspie: {
      const bool in = kind.outputs().empty() || (!kind.inputs().empty() && chance(rng, 1, 2));
      const FinSet& a = in ? kind.inputs() : kind.outputs();
      const auto& l = a[below(rng, a.size())];
      return chance(rng, 1, 2) ? Lifting::dia(l) : Lifting::box(l);
    }
    case KindTag::pair:
      break;
  }
  throw KindMismatch("no unary liftings for " + kind.str());
}

namespace {

LabelPairs both_total(const FinSet& labels, Rng& rng) {
  LabelPairs r = right_total_label_relation(labels, labels, rng);
  for (const auto& l : labels.elements()) {
    bool hit = std::any_of(r.begin(), r.end(), [&](const auto& p) { return p.first == l; });
    if (!hit) r.emplace_back(l, labels[below(rng, labels.size())]);
  }
  return r;
}

ConnectorExpr kant_sample(const FinSet& labels, Rng& rng) {
  std::vector<LambdaRel::Pair> pairs;
  const std::size_t k = 1 + below(rng, 2);
  const FunctorKind kind = FunctorKind::plts(labels);
  for (std::size_t i = 0; i < k; ++i) {
    if (chance(rng, 1, 6)) {
      pairs.emplace_back(chance(rng, 1, 2) ? Lifting::bigbox() : Lifting::bigdia(),
                         chance(rng, 1, 2) ? Lifting::bigbox() : Lifting::bigdia());
    } else {
      pairs.emplace_back(lifting(kind, rng), lifting(kind, rng));
    }
  }
  return ConnectorExpr::kant(std::move(pairs));
}

ConnectorExpr leaf(const FinSet& labels, Rng& rng) {
  switch (below(rng, 5)) {
    case 0:
      return ConnectorExpr::id();
    case 1:
      return ConnectorExpr::lf();
    case 2:
      return ConnectorExpr::kr(label_relation(labels, labels, rng));
    case 3:
      return ConnectorExpr::lr(label_relation(labels, labels, rng));
    default:
      return kant_sample(labels, rng);
  }
}

}  // namespace

ConnectorExpr plts_expression(const FinSet& labels, Rng& rng, std::size_t depth) {
  if (depth == 0 || chance(rng, 1, 4)) return leaf(labels, rng);
  switch (below(rng, 7)) {
    case 0:
      return ConnectorExpr::conv(plts_expression(labels, rng, depth - 1));
    case 1:
    case 2:
      return ConnectorExpr::meet(plts_expression(labels, rng, depth - 1), plts_expression(labels, rng, depth - 1));
    case 3: {
      auto q = ConnectorExpr::lr(label_relation(labels, labels, rng));
      auto r = ConnectorExpr::lr(label_relation(labels, labels, rng));
      return ConnectorExpr::comp(chance(rng, 1, 2) ? q : ConnectorExpr::conv(q), r);
    }
    case 4:
      return chance(rng, 1, 2) ? ConnectorExpr::comp(ConnectorExpr::id(), plts_expression(labels, rng, depth - 1))
                               : ConnectorExpr::comp(plts_expression(labels, rng, depth - 1), ConnectorExpr::id());
    case 5:
      return ConnectorExpr::pull_left(plts_expression(labels, rng, depth - 1),
                                      NatTrans::relabel_conv(both_total(labels, rng)));
    default:
      return ConnectorExpr::pull_right(NatTrans::relabel(both_total(labels, rng)),
                                       plts_expression(labels, rng, depth - 1));
  }
}

}  // namespace hetsim::gen
