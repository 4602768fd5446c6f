#include "hetsim/functors.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "hetsim/errors.hpp"

namespace hetsim {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kSaturated / b) return kSaturated;
  return a * b;
}

std::uint64_t sat_pow(std::uint64_t base, std::size_t exp) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) out = sat_mul(out, base);
  return out;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t out = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // out * (n - k + i) / i stays exact since out is C(n-k+i-1, i-1).
    std::uint64_t num = n - k + i;
    if (out > kSaturated / num) return kSaturated;
    out = out * num / i;
  }
  return out;
}

std::string str_names(const FinSet& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += s[i];
  }
  return out;
}

// Alphabets are kept sorted so kinds built from differently ordered
// declarations compare equal and share one index space.
FinSet sorted(const FinSet& s) {
  std::vector<std::string> names = s.elements();
  std::sort(names.begin(), names.end());
  return FinSet(std::move(names));
}

bool disjoint(const FinSet& a, const FinSet& b) {
  for (const auto& n : a.elements())
    if (b.contains(n)) return false;
  return true;
}

std::optional<std::string> validate_map(const MapTerm& m, const FinSet& alphabet, std::size_t n, const char* role) {
  if (m.image.size() != alphabet.size())
    return std::string(role) + " map has " + std::to_string(m.image.size()) + " slots for " +
           std::to_string(alphabet.size()) + " letters";
  for (std::size_t i = 0; i < m.image.size(); ++i)
    if (m.image[i] && *m.image[i] >= n) return std::string(role) + " " + alphabet[i] + " leaves the carrier";
  return std::nullopt;
}

std::optional<std::string> require_total(const MapTerm& m, const FinSet& alphabet, const char* role) {
  for (std::size_t i = 0; i < m.image.size(); ++i)
    if (!m.image[i]) return std::string(role) + " " + alphabet[i] + " undefined";
  return std::nullopt;
}

std::optional<std::string> require_nonempty(const MapTerm& m) {
  for (const auto& slot : m.image)
    if (slot) return std::nullopt;
  return "non-blocking violated: no output defined";
}

MapTerm fmap_map(std::span<const std::size_t> f, const MapTerm& m);

std::size_t apply(std::span<const std::size_t> f, std::size_t x) {
  if (x >= f.size()) throw CarrierMismatch("map is not total on the support of the term");
  return f[x];
}

MapTerm fmap_map(std::span<const std::size_t> f, const MapTerm& m) {
  MapTerm out;
  out.image.reserve(m.image.size());
  for (const auto& slot : m.image) out.image.push_back(slot ? std::optional<std::size_t>(apply(f, *slot)) : std::nullopt);
  return out;
}

// Calls fn(MapTerm) for every map over `letters` slots into `n` states.
template <class Fn>
void for_each_map(std::size_t letters, std::size_t n, bool partial, bool nonempty, Fn&& fn) {
  const std::size_t base = partial ? n + 1 : n;
  if (base == 0) {
    if (letters == 0 && !nonempty) fn(MapTerm{});
    return;
  }
  std::vector<std::size_t> digit(letters, 0);
  while (true) {
    MapTerm m;
    m.image.reserve(letters);
    bool any = false;
    for (auto d : digit) {
      if (partial) {
        if (d == 0) {
          m.image.push_back(std::nullopt);
        } else {
          m.image.push_back(d - 1);
          any = true;
        }
      } else {
        m.image.push_back(d);
        any = true;
      }
    }
    if (!nonempty || any) fn(std::move(m));
    std::size_t i = letters;
    while (i > 0) {
      --i;
      if (++digit[i] < base) break;
      digit[i] = 0;
      if (i == 0) return;
    }
    if (letters == 0) return;
  }
}

void enumerate_into(const FunctorKind& kind, std::size_t n, const TermEnumOptions& opts, std::vector<FunctorTerm>& out);

std::vector<FunctorTerm> enumerate_raw(const FunctorKind& kind, std::size_t n, const TermEnumOptions& opts) {
  std::vector<FunctorTerm> out;
  enumerate_into(kind, n, opts, out);
  return out;
}

void enumerate_into(const FunctorKind& kind, std::size_t n, const TermEnumOptions& opts, std::vector<FunctorTerm>& out) {
  switch (kind.tag()) {
    case KindTag::plts: {
      const std::size_t k = kind.labels().size() * n;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
        PltsTerm t;
        for (std::size_t i = 0; i < k; ++i)
          if (mask >> i & 1U) t.arrows.push_back({i / n, i % n});
        out.emplace_back(std::move(t));
      }
      return;
    }
    case KindTag::dlts: {
      const std::size_t k = kind.labels().size() * n;
      if (k == 0) return;
      const std::uint64_t d = opts.denominator;
      // Compositions of d into k nonnegative parts, lexicographic.
      std::vector<std::uint64_t> parts(k, 0);
      parts[k - 1] = d;
      while (true) {
        DltsTerm t;
        for (std::size_t i = 0; i < k; ++i)
          if (parts[i] > 0)
            t.weights.emplace_back(Arrow{i / n, i % n},
                                   Rational(static_cast<long long>(parts[i]), static_cast<long long>(d)));
        out.emplace_back(std::move(t));
        // Next composition: move one unit from the last part leftwards.
        std::size_t j = k - 1;
        while (j > 0 && parts[j] == 0) --j;
        if (j == 0) return;
        std::uint64_t rest = parts[j];
        parts[j] = 0;
        parts[j - 1] += 1;
        parts[k - 1] = rest - 1;
      }
    }
    case KindTag::det:
      for (std::size_t l = 0; l < kind.labels().size(); ++l)
        for (std::size_t s = 0; s < n; ++s) out.emplace_back(DetTerm{{l, s}});
      return;
    case KindTag::pmap:
      for_each_map(kind.labels().size(), n, true, false, [&](MapTerm m) { out.emplace_back(std::move(m)); });
      return;
    case KindTag::tmap:
      for_each_map(kind.labels().size(), n, false, false, [&](MapTerm m) { out.emplace_back(std::move(m)); });
      return;
    case KindTag::nemap:
      for_each_map(kind.labels().size(), n, true, true, [&](MapTerm m) { out.emplace_back(std::move(m)); });
      return;
    case KindTag::susp:
    case KindTag::suspie: {
      std::vector<MapTerm> ins, outs;
      for_each_map(kind.inputs().size(), n, kind.tag() == KindTag::susp, false, [&](MapTerm m) { ins.push_back(std::move(m)); });
      for_each_map(kind.outputs().size(), n, true, true, [&](MapTerm m) { outs.push_back(std::move(m)); });
      for (const auto& i : ins)
        for (const auto& o : outs) out.emplace_back(SuspTerm{i, o});
      return;
    }
    case KindTag::pair: {
      auto firsts = enumerate_raw(kind.first(), n, opts);
      auto seconds = enumerate_raw(kind.second(), n, opts);
      for (const auto& a : firsts)
        for (const auto& b : seconds) out.push_back(make_pair_term(a, b));
      return;
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// FunctorKind

FunctorKind FunctorKind::plts(FinSet labels) {
  return FunctorKind(std::make_shared<const Node>(Node{KindTag::plts, sorted(labels), {}, nullptr, nullptr}));
}

FunctorKind FunctorKind::dlts(FinSet labels) {
  return FunctorKind(std::make_shared<const Node>(Node{KindTag::dlts, sorted(labels), {}, nullptr, nullptr}));
}

FunctorKind FunctorKind::det(FinSet labels) {
  if (labels.empty()) throw ValidationError("DET needs a nonempty label alphabet");
  return FunctorKind(std::make_shared<const Node>(Node{KindTag::det, sorted(labels), {}, nullptr, nullptr}));
}

FunctorKind FunctorKind::susp(FinSet in, FinSet out) {
  if (!disjoint(in, out)) throw ValidationError("input and output alphabets must be disjoint");
  return FunctorKind(std::make_shared<const Node>(Node{KindTag::susp, sorted(in), sorted(out), nullptr, nullptr}));
}

FunctorKind FunctorKind::suspie(FinSet in, FinSet out) {
  if (!disjoint(in, out)) throw ValidationError("input and output alphabets must be disjoint");
  return FunctorKind(
      std::make_shared<const Node>(Node{KindTag::suspie, sorted(in), sorted(out), nullptr, nullptr}));
}

FunctorKind FunctorKind::pair(FunctorKind first, FunctorKind second) {
  if ((first.tag() == KindTag::pmap || first.tag() == KindTag::tmap) && second.tag() == KindTag::nemap &&
      disjoint(first.labels(), second.labels())) {
    return first.tag() == KindTag::pmap ? susp(first.labels(), second.labels())
                                        : suspie(first.labels(), second.labels());
  }
  return FunctorKind(std::make_shared<const Node>(Node{KindTag::pair,
                                                       {},
                                                       {},
                                                       std::make_shared<const FunctorKind>(std::move(first)),
                                                       std::make_shared<const FunctorKind>(std::move(second))}));
}

FunctorKind FunctorKind::pmap(FinSet alphabet) {
  return FunctorKind(std::make_shared<const Node>(Node{KindTag::pmap, sorted(alphabet), {}, nullptr, nullptr}));
}

FunctorKind FunctorKind::tmap(FinSet alphabet) {
  return FunctorKind(std::make_shared<const Node>(Node{KindTag::tmap, sorted(alphabet), {}, nullptr, nullptr}));
}

FunctorKind FunctorKind::nemap(FinSet alphabet) {
  return FunctorKind(std::make_shared<const Node>(Node{KindTag::nemap, sorted(alphabet), {}, nullptr, nullptr}));
}

std::optional<std::pair<FunctorKind, FunctorKind>> FunctorKind::components() const {
  switch (tag()) {
    case KindTag::susp:
      return std::pair{pmap(inputs()), nemap(outputs())};
    case KindTag::suspie:
      return std::pair{tmap(inputs()), nemap(outputs())};
    case KindTag::pair:
      return std::pair{first(), second()};
    default:
      return std::nullopt;
  }
}

bool FunctorKind::has_distributions() const {
  if (tag() == KindTag::dlts) return true;
  if (tag() == KindTag::pair) return first().has_distributions() || second().has_distributions();
  return false;
}

std::string FunctorKind::str() const {
  switch (tag()) {
    case KindTag::plts:
      return "PLTS{" + str_names(labels()) + "}";
    case KindTag::dlts:
      return "DLTS{" + str_names(labels()) + "}";
    case KindTag::det:
      return "DET{" + str_names(labels()) + "}";
    case KindTag::susp:
      return "SUSP{in=" + str_names(inputs()) + ";out=" + str_names(outputs()) + "}";
    case KindTag::suspie:
      return "SUSPIE{in=" + str_names(inputs()) + ";out=" + str_names(outputs()) + "}";
    case KindTag::pair:
      return "PAIR(" + first().str() + "," + second().str() + ")";
    case KindTag::pmap:
      return "PMAP{" + str_names(labels()) + "}";
    case KindTag::tmap:
      return "TMAP{" + str_names(labels()) + "}";
    case KindTag::nemap:
      return "NEMAP{" + str_names(labels()) + "}";
  }
  return "?";
}

bool operator==(const FunctorKind& a, const FunctorKind& b) {
  if (a.node_ == b.node_) return true;
  if (a.tag() != b.tag()) return false;
  if (a.tag() == KindTag::pair) return a.first() == b.first() && a.second() == b.second();
  return a.node_->a == b.node_->a && a.node_->b == b.node_->b;
}

// ---------------------------------------------------------------------------
// Terms

std::strong_ordering DltsTerm::operator<=>(const DltsTerm& o) const {
  return std::lexicographical_compare_three_way(
      weights.begin(), weights.end(), o.weights.begin(), o.weights.end(), [](const auto& x, const auto& y) {
        if (auto c = x.first <=> y.first; c != 0) return c;
        return x.second <=> y.second;
      });
}

bool PairTerm::operator==(const PairTerm& o) const { return *first == *o.first && *second == *o.second; }

std::strong_ordering PairTerm::operator<=>(const PairTerm& o) const {
  if (auto c = *first <=> *o.first; c != 0) return c;
  return *second <=> *o.second;
}

FunctorTerm::FunctorTerm(PltsTerm t) {
  std::sort(t.arrows.begin(), t.arrows.end());
  t.arrows.erase(std::unique(t.arrows.begin(), t.arrows.end()), t.arrows.end());
  value_ = std::move(t);
}

FunctorTerm::FunctorTerm(DltsTerm t) {
  std::map<Arrow, Rational> merged;
  for (auto& [a, w] : t.weights) merged[a] += w;
  DltsTerm norm;
  for (auto& [a, w] : merged)
    if (!w.is_zero()) norm.weights.emplace_back(a, w);
  value_ = std::move(norm);
}

template <class T>
const T& FunctorTerm::as() const {
  if (const T* p = std::get_if<T>(&value_)) return *p;
  throw KindMismatch("term does not match the expected functor kind");
}

template const PltsTerm& FunctorTerm::as<PltsTerm>() const;
template const DltsTerm& FunctorTerm::as<DltsTerm>() const;
template const DetTerm& FunctorTerm::as<DetTerm>() const;
template const MapTerm& FunctorTerm::as<MapTerm>() const;
template const SuspTerm& FunctorTerm::as<SuspTerm>() const;
template const PairTerm& FunctorTerm::as<PairTerm>() const;

std::strong_ordering FunctorTerm::operator<=>(const FunctorTerm& o) const {
  if (value_.index() != o.value_.index()) return value_.index() <=> o.value_.index();
  return std::visit(
      [&](const auto& a) -> std::strong_ordering {
        using T = std::decay_t<decltype(a)>;
        return a <=> std::get<T>(o.value_);
      },
      value_);
}

FunctorTerm make_pair_term(FunctorTerm first, FunctorTerm second) {
  return PairTerm{std::make_shared<const FunctorTerm>(std::move(first)),
                  std::make_shared<const FunctorTerm>(std::move(second))};
}

std::pair<FunctorTerm, FunctorTerm> split(const FunctorTerm& t) {
  if (const auto* s = t.get_if<SuspTerm>()) return {s->in, s->out};
  if (const auto* p = t.get_if<PairTerm>()) return {*p->first, *p->second};
  throw KindMismatch("term is not a product term");
}

std::optional<std::string> term_validate(const FunctorKind& kind, const FunctorTerm& t, std::size_t n) {
  const std::size_t nl = kind.tag() == KindTag::pair || kind.tag() == KindTag::susp || kind.tag() == KindTag::suspie
                             ? 0
                             : kind.labels().size();
  auto check_arrow = [&](const Arrow& a) -> std::optional<std::string> {
    if (a.label >= nl) return "label index " + std::to_string(a.label) + " outside the alphabet";
    if (a.state >= n) return "state index " + std::to_string(a.state) + " outside the carrier";
    return std::nullopt;
  };
  switch (kind.tag()) {
    case KindTag::plts: {
      const auto* p = t.get_if<PltsTerm>();
      if (!p) return "expected a labelled successor set";
      for (const auto& a : p->arrows)
        if (auto v = check_arrow(a)) return v;
      if (!std::is_sorted(p->arrows.begin(), p->arrows.end()) ||
          std::adjacent_find(p->arrows.begin(), p->arrows.end()) != p->arrows.end())
        return "successor set not normalized";
      return std::nullopt;
    }
    case KindTag::dlts: {
      const auto* p = t.get_if<DltsTerm>();
      if (!p) return "expected a labelled distribution";
      Rational mass;
      for (const auto& [a, w] : p->weights) {
        if (auto v = check_arrow(a)) return v;
        if (!w.is_positive()) return "weight " + w.str() + " is not positive";
        mass += w;
      }
      if (!(mass == Rational(1))) return "mass " + mass.str() + " ≠ 1";
      return std::nullopt;
    }
    case KindTag::det: {
      const auto* p = t.get_if<DetTerm>();
      if (!p) return "expected a single labelled successor";
      return check_arrow(p->arrow);
    }
    case KindTag::pmap:
    case KindTag::tmap:
    case KindTag::nemap: {
      const auto* p = t.get_if<MapTerm>();
      if (!p) return "expected a map term";
      if (auto v = validate_map(*p, kind.labels(), n, "letter")) return v;
      if (kind.tag() == KindTag::tmap) return require_total(*p, kind.labels(), "letter");
      if (kind.tag() == KindTag::nemap) return require_nonempty(*p);
      return std::nullopt;
    }
    case KindTag::susp:
    case KindTag::suspie: {
      const auto* p = t.get_if<SuspTerm>();
      if (!p) return "expected a suspension term";
      if (auto v = validate_map(p->in, kind.inputs(), n, "input")) return v;
      if (auto v = validate_map(p->out, kind.outputs(), n, "output")) return v;
      if (kind.tag() == KindTag::suspie)
        if (auto v = require_total(p->in, kind.inputs(), "input")) return v;
      return require_nonempty(p->out);
    }
    case KindTag::pair: {
      const auto* p = t.get_if<PairTerm>();
      if (!p) return "expected a pair term";
      if (auto v = term_validate(kind.first(), *p->first, n)) return "first component: " + *v;
      if (auto v = term_validate(kind.second(), *p->second, n)) return "second component: " + *v;
      return std::nullopt;
    }
  }
  return "unknown functor kind";
}

FunctorTerm fmap(std::span<const std::size_t> f, const FunctorTerm& t) {
  return std::visit(
      [&](const auto& v) -> FunctorTerm {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, PltsTerm>) {
          PltsTerm out;
          for (const auto& a : v.arrows) out.arrows.push_back({a.label, apply(f, a.state)});
          return out;
        } else if constexpr (std::is_same_v<T, DltsTerm>) {
          DltsTerm out;
          for (const auto& [a, w] : v.weights) out.weights.emplace_back(Arrow{a.label, apply(f, a.state)}, w);
          return out;
        } else if constexpr (std::is_same_v<T, DetTerm>) {
          return DetTerm{{v.arrow.label, apply(f, v.arrow.state)}};
        } else if constexpr (std::is_same_v<T, MapTerm>) {
          return fmap_map(f, v);
        } else if constexpr (std::is_same_v<T, SuspTerm>) {
          return SuspTerm{fmap_map(f, v.in), fmap_map(f, v.out)};
        } else {
          return make_pair_term(fmap(f, *v.first), fmap(f, *v.second));
        }
      },
      t.value());
}

std::vector<std::size_t> support(const FunctorTerm& t) {
  std::vector<std::size_t> out;
  auto add_map = [&](const MapTerm& m) {
    for (const auto& slot : m.image)
      if (slot) out.push_back(*slot);
  };
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, PltsTerm>) {
          for (const auto& a : v.arrows) out.push_back(a.state);
        } else if constexpr (std::is_same_v<T, DltsTerm>) {
          for (const auto& [a, w] : v.weights) out.push_back(a.state);
        } else if constexpr (std::is_same_v<T, DetTerm>) {
          out.push_back(v.arrow.state);
        } else if constexpr (std::is_same_v<T, MapTerm>) {
          add_map(v);
        } else if constexpr (std::is_same_v<T, SuspTerm>) {
          add_map(v.in);
          add_map(v.out);
        } else {
          auto a = support(*v.first);
          auto b = support(*v.second);
          out.insert(out.end(), a.begin(), a.end());
          out.insert(out.end(), b.begin(), b.end());
        }
      },
      t.value());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Subset support_set(const FunctorTerm& t, std::size_t carrier_size) {
  Subset s(carrier_size);
  for (auto x : support(t)) {
    if (x >= carrier_size) throw CarrierMismatch("term support leaves the carrier");
    s.set(x);
  }
  return s;
}

FunctorTerm restrict_to(const FunctorTerm& t, const std::vector<std::size_t>& inclusion) {
  std::size_t top = inclusion.empty() ? 0 : inclusion.back() + 1;
  for (auto x : support(t)) top = std::max(top, x + 1);
  std::vector<std::size_t> back(top, std::numeric_limits<std::size_t>::max());
  for (std::size_t i = 0; i < inclusion.size(); ++i) back[inclusion[i]] = i;
  for (auto x : support(t))
    if (back[x] == std::numeric_limits<std::size_t>::max())
      throw CarrierMismatch("sub-carrier does not cover the support of the term");
  return fmap(back, t);
}

std::uint64_t count_terms(const FunctorKind& kind, std::size_t n, const TermEnumOptions& opts) {
  switch (kind.tag()) {
    case KindTag::plts: {
      const std::size_t k = kind.labels().size() * n;
      return k >= 64 ? kSaturated : std::uint64_t{1} << k;
    }
    case KindTag::dlts: {
      const std::size_t k = kind.labels().size() * n;
      if (k == 0) return 0;
      return binomial(opts.denominator + k - 1, k - 1);
    }
    case KindTag::det:
      return kind.labels().size() * n;
    case KindTag::pmap:
      return sat_pow(n + 1, kind.labels().size());
    case KindTag::tmap:
      return sat_pow(n, kind.labels().size());
    case KindTag::nemap:
      return sat_pow(n + 1, kind.labels().size()) - 1;
    case KindTag::susp:
    case KindTag::suspie:
    case KindTag::pair: {
      auto [a, b] = *kind.components();
      return sat_mul(count_terms(a, n, opts), count_terms(b, n, opts));
    }
  }
  return 0;
}

std::vector<FunctorTerm> enumerate_terms(const FunctorKind& kind, std::size_t n, const TermEnumOptions& opts) {
  const auto count = count_terms(kind, n, opts);
  if (count > opts.cap)
    throw Intractable("enumerating " + kind.str() + " over " + std::to_string(n) + " states needs " +
                      (count == kSaturated ? std::string("more than 2^64") : std::to_string(count)) +
                      " terms (cap " + std::to_string(opts.cap) + ")");
  std::vector<FunctorTerm> out;
  out.reserve(count);
  enumerate_into(kind, n, opts, out);
  return out;
}

std::string format_term(const FunctorKind& kind, const FunctorTerm& t, const FinSet& carrier) {
  auto map_str = [&](const MapTerm& m, const FinSet& alphabet) {
    std::string out;
    for (std::size_t i = 0; i < m.image.size(); ++i) {
      if (!m.image[i]) continue;
      if (!out.empty()) out += ' ';
      out += alphabet[i] + "->" + carrier[*m.image[i]];
    }
    return out;
  };
  switch (kind.tag()) {
    case KindTag::plts: {
      std::string out = "{";
      for (const auto& a : t.as<PltsTerm>().arrows) {
        if (out.size() > 1) out += ' ';
        out += kind.labels()[a.label] + "->" + carrier[a.state];
      }
      return out + "}";
    }
    case KindTag::dlts: {
      std::string out = "{";
      for (const auto& [a, w] : t.as<DltsTerm>().weights) {
        if (out.size() > 1) out += ' ';
        out += kind.labels()[a.label] + "->" + carrier[a.state] + ":" + w.str();
      }
      return out + "}";
    }
    case KindTag::det: {
      const auto& a = t.as<DetTerm>().arrow;
      return kind.labels()[a.label] + "->" + carrier[a.state];
    }
    case KindTag::pmap:
    case KindTag::tmap:
    case KindTag::nemap:
      return "[" + map_str(t.as<MapTerm>(), kind.labels()) + "]";
    case KindTag::susp:
    case KindTag::suspie: {
      const auto& s = t.as<SuspTerm>();
      std::string in = map_str(s.in, kind.inputs());
      std::string out = map_str(s.out, kind.outputs());
      return "{" + in + (in.empty() || out.empty() ? "" : " ") + out + "}";
    }
    case KindTag::pair: {
      auto [a, b] = split(t);
      return "(" + format_term(kind.first(), a, carrier) + ", " + format_term(kind.second(), b, carrier) + ")";
    }
  }
  return "?";
}

Coalgebra::Coalgebra(FunctorKind kind, FinSet states, std::vector<FunctorTerm> trans)
    : kind_(std::move(kind)), states_(std::move(states)), trans_(std::move(trans)) {
  if (trans_.size() != states_.size())
    throw ValidationError("transition map covers " + std::to_string(trans_.size()) + " of " +
                          std::to_string(states_.size()) + " states");
  for (std::size_t x = 0; x < trans_.size(); ++x)
    if (auto v = term_validate(kind_, trans_[x], states_.size())) throw ValidationError(*v + " at " + states_[x]);
}

}  // namespace hetsim
