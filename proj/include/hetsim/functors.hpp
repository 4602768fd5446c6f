#pragma once

// The catalog of set functors, their terms, functorial action and supports.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hetsim/rational.hpp"
#include "hetsim/relcore.hpp"

namespace hetsim {

enum class KindTag {
  plts,    // P(A × −)
  dlts,    // D(A × −)
  det,     // A × −
  susp,    // (I ⇀ −) × (O ⇀ne −)
  suspie,  // (I → −) × (O ⇀ne −)
  pair,    // F1 × F2
  pmap,    // A ⇀ −
  tmap,    // A → −
  nemap,   // A ⇀ne −
};

/// A functor from the catalog. Immutable value; copies share storage.
class FunctorKind {
 public:
  static FunctorKind plts(FinSet labels);
  static FunctorKind dlts(FinSet labels);
  static FunctorKind det(FinSet labels);
  static FunctorKind susp(FinSet in, FinSet out);
  static FunctorKind suspie(FinSet in, FinSet out);
  /// Products of a (partial|total) input map with a nonempty output map over
  /// disjoint alphabets are canonicalized to SUSP / SUSPIE.
  static FunctorKind pair(FunctorKind first, FunctorKind second);
  static FunctorKind pmap(FinSet alphabet);
  static FunctorKind tmap(FinSet alphabet);
  static FunctorKind nemap(FinSet alphabet);

  KindTag tag() const { return node_->tag; }
  /// Label alphabet of PLTS/DLTS/DET, or the map alphabet of PMAP/TMAP/NEMAP.
  /// Alphabets are stored sorted by name.
  const FinSet& labels() const { return node_->a; }
  const FinSet& inputs() const { return node_->a; }
  const FinSet& outputs() const { return node_->b; }
  const FunctorKind& first() const { return *node_->first; }
  const FunctorKind& second() const { return *node_->second; }

  /// Component kinds of SUSP, SUSPIE and PAIR; nullopt otherwise.
  std::optional<std::pair<FunctorKind, FunctorKind>> components() const;

  /// True if some component is DLTS (infinitely many terms on any carrier).
  bool has_distributions() const;

  std::string str() const;

  friend bool operator==(const FunctorKind& a, const FunctorKind& b);

 private:
  struct Node {
    KindTag tag;
    FinSet a;
    FinSet b;
    std::shared_ptr<const FunctorKind> first;
    std::shared_ptr<const FunctorKind> second;
  };
  explicit FunctorKind(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

/// One labelled successor `(label, state)`, as indices into the label alphabet and carrier.
struct Arrow {
  std::size_t label;
  std::size_t state;
  auto operator<=>(const Arrow&) const = default;
};

struct PltsTerm {
  std::vector<Arrow> arrows;  // sorted, duplicate-free
  auto operator<=>(const PltsTerm&) const = default;
};

struct DltsTerm {
  std::vector<std::pair<Arrow, Rational>> weights;  // sorted by arrow, strictly positive
  bool operator==(const DltsTerm&) const = default;
  std::strong_ordering operator<=>(const DltsTerm&) const;
};

struct DetTerm {
  Arrow arrow;
  auto operator<=>(const DetTerm&) const = default;
};

/// Partial (or total) map from an alphabet to states; one slot per letter.
struct MapTerm {
  std::vector<std::optional<std::size_t>> image;
  auto operator<=>(const MapTerm&) const = default;
};

struct SuspTerm {
  MapTerm in;
  MapTerm out;
  auto operator<=>(const SuspTerm&) const = default;
};

class FunctorTerm;

struct PairTerm {
  std::shared_ptr<const FunctorTerm> first;
  std::shared_ptr<const FunctorTerm> second;
  bool operator==(const PairTerm& o) const;
  std::strong_ordering operator<=>(const PairTerm& o) const;
};

/// One successor structure of a state; its variant matches its FunctorKind.
class FunctorTerm {
 public:
  using Value = std::variant<PltsTerm, DltsTerm, DetTerm, MapTerm, SuspTerm, PairTerm>;

  FunctorTerm(PltsTerm t);   // NOLINT(google-explicit-constructor)
  FunctorTerm(DltsTerm t);   // NOLINT(google-explicit-constructor)
  FunctorTerm(DetTerm t) : value_(std::move(t)) {}    // NOLINT(google-explicit-constructor)
  FunctorTerm(MapTerm t) : value_(std::move(t)) {}    // NOLINT(google-explicit-constructor)
  FunctorTerm(SuspTerm t) : value_(std::move(t)) {}   // NOLINT(google-explicit-constructor)
  FunctorTerm(PairTerm t) : value_(std::move(t)) {}   // NOLINT(google-explicit-constructor)

  const Value& value() const { return value_; }
  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&value_);
  }
  template <class T>
  const T& as() const;

  bool operator==(const FunctorTerm& o) const { return value_ == o.value_; }
  std::strong_ordering operator<=>(const FunctorTerm& o) const;

 private:
  Value value_;
};

FunctorTerm make_pair_term(FunctorTerm first, FunctorTerm second);

/// First and second component of a SUSP/SUSPIE/PAIR term.
std::pair<FunctorTerm, FunctorTerm> split(const FunctorTerm& t);

/// nullopt if `t` is a valid term of `kind` over a carrier of `carrier_size`
/// elements, otherwise a description of the violated clause.
std::optional<std::string> term_validate(const FunctorKind& kind, const FunctorTerm& t, std::size_t carrier_size);
inline std::optional<std::string> term_validate(const FunctorKind& kind, const FunctorTerm& t, const FinSet& carrier) {
  return term_validate(kind, t, carrier.size());
}

/// Functorial action of the total map `f` (state i goes to f[i]).
FunctorTerm fmap(std::span<const std::size_t> f, const FunctorTerm& t);

/// States mentioned by `t`, ascending.
std::vector<std::size_t> support(const FunctorTerm& t);
Subset support_set(const FunctorTerm& t, std::size_t carrier_size);

/// Re-types `t` onto the sub-carrier listed in `inclusion` (ascending state
/// indices covering the support of `t`).
FunctorTerm restrict_to(const FunctorTerm& t, const std::vector<std::size_t>& inclusion);

struct TermEnumOptions {
  std::uint64_t denominator = 4;                  // DLTS weights are multiples of 1/denominator
  std::uint64_t cap = std::uint64_t{1} << 20;     // maximum number of terms
};

/// Number of terms `enumerate_terms` would produce, saturating at UINT64_MAX.
std::uint64_t count_terms(const FunctorKind& kind, std::size_t carrier_size, const TermEnumOptions& opts = {});

/// All valid terms over a carrier of `carrier_size` states, each exactly once,
/// in a fixed order. Throws Intractable if the count exceeds `opts.cap`.
std::vector<FunctorTerm> enumerate_terms(const FunctorKind& kind, std::size_t carrier_size,
                                         const TermEnumOptions& opts = {});

/// Renders a term with state and label names, e.g. `{a->s1, b->s2}`.
std::string format_term(const FunctorKind& kind, const FunctorTerm& t, const FinSet& carrier);

/// A system: states with one successor structure each.
class Coalgebra {
 public:
  /// Validates every term; throws ValidationError naming the offending state.
  Coalgebra(FunctorKind kind, FinSet states, std::vector<FunctorTerm> trans);

  const FunctorKind& kind() const { return kind_; }
  const FinSet& states() const { return states_; }
  std::size_t size() const { return states_.size(); }
  const FunctorTerm& operator()(std::size_t x) const { return trans_[x]; }
  const std::vector<FunctorTerm>& transitions() const { return trans_; }

  friend bool operator==(const Coalgebra& a, const Coalgebra& b) {
    return a.kind_ == b.kind_ && a.states_ == b.states_ && a.trans_ == b.trans_;
  }

 private:
  FunctorKind kind_;
  FinSet states_;
  std::vector<FunctorTerm> trans_;
};

}  // namespace hetsim
