#pragma once

// Finite sets, binary relations between them, and relational algebra.
//
// Relations are bitmatrices indexed by the declared element order of their
// carriers, so every iteration below is deterministic.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace hetsim {

/// Subset of a finite carrier, one bit per element in declared order.
using Subset = boost::dynamic_bitset<>;

/// Calls `fn(i)` for every set bit of `s`, in increasing order.
template <class Fn>
void for_each_bit(const Subset& s, Fn&& fn) {
  for (auto i = s.find_first(); i != Subset::npos; i = s.find_next(i)) fn(i);
}

/// Subset of size `n` holding exactly the low bits of `mask`.
Subset subset_from_mask(std::size_t n, std::uint64_t mask);

/// Ordered set of distinct names. Cheap to copy (shared immutable storage).
class FinSet {
 public:
  FinSet();
  explicit FinSet(std::vector<std::string> elements);
  FinSet(std::initializer_list<std::string> elements);

  /// `{prefix0, prefix1, ...}` with `n` elements.
  static FinSet numbered(std::string_view prefix, std::size_t n);

  std::size_t size() const;
  bool empty() const { return size() == 0; }
  const std::string& operator[](std::size_t i) const;
  const std::vector<std::string>& elements() const;

  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws CarrierMismatch if `name` is not an element.
  std::size_t index_of(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name).has_value(); }

  Subset none() const { return Subset(size()); }
  Subset all() const { return ~Subset(size()); }
  Subset subset(std::initializer_list<std::string_view> names) const;

  /// Renders a subset as `{x,y}`.
  std::string format(const Subset& s) const;

  friend bool operator==(const FinSet& a, const FinSet& b);

  struct Data;

 private:
  std::shared_ptr<const Data> data_;
};

/// Set union of two finite sets, keeping the order of `a` then the new elements of `b`.
FinSet union_of(const FinSet& a, const FinSet& b);

/// Binary relation `src ⇸ dst`.
class Rel {
 public:
  Rel() = default;
  Rel(FinSet src, FinSet dst);

  static Rel identity(const FinSet& x);
  static Rel full(const FinSet& src, const FinSet& dst);
  static Rel from_pairs(const FinSet& src, const FinSet& dst,
                        const std::vector<std::pair<std::string, std::string>>& pairs);
  /// Graph of the total map `f` (element i goes to f[i]).
  static Rel graph(const FinSet& src, const FinSet& dst, const std::vector<std::size_t>& f);

  const FinSet& src() const { return src_; }
  const FinSet& dst() const { return dst_; }

  bool contains(std::size_t x, std::size_t y) const { return rows_[x][y]; }
  bool contains(std::string_view x, std::string_view y) const;
  void insert(std::size_t x, std::size_t y) { rows_[x].set(y); }
  void erase(std::size_t x, std::size_t y) { rows_[x].reset(y); }

  /// Image of the single element `x`.
  const Subset& row(std::size_t x) const { return rows_[x]; }

  std::size_t size() const;
  bool empty() const { return size() == 0; }
  /// Pairs in lexicographic declared order.
  std::vector<std::pair<std::size_t, std::size_t>> pairs() const;

  bool subset_of(const Rel& other) const;

  friend bool operator==(const Rel& a, const Rel& b);

 private:
  FinSet src_;
  FinSet dst_;
  std::vector<Subset> rows_;
};

/// Applicative-order composite `s·r = {(x,z) | ∃y. x r y s z}`.
Rel compose(const Rel& s, const Rel& r);
Rel converse(const Rel& r);
Rel intersect(const Rel& a, const Rel& b);
Rel unite(const Rel& a, const Rel& b);
/// Relational image `r[A]`; throws CarrierMismatch if `a` is not a subset of `r.src()`.
Subset image(const Rel& r, const Subset& a);

/// Restriction of `r` to `rows × cols`, re-indexed onto the given sub-carriers.
Rel restrict(const Rel& r, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols);

bool is_left_total(const Rel& r);
bool is_right_total(const Rel& r);

/// A pair `(A, B)` with `A × B ⊆ r`.
struct Box {
  Subset left;
  Subset right;
};

/// Factorization `r = s·t` through the set of all boxes of `r`.
struct CounivFactorization {
  FinSet mid;
  std::vector<Box> boxes;
  Rel t;  // src ⇸ mid, x t (A,B) iff x ∈ A
  Rel s;  // mid ⇸ dst, (A,B) s z iff z ∈ B
  std::optional<std::string> warning;
};

/// Every box of `r`, ordered by left subset then right subset (as bitmasks).
std::vector<Box> all_boxes(const Rel& r);
/// The maximal boxes of `r` (its formal concepts), same order as all_boxes.
std::vector<Box> maximal_boxes(const Rel& r);

/// Factorization through the given boxes, which must all satisfy `A × B ⊆ r`.
CounivFactorization factor_through(const Rel& r, std::vector<Box> boxes);
CounivFactorization couniv_factorize(const Rel& r, std::size_t warn_bound = std::size_t{1} << 16);

}  // namespace hetsim
