#include "hetsim/relcore.hpp"

#include <algorithm>
#include <unordered_map>

#include "hetsim/errors.hpp"

namespace hetsim {

struct FinSet::Data {
  std::vector<std::string> names;
  std::unordered_map<std::string, std::size_t> index;
};

namespace {

std::shared_ptr<const FinSet::Data> empty_data() {
  static const auto data = std::make_shared<const FinSet::Data>();
  return data;
}

std::uint64_t to_mask(const Subset& s) {
  std::uint64_t m = 0;
  for_each_bit(s, [&](std::size_t i) { m |= std::uint64_t{1} << i; });
  return m;
}

constexpr std::size_t kMaxBoxSide = 24;

}  // namespace

Subset subset_from_mask(std::size_t n, std::uint64_t mask) {
  Subset s(n);
  for (std::size_t i = 0; i < n && i < 64; ++i)
    if (mask >> i & 1U) s.set(i);
  return s;
}

FinSet::FinSet() : data_(empty_data()) {}

std::size_t FinSet::size() const { return data_->names.size(); }
const std::string& FinSet::operator[](std::size_t i) const { return data_->names[i]; }
const std::vector<std::string>& FinSet::elements() const { return data_->names; }

FinSet::FinSet(std::vector<std::string> elements) {
  auto data = std::make_shared<Data>();
  data->index.reserve(elements.size());
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (!data->index.emplace(elements[i], i).second)
      throw ValidationError("duplicate element '" + elements[i] + "'");
  }
  data->names = std::move(elements);
  data_ = std::move(data);
}

FinSet::FinSet(std::initializer_list<std::string> elements) : FinSet(std::vector<std::string>(elements)) {}

FinSet FinSet::numbered(std::string_view prefix, std::size_t n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::string(prefix) + std::to_string(i));
  return FinSet(std::move(names));
}

std::optional<std::size_t> FinSet::find(std::string_view name) const {
  auto it = data_->index.find(std::string(name));
  if (it == data_->index.end()) return std::nullopt;
  return it->second;
}

std::size_t FinSet::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw CarrierMismatch("'" + std::string(name) + "' is not an element of " + format(all()));
}

Subset FinSet::subset(std::initializer_list<std::string_view> names) const {
  Subset s = none();
  for (auto n : names) s.set(index_of(n));
  return s;
}

std::string FinSet::format(const Subset& s) const {
  std::string out = "{";
  bool first = true;
  for_each_bit(s, [&](std::size_t i) {
    if (!first) out += ',';
    out += (*this)[i];
    first = false;
  });
  return out + "}";
}

bool operator==(const FinSet& a, const FinSet& b) {
  return a.data_ == b.data_ || a.data_->names == b.data_->names;
}

FinSet union_of(const FinSet& a, const FinSet& b) {
  std::vector<std::string> names = a.elements();
  for (const auto& n : b.elements())
    if (!a.contains(n)) names.push_back(n);
  return FinSet(std::move(names));
}

Rel::Rel(FinSet src, FinSet dst) : src_(std::move(src)), dst_(std::move(dst)) {
  rows_.assign(src_.size(), dst_.none());
}

Rel Rel::identity(const FinSet& x) {
  Rel r(x, x);
  for (std::size_t i = 0; i < x.size(); ++i) r.insert(i, i);
  return r;
}

Rel Rel::full(const FinSet& src, const FinSet& dst) {
  Rel r(src, dst);
  for (auto& row : r.rows_) row.set();
  return r;
}

Rel Rel::from_pairs(const FinSet& src, const FinSet& dst,
                    const std::vector<std::pair<std::string, std::string>>& pairs) {
  Rel r(src, dst);
  for (const auto& [x, y] : pairs) r.insert(src.index_of(x), dst.index_of(y));
  return r;
}

Rel Rel::graph(const FinSet& src, const FinSet& dst, const std::vector<std::size_t>& f) {
  if (f.size() != src.size()) throw CarrierMismatch("map is not total on its domain");
  Rel r(src, dst);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] >= dst.size()) throw CarrierMismatch("map leaves its codomain");
    r.insert(i, f[i]);
  }
  return r;
}

bool Rel::contains(std::string_view x, std::string_view y) const {
  auto i = src_.find(x);
  auto j = dst_.find(y);
  return i && j && contains(*i, *j);
}

std::size_t Rel::size() const {
  std::size_t n = 0;
  for (const auto& row : rows_) n += row.count();
  return n;
}

std::vector<std::pair<std::size_t, std::size_t>> Rel::pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t x = 0; x < rows_.size(); ++x) for_each_bit(rows_[x], [&](std::size_t y) { out.emplace_back(x, y); });
  return out;
}

bool Rel::subset_of(const Rel& other) const {
  if (!(src_ == other.src_) || !(dst_ == other.dst_)) throw CarrierMismatch("inclusion between relations on different carriers");
  for (std::size_t x = 0; x < rows_.size(); ++x)
    if (!rows_[x].is_subset_of(other.rows_[x])) return false;
  return true;
}

bool operator==(const Rel& a, const Rel& b) {
  return a.src_ == b.src_ && a.dst_ == b.dst_ && a.rows_ == b.rows_;
}

Rel compose(const Rel& s, const Rel& r) {
  if (!(r.dst() == s.src()))
    throw CarrierMismatch("cannot compose: middle carriers " + r.dst().format(r.dst().all()) + " and " +
                          s.src().format(s.src().all()) + " differ");
  Rel out(r.src(), s.dst());
  for (std::size_t x = 0; x < r.src().size(); ++x)
    for_each_bit(r.row(x), [&](std::size_t y) {
      for_each_bit(s.row(y), [&](std::size_t z) { out.insert(x, z); });
    });
  return out;
}

Rel converse(const Rel& r) {
  Rel out(r.dst(), r.src());
  for (auto [x, y] : r.pairs()) out.insert(y, x);
  return out;
}

Rel intersect(const Rel& a, const Rel& b) {
  if (!(a.src() == b.src()) || !(a.dst() == b.dst())) throw CarrierMismatch("meet of relations on different carriers");
  Rel out(a.src(), a.dst());
  for (auto [x, y] : a.pairs())
    if (b.contains(x, y)) out.insert(x, y);
  return out;
}

Rel unite(const Rel& a, const Rel& b) {
  if (!(a.src() == b.src()) || !(a.dst() == b.dst())) throw CarrierMismatch("join of relations on different carriers");
  Rel out = a;
  for (auto [x, y] : b.pairs()) out.insert(x, y);
  return out;
}

Subset image(const Rel& r, const Subset& a) {
  if (a.size() != r.src().size())
    throw CarrierMismatch("subset of size " + std::to_string(a.size()) + " used on a carrier of size " +
                          std::to_string(r.src().size()));
  Subset out = r.dst().none();
  for_each_bit(a, [&](std::size_t x) { out |= r.row(x); });
  return out;
}

Rel restrict(const Rel& r, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
  std::vector<std::string> rn, cn;
  for (auto i : rows) rn.push_back(r.src()[i]);
  for (auto j : cols) cn.push_back(r.dst()[j]);
  Rel out{FinSet(std::move(rn)), FinSet(std::move(cn))};
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b)
      if (r.contains(rows[a], cols[b])) out.insert(a, b);
  return out;
}

bool is_left_total(const Rel& r) {
  for (std::size_t x = 0; x < r.src().size(); ++x)
    if (r.row(x).none()) return false;
  return true;
}

bool is_right_total(const Rel& r) { return image(r, r.src().all()).all(); }

std::vector<Box> all_boxes(const Rel& r) {
  const std::size_t nx = r.src().size();
  const std::size_t nz = r.dst().size();
  if (nx > kMaxBoxSide || nz > kMaxBoxSide)
    throw Intractable("box enumeration over a " + std::to_string(nx) + "x" + std::to_string(nz) + " relation");
  std::vector<std::uint64_t> rows(nx);
  for (std::size_t x = 0; x < nx; ++x) rows[x] = to_mask(r.row(x));
  const std::uint64_t full_z = nz == 0 ? 0 : (std::uint64_t{1} << nz) - 1;

  std::vector<Box> out;
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << nx); ++a) {
    std::uint64_t common = full_z;
    for (std::size_t x = 0; x < nx; ++x)
      if (a >> x & 1U) common &= rows[x];
    // Ascending enumeration of the submasks of `common`.
    std::uint64_t b = 0;
    while (true) {
      out.push_back({subset_from_mask(nx, a), subset_from_mask(nz, b)});
      if (b == common) break;
      b = ((b | ~common) + 1) & common;
    }
  }
  return out;
}

std::vector<Box> maximal_boxes(const Rel& r) {
  const std::size_t nx = r.src().size();
  const std::size_t nz = r.dst().size();
  if (nx > kMaxBoxSide || nz > kMaxBoxSide)
    throw Intractable("concept enumeration over a " + std::to_string(nx) + "x" + std::to_string(nz) + " relation");
  std::vector<std::uint64_t> rows(nx);
  for (std::size_t x = 0; x < nx; ++x) rows[x] = to_mask(r.row(x));
  const std::uint64_t full_z = nz == 0 ? 0 : (std::uint64_t{1} << nz) - 1;

  std::vector<Box> out;
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << nx); ++a) {
    std::uint64_t common = full_z;
    for (std::size_t x = 0; x < nx; ++x)
      if (a >> x & 1U) common &= rows[x];
    std::uint64_t closure = 0;
    for (std::size_t x = 0; x < nx; ++x)
      if ((rows[x] & common) == common) closure |= std::uint64_t{1} << x;
    if (closure == a) out.push_back({subset_from_mask(nx, a), subset_from_mask(nz, common)});
  }
  return out;
}

CounivFactorization factor_through(const Rel& r, std::vector<Box> boxes) {
  std::vector<std::string> names;
  names.reserve(boxes.size());
  for (const auto& b : boxes) names.push_back("(" + r.src().format(b.left) + "," + r.dst().format(b.right) + ")");
  FinSet mid(std::move(names));
  Rel t(r.src(), mid);
  Rel s(mid, r.dst());
  for (std::size_t m = 0; m < boxes.size(); ++m) {
    for_each_bit(boxes[m].left, [&](std::size_t x) { t.insert(x, m); });
    for_each_bit(boxes[m].right, [&](std::size_t z) { s.insert(m, z); });
  }
  return {std::move(mid), std::move(boxes), std::move(t), std::move(s), std::nullopt};
}

CounivFactorization couniv_factorize(const Rel& r, std::size_t warn_bound) {
  auto f = factor_through(r, all_boxes(r));
  if (f.boxes.size() > warn_bound)
    f.warning = "couniversal factorization has " + std::to_string(f.boxes.size()) + " middle elements (bound " +
                std::to_string(warn_bound) + ")";
  return f;
}

}  // namespace hetsim
