#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "hetsim/functors.hpp"
#include "hetsim/relcore.hpp"

namespace testing {

inline hetsim::Rel rel(const hetsim::FinSet& x, const hetsim::FinSet& y,
                       const std::vector<std::pair<std::string, std::string>>& pairs) {
  return hetsim::Rel::from_pairs(x, y, pairs);
}

inline hetsim::PltsTerm plts(std::vector<hetsim::Arrow> arrows) {
  std::sort(arrows.begin(), arrows.end());
  arrows.erase(std::unique(arrows.begin(), arrows.end()), arrows.end());
  return hetsim::PltsTerm{std::move(arrows)};
}

inline hetsim::DltsTerm dlts(std::vector<std::pair<hetsim::Arrow, hetsim::Rational>> w) {
  std::sort(w.begin(), w.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return hetsim::DltsTerm{std::move(w)};
}

// Every relation between the two carriers, as bitmask order.
template <class Fn>
void for_each_relation(const hetsim::FinSet& x, const hetsim::FinSet& y, Fn&& fn) {
  const std::size_t bits = x.size() * y.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
    hetsim::Rel r(x, y);
    for (std::size_t i = 0; i < bits; ++i)
      if (mask >> i & 1U) r.insert(i / y.size(), i % y.size());
    fn(r);
  }
}

inline std::string data(const std::string& name) { return std::string(HETSIM_TEST_DATA) + "/" + name; }

}  // namespace testing
