#pragma once

// Brute-force reference implementations. Exponential by design; used by the
// test suites, by selftest, and as the generic composite search.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hetsim/connectors.hpp"
#include "hetsim/functors.hpp"
#include "hetsim/liftings.hpp"
#include "hetsim/relcore.hpp"

namespace hetsim::oracle {

/// Lifted relation on enumerated terms: pairs of indices into `left`/`right`.
struct BarrTable {
  std::vector<FunctorTerm> left;
  std::vector<FunctorTerm> right;
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  std::map<FunctorTerm, std::size_t> left_index;
  std::map<FunctorTerm, std::size_t> right_index;

  bool contains(const FunctorTerm& a, const FunctorTerm& b) const;
};

/// `{(Fπ₁(w), Fπ₂(w)) | w ∈ F(r)}` by enumerating F(r).
BarrTable brute_barr(const FunctorKind& kind, const Rel& r, const TermEnumOptions& opts = {});

enum class FactorMode {
  maximal_boxes,  // factor through the maximal boxes of r only
  all_boxes,      // the full couniversal factorization
};

/// (outer · inner) r evaluated by searching middle terms over a factorization
/// of r restricted to the supports of a and b. Throws Intractable when the
/// supports, the middle term count, or a distribution middle kind exceed the caps.
bool brute_compose(const Connector& outer, const Connector& inner, const Rel& r, const FunctorTerm& a,
                   const FunctorTerm& b, const EvalOptions& opts = {}, FactorMode mode = FactorMode::maximal_boxes);

/// Join over every factorization r = s·t through middle sets of size ≤ max_mid
/// (no support restriction). Sets are anonymous, so one set per size suffices.
bool brute_compose_join(const Connector& outer, const Connector& inner, const Rel& r, const FunctorTerm& a,
                        const FunctorTerm& b, std::size_t max_mid, const EvalOptions& opts = {});

/// Theory preorders of the logic over the disjoint union C ⊎ D (C first).
struct TheoryLayers {
  std::size_t left_size = 0;
  std::size_t right_size = 0;
  /// up[k][z]: bitmask of states satisfying every formula of depth ≤ k that z satisfies.
  std::vector<std::vector<std::uint64_t>> up;
  bool stabilized = false;
};

/// Semantic enumeration of formulas layer by layer, with the extension over
/// C ⊎ D as canonical key. Stops at stabilization or after `max_depth` layers
/// (default |C|·|D| + 1). Throws Intractable above 20 states in total.
TheoryLayers formula_theory_layers(const Coalgebra& c, const Coalgebra& d, const LambdaRel& lambda,
                                   std::optional<std::size_t> max_depth = std::nullopt);

/// Every extension (bitmask over C ⊎ D) of a formula of depth ≤ `depth`.
std::vector<std::uint64_t> formula_extensions(const TheoryLayers& layers, std::size_t depth);

/// {(x,y) | every formula true at x is true at y}.
Rel formula_enum_theory(const Coalgebra& c, const Coalgebra& d, const LambdaRel& lambda,
                        std::optional<std::size_t> depth = std::nullopt);

/// Greatest weak simulation: x -l-> x' answered by y =l=> y' (τ answered by τ*).
Rel weak_sim_oracle(const Coalgebra& c, const Coalgebra& d, const std::string& tau);

/// (x,y) related iff x and y share an infinite trace.
Rel shared_trace_oracle(const Coalgebra& c, const Coalgebra& d);

/// Coinductive ioco between a specification (SUSP) and an implementation
/// (SUSPIE); the relation is spec × impl.
Rel ioco_oracle(const Coalgebra& spec, const Coalgebra& impl);

}  // namespace hetsim::oracle
