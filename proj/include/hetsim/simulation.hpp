#pragma once

// Greatest-fixpoint L-similarity and L-bisimilarity between two systems,
// with a replayable log of removed pairs.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hetsim/connectors.hpp"
#include "hetsim/functors.hpp"
#include "hetsim/relcore.hpp"

namespace hetsim {

struct Removal {
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t round = 0;  // 1-based
  std::string clause;
  std::optional<KantWitness> witness;  // Kantorovich connectors only
  bool converse_side = false;          // bisimulation: the converse direction failed
};

struct SimResult {
  Rel relation;
  std::vector<Removal> removal_log;  // by round, then lexicographic pair order
  std::size_t rounds = 0;            // rounds run, including the final stable one

  /// Relation at the start of round `k` (round 1 starts from the full relation).
  Rel relation_before(std::size_t k) const;
};

/// First pair (x,y) ∈ r, in lexicographic order, with γ(x) not (L r) δ(y).
std::optional<std::pair<std::size_t, std::size_t>> is_simulation(const Rel& r, const Coalgebra& c, const Coalgebra& d,
                                                                  const Connector& l);

/// Jacobi iteration from C × D: each round removes every pair violating the
/// step against the relation at the start of the round.
SimResult greatest_simulation(const Coalgebra& c, const Coalgebra& d, const Connector& l);
SimResult greatest_simulation(const Coalgebra& c, const Coalgebra& d, const ConnectorExpr& e,
                              const EvalOptions& opts = {});

/// Greatest r such that r and its converse are L-simulations; L must connect
/// one kind to itself.
SimResult greatest_bisimulation(const Coalgebra& c, const Coalgebra& d, const Connector& l);
SimResult greatest_bisimulation(const Coalgebra& c, const Coalgebra& d, const ConnectorExpr& e,
                                const EvalOptions& opts = {});

struct LeqCounterexample {
  Rel r;
  FunctorTerm a;
  FunctorTerm b;
};

struct LeqReport {
  bool holds = true;
  bool exhaustive = true;
  std::uint64_t checked = 0;
  std::optional<LeqCounterexample> counterexample;
  std::string note;
};

/// Pointwise L ≤ K over carriers X, Y: every relation and every pair of terms
/// when that fits `budget` checks, otherwise `budget` seeded random samples.
LeqReport connector_leq_on(const Connector& l, const Connector& k, const FinSet& x, const FinSet& y,
                           std::uint64_t budget = std::uint64_t{1} << 22, std::uint64_t seed = 1);

}  // namespace hetsim
