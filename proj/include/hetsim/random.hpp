#pragma once

// Seeded generators for relations, terms, systems and connector expressions.
// Everything draws from std::mt19937_64 through `below`, so a seed fixes the
// output on every platform.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hetsim/connectors.hpp"
#include "hetsim/functors.hpp"
#include "hetsim/relcore.hpp"

namespace hetsim::gen {

using Rng = std::mt19937_64;

/// Uniform in [0, n); n must be positive.
std::size_t below(Rng& rng, std::size_t n);
/// True with probability num/den.
bool chance(Rng& rng, std::size_t num, std::size_t den);

/// Each pair present with probability percent/100.
Rel relation(const FinSet& x, const FinSet& y, Rng& rng, std::size_t percent = 50);
/// A random superset of `r`.
Rel grow(const Rel& r, Rng& rng, std::size_t percent = 30);
/// A random total map {0..from-1} → {0..to-1}; `to` must be positive unless from is 0.
std::vector<std::size_t> map(std::size_t from, std::size_t to, Rng& rng);
/// Random label relation over two alphabets.
LabelPairs label_relation(const FinSet& a, const FinSet& b, Rng& rng, std::size_t percent = 50);
/// Like label_relation, with every label of `b` hit at least once.
LabelPairs right_total_label_relation(const FinSet& a, const FinSet& b, Rng& rng);

/// One valid term of `kind` over `n` states with at most `branching`
/// successors where the kind allows a choice; DLTS weights in quarters.
FunctorTerm term(const FunctorKind& kind, std::size_t n, Rng& rng, std::size_t branching = 3);

/// A system with states `<prefix>0 ...`.
Coalgebra system(const FunctorKind& kind, std::size_t n, Rng& rng, std::size_t branching = 3,
                 const std::string& prefix = "s");

/// A random unary lifting applicable to `kind` (dia/box, pge on DLTS, down/up on maps).
Lifting lifting(const FunctorKind& kind, Rng& rng);

/// Random PLTS(labels) → PLTS(labels) expression built from catalog nodes
/// whose evaluation stays cheap (no generic composite search).
ConnectorExpr plts_expression(const FinSet& labels, Rng& rng, std::size_t depth = 3);

}  // namespace hetsim::gen
