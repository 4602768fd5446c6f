#include "hetsim/simulation.hpp"

#include <random>

#include "hetsim/errors.hpp"

namespace hetsim {

namespace {

void check_kinds(const Coalgebra& c, const Coalgebra& d, const Connector& l) {
  if (!(c.kind() == l.src()) || !(d.kind() == l.dst()))
    throw KindMismatch("connector " + l.expr().str() + " runs " + l.src().str() + " to " + l.dst().str() +
                       ", systems are " + c.kind().str() + " and " + d.kind().str());
}

Removal removal(std::size_t x, std::size_t y, std::size_t round, const LiftVerdict& v, bool conv) {
  Removal out;
  out.x = x;
  out.y = y;
  out.round = round;
  out.clause = v.clause;
  out.witness = v.witness;
  out.converse_side = conv;
  return out;
}

SimResult fixpoint(const Coalgebra& c, const Coalgebra& d, const Connector& l, bool bisim) {
  SimResult res;
  res.relation = Rel::full(c.states(), d.states());
  while (true) {
    ++res.rounds;
    const Rel start = res.relation;
    const Rel start_conv = bisim ? converse(start) : Rel();
    bool removed = false;
    for (auto [x, y] : start.pairs()) {
      if (!l.lift(start, c(x), d(y))) {
        res.removal_log.push_back(removal(x, y, res.rounds, l.explain(start, c(x), d(y)), false));
        res.relation.erase(x, y);
        removed = true;
      } else if (bisim && !l.lift(start_conv, d(y), c(x))) {
        res.removal_log.push_back(removal(x, y, res.rounds, l.explain(start_conv, d(y), c(x)), true));
        res.relation.erase(x, y);
        removed = true;
      }
    }
    if (!removed) return res;
  }
}

}  // namespace

Rel SimResult::relation_before(std::size_t k) const {
  Rel out = Rel::full(relation.src(), relation.dst());
  for (const auto& e : removal_log)
    if (e.round < k) out.erase(e.x, e.y);
  return out;
}

std::optional<std::pair<std::size_t, std::size_t>> is_simulation(const Rel& r, const Coalgebra& c, const Coalgebra& d,
                                                                  const Connector& l) {
  check_kinds(c, d, l);
  if (!(r.src() == c.states()) || !(r.dst() == d.states()))
    throw CarrierMismatch("relation does not live on the states of the two systems");
  for (auto [x, y] : r.pairs())
    if (!l.lift(r, c(x), d(y))) return std::make_pair(x, y);
  return std::nullopt;
}

SimResult greatest_simulation(const Coalgebra& c, const Coalgebra& d, const Connector& l) {
  check_kinds(c, d, l);
  return fixpoint(c, d, l, false);
}

SimResult greatest_simulation(const Coalgebra& c, const Coalgebra& d, const ConnectorExpr& e,
                              const EvalOptions& opts) {
  return greatest_simulation(c, d, bind(e, c.kind(), d.kind(), opts));
}

SimResult greatest_bisimulation(const Coalgebra& c, const Coalgebra& d, const Connector& l) {
  check_kinds(c, d, l);
  if (!(l.src() == l.dst()))
    throw KindMismatch("bisimulation needs a connector from one kind to itself, got " + l.src().str() + " to " +
                       l.dst().str());
  return fixpoint(c, d, l, true);
}

SimResult greatest_bisimulation(const Coalgebra& c, const Coalgebra& d, const ConnectorExpr& e,
                                const EvalOptions& opts) {
  return greatest_bisimulation(c, d, bind(e, c.kind(), d.kind(), opts));
}

LeqReport connector_leq_on(const Connector& l, const Connector& k, const FinSet& x, const FinSet& y,
                           std::uint64_t budget, std::uint64_t seed) {
  if (!(l.src() == k.src()) || !(l.dst() == k.dst()))
    throw KindMismatch("comparing connectors of different kinds");
  LeqReport rep;
  const std::size_t cells = x.size() * y.size();
  if (cells >= 63) throw Intractable("relation space too large to compare connectors");
  const std::uint64_t rels = std::uint64_t{1} << cells;
  const std::uint64_t na = count_terms(l.src(), x.size());
  const std::uint64_t nb = count_terms(l.dst(), y.size());

  auto make_rel = [&](std::uint64_t mask) {
    Rel r(x, y);
    for (std::size_t i = 0; i < cells; ++i)
      if (mask >> i & 1U) r.insert(i / y.size(), i % y.size());
    return r;
  };
  auto probe = [&](const Rel& r, const FunctorTerm& a, const FunctorTerm& b) {
    ++rep.checked;
    // K is usually the cheap side; only evaluate L when K fails.
    if (k.lift(r, a, b) || !l.lift(r, a, b)) return true;
    rep.holds = false;
    rep.counterexample = LeqCounterexample{r, a, b};
    return false;
  };

  const bool fits = na != 0 && nb != 0 && na <= budget && nb <= budget / na && rels <= budget / (na * nb);
  if (fits) {
    const auto as = enumerate_terms(l.src(), x.size());
    const auto bs = enumerate_terms(l.dst(), y.size());
    for (std::uint64_t m = 0; m < rels; ++m) {
      Rel r = make_rel(m);
      for (const auto& a : as)
        for (const auto& b : bs)
          if (!probe(r, a, b)) return rep;
    }
    return rep;
  }

  rep.exhaustive = false;
  rep.note = "sampled " + std::to_string(budget) + " of the relation/term triples";
  TermEnumOptions eo;
  eo.cap = budget;
  const auto as = enumerate_terms(l.src(), x.size(), eo);
  const auto bs = enumerate_terms(l.dst(), y.size(), eo);
  if (as.empty() || bs.empty()) return rep;
  std::mt19937_64 rng(seed);
  for (std::uint64_t i = 0; i < budget; ++i) {
    Rel r = make_rel(rels == 0 ? 0 : rng() % rels);
    const auto& a = as[rng() % as.size()];
    const auto& b = bs[rng() % bs.size()];
    if (!probe(r, a, b)) return rep;
  }
  return rep;
}

}  // namespace hetsim
