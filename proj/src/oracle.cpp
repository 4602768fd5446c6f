#include "hetsim/oracle.hpp"

#include <algorithm>

#include "hetsim/errors.hpp"

namespace hetsim::oracle {

namespace {

void check_middle(const FunctorKind& mid, std::size_t n, const EvalOptions& opts) {
  if (mid.has_distributions())
    throw Intractable("composite through " + mid.str() + " has infinitely many middle terms");
  const auto count = count_terms(mid, n);
  if (count > opts.middle_cap)
    throw Intractable("composite through " + mid.str() + " over " + std::to_string(n) + " middle elements needs " +
                      std::to_string(count) + " middle terms (cap " + std::to_string(opts.middle_cap) + ")");
}

bool search_middle(const Connector& outer, const Connector& inner, const Rel& t, const Rel& s, const FunctorTerm& a,
                   const FunctorTerm& b, const EvalOptions& opts) {
  const FunctorKind& mid = inner.dst();
  check_middle(mid, t.dst().size(), opts);
  TermEnumOptions eo;
  eo.cap = opts.middle_cap;
  for (const auto& m : enumerate_terms(mid, t.dst().size(), eo))
    if (inner.lift(t, a, m) && outer.lift(s, m, b)) return true;
  return false;
}

// Labelled successor lists by label name, for the PLTS-only oracles.
struct Graph {
  std::vector<std::string> labels;
  // succ[label][state] = bitmask of successors
  std::vector<std::vector<std::uint64_t>> succ;
};

Graph graph_of(const Coalgebra& c) {
  if (c.kind().tag() != KindTag::plts) throw KindMismatch("expected a PLTS system, got " + c.kind().str());
  if (c.size() > 64) throw Intractable("oracle systems are limited to 64 states");
  Graph g;
  g.labels = c.kind().labels().elements();
  g.succ.assign(g.labels.size(), std::vector<std::uint64_t>(c.size(), 0));
  for (std::size_t x = 0; x < c.size(); ++x)
    for (const auto& a : c(x).as<PltsTerm>().arrows) g.succ[a.label][x] |= std::uint64_t{1} << a.state;
  return g;
}

const std::vector<std::uint64_t>* succ_named(const Graph& g, const std::string& l) {
  for (std::size_t i = 0; i < g.labels.size(); ++i)
    if (g.labels[i] == l) return &g.succ[i];
  return nullptr;
}

// Reflexive-transitive closure of a successor relation (Warshall).
std::vector<std::uint64_t> star(const std::vector<std::uint64_t>& step) {
  const std::size_t n = step.size();
  std::vector<std::uint64_t> out(step);
  for (std::size_t i = 0; i < n; ++i) out[i] |= std::uint64_t{1} << i;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (out[i] >> k & 1U) out[i] |= out[k];
  return out;
}

std::uint64_t post(const std::vector<std::uint64_t>& step, std::uint64_t from) {
  std::uint64_t out = 0;
  for (std::size_t i = 0; i < step.size(); ++i)
    if (from >> i & 1U) out |= step[i];
  return out;
}

std::uint64_t full_mask(std::size_t n) { return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }

Subset side_subset(std::uint64_t mask, std::size_t offset, std::size_t n) {
  return subset_from_mask(n, (mask >> offset) & full_mask(n));
}

// All up-sets of the preorder given by up[z] (z ≤ w iff w ∈ up[z]).
std::vector<std::uint64_t> upsets(const std::vector<std::uint64_t>& up) {
  const std::size_t n = up.size();
  std::vector<std::uint64_t> out;
  for (std::uint64_t m = 0; m <= full_mask(n); ++m) {
    bool ok = true;
    for (std::size_t z = 0; z < n && ok; ++z)
      if ((m >> z & 1U) && (up[z] & ~m)) ok = false;
    if (ok) out.push_back(m);
    if (m == full_mask(n)) break;
  }
  return out;
}

}  // namespace

bool BarrTable::contains(const FunctorTerm& a, const FunctorTerm& b) const {
  auto i = left_index.find(a);
  auto j = right_index.find(b);
  if (i == left_index.end() || j == right_index.end()) return false;
  return pairs.count({i->second, j->second}) > 0;
}

BarrTable brute_barr(const FunctorKind& kind, const Rel& r, const TermEnumOptions& opts) {
  BarrTable out;
  out.left = enumerate_terms(kind, r.src().size(), opts);
  out.right = enumerate_terms(kind, r.dst().size(), opts);
  for (std::size_t i = 0; i < out.left.size(); ++i) out.left_index.emplace(out.left[i], i);
  for (std::size_t i = 0; i < out.right.size(); ++i) out.right_index.emplace(out.right[i], i);

  const auto pairs = r.pairs();
  std::vector<std::size_t> p1, p2;
  for (auto [x, y] : pairs) {
    p1.push_back(x);
    p2.push_back(y);
  }
  for (const auto& w : enumerate_terms(kind, pairs.size(), opts)) {
    auto a = fmap(p1, w);
    auto b = fmap(p2, w);
    out.pairs.emplace(out.left_index.at(a), out.right_index.at(b));
  }
  return out;
}

bool brute_compose(const Connector& outer, const Connector& inner, const Rel& r, const FunctorTerm& a,
                   const FunctorTerm& b, const EvalOptions& opts, FactorMode mode) {
  if (!(inner.dst() == outer.src()))
    throw KindMismatch("composite of " + outer.src().str() + " after " + inner.dst().str());
  const auto sa = support(a);
  const auto sb = support(b);
  if (sa.size() > opts.comp_support_cap || sb.size() > opts.comp_support_cap)
    throw Intractable("composite evaluation over supports of size " + std::to_string(sa.size()) + " and " +
                      std::to_string(sb.size()) + " (cap " + std::to_string(opts.comp_support_cap) + ")");
  Rel rr = restrict(r, sa, sb);
  FunctorTerm ra = restrict_to(a, sa);
  FunctorTerm rb = restrict_to(b, sb);
  auto f = factor_through(rr, mode == FactorMode::maximal_boxes ? maximal_boxes(rr) : all_boxes(rr));
  return search_middle(outer, inner, f.t, f.s, ra, rb, opts);
}

bool brute_compose_join(const Connector& outer, const Connector& inner, const Rel& r, const FunctorTerm& a,
                        const FunctorTerm& b, std::size_t max_mid, const EvalOptions& opts) {
  const std::size_t nx = r.src().size();
  const std::size_t nz = r.dst().size();
  for (std::size_t k = 0; k <= max_mid; ++k) {
    if (nx * k >= 24 || k * nz >= 24) throw Intractable("factorization search too large");
    FinSet mid = FinSet::numbered("m", k);
    check_middle(inner.dst(), k, opts);
    TermEnumOptions eo;
    eo.cap = opts.middle_cap;
    const auto terms = enumerate_terms(inner.dst(), k, eo);
    for (std::uint64_t tm = 0; tm < (std::uint64_t{1} << (nx * k)); ++tm) {
      Rel t(r.src(), mid);
      for (std::size_t i = 0; i < nx * k; ++i)
        if (tm >> i & 1U) t.insert(i / k, i % k);
      for (std::uint64_t sm = 0; sm < (std::uint64_t{1} << (k * nz)); ++sm) {
        Rel s(mid, r.dst());
        for (std::size_t i = 0; i < k * nz; ++i)
          if (sm >> i & 1U) s.insert(i / nz, i % nz);
        if (!(compose(s, t) == r)) continue;
        for (const auto& m : terms)
          if (inner.lift(t, a, m) && outer.lift(s, m, b)) return true;
      }
    }
  }
  return false;
}

TheoryLayers formula_theory_layers(const Coalgebra& c, const Coalgebra& d, const LambdaRel& lambda,
                                   std::optional<std::size_t> max_depth) {
  if (!(c.kind() == lambda.left()) || !(d.kind() == lambda.right()))
    throw KindMismatch("lambda relation over " + lambda.left().str() + "/" + lambda.right().str() +
                       " used on systems over " + c.kind().str() + "/" + d.kind().str());
  const std::size_t nc = c.size();
  const std::size_t nd = d.size();
  const std::size_t n = nc + nd;
  if (n > 20) throw Intractable("formula enumeration over " + std::to_string(n) + " states (cap 20)");
  const std::size_t depth_cap = max_depth.value_or(nc * nd + 1);
  const std::uint64_t all = full_mask(n);

  std::vector<std::pair<BoundLifting, BoundLifting>> bound;
  for (const auto& [l, m] : lambda.pairs()) bound.emplace_back(BoundLifting(l, c.kind()), BoundLifting(m, d.kind()));

  // Support of each state as a mask over C ⊎ D, used to key the memo.
  std::vector<std::uint64_t> supp(n, 0);
  for (std::size_t x = 0; x < nc; ++x)
    for (auto s : support(c(x))) supp[x] |= std::uint64_t{1} << s;
  for (std::size_t y = 0; y < nd; ++y)
    for (auto s : support(d(y))) supp[nc + y] |= std::uint64_t{1} << (nc + s);

  std::vector<std::map<std::vector<std::uint64_t>, bool>> memo(bound.size() * n);
  auto holds = [&](std::size_t p, std::size_t z, const std::vector<std::uint64_t>& args) {
    std::vector<std::uint64_t> key(args.size());
    for (std::size_t i = 0; i < args.size(); ++i) key[i] = args[i] & supp[z];
    auto& slot = memo[p * n + z];
    auto it = slot.find(key);
    if (it != slot.end()) return it->second;
    bool v;
    std::vector<Subset> sets;
    if (z < nc) {
      for (auto k : key) sets.push_back(side_subset(k, 0, nc));
      v = bound[p].first.eval(sets, c(z), nc);
    } else {
      for (auto k : key) sets.push_back(side_subset(k, nc, nd));
      v = bound[p].second.eval(sets, d(z - nc), nd);
    }
    slot.emplace(std::move(key), v);
    return v;
  };

  TheoryLayers out;
  out.left_size = nc;
  out.right_size = nd;
  // Depth 0: only T and F, which separate nothing.
  out.up.emplace_back(n, all);
  while (out.up.size() <= depth_cap) {
    const auto lattice = upsets(out.up.back());
    std::vector<std::uint64_t> next(n, all);
    for (std::size_t p = 0; p < bound.size(); ++p) {
      const std::size_t arity = bound[p].first.arity();
      double tuples = 1;
      for (std::size_t i = 0; i < arity; ++i) tuples *= static_cast<double>(lattice.size());
      if (tuples > double(1 << 22))
        throw Intractable("formula enumeration needs " + std::to_string(static_cast<long long>(tuples)) +
                          " argument tuples");
      std::vector<std::size_t> idx(arity, 0);
      std::vector<std::uint64_t> args(arity);
      bool done = false;
      while (!done) {
        for (std::size_t i = 0; i < arity; ++i) args[i] = lattice[idx[i]];
        std::uint64_t ext = 0;
        for (std::size_t z = 0; z < n; ++z)
          if (holds(p, z, args)) ext |= std::uint64_t{1} << z;
        for (std::size_t z = 0; z < n; ++z)
          if (ext >> z & 1U) next[z] &= ext;
        done = true;
        for (std::size_t i = arity; i-- > 0;) {
          if (++idx[i] < lattice.size()) {
            done = false;
            break;
          }
          idx[i] = 0;
        }
      }
    }
    if (next == out.up.back()) {
      out.stabilized = true;
      break;
    }
    out.up.push_back(std::move(next));
  }
  return out;
}

std::vector<std::uint64_t> formula_extensions(const TheoryLayers& layers, std::size_t depth) {
  const std::size_t k = std::min(depth, layers.up.size() - 1);
  return upsets(layers.up[k]);
}

Rel formula_enum_theory(const Coalgebra& c, const Coalgebra& d, const LambdaRel& lambda,
                        std::optional<std::size_t> depth) {
  auto layers = formula_theory_layers(c, d, lambda, depth);
  const auto& up = layers.up.back();
  Rel out(c.states(), d.states());
  for (std::size_t x = 0; x < c.size(); ++x)
    for (std::size_t y = 0; y < d.size(); ++y)
      if (up[x] >> (c.size() + y) & 1U) out.insert(x, y);
  return out;
}

Rel weak_sim_oracle(const Coalgebra& c, const Coalgebra& d, const std::string& tau) {
  const Graph gc = graph_of(c);
  const Graph gd = graph_of(d);
  const std::vector<std::uint64_t> none(d.size(), 0);
  const auto* dtau = succ_named(gd, tau);
  const auto tstar = star(dtau ? *dtau : none);

  // weak[l][y]: states reachable by τ* l τ* (τ* alone for l = τ).
  std::vector<std::vector<std::uint64_t>> weak(gc.labels.size(), std::vector<std::uint64_t>(d.size(), 0));
  for (std::size_t l = 0; l < gc.labels.size(); ++l) {
    const auto* step = succ_named(gd, gc.labels[l]);
    for (std::size_t y = 0; y < d.size(); ++y) {
      if (gc.labels[l] == tau) {
        weak[l][y] = tstar[y];
      } else if (step) {
        weak[l][y] = post(tstar, post(*step, tstar[y]));
      }
    }
  }

  std::vector<std::uint64_t> rel(c.size(), full_mask(d.size()));
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t x = 0; x < c.size(); ++x)
      for (std::size_t y = 0; y < d.size(); ++y) {
        if (!(rel[x] >> y & 1U)) continue;
        bool ok = true;
        for (std::size_t l = 0; l < gc.labels.size() && ok; ++l)
          for (std::size_t x2 = 0; x2 < c.size() && ok; ++x2)
            if ((gc.succ[l][x] >> x2 & 1U) && !(weak[l][y] & rel[x2])) ok = false;
        if (!ok) {
          rel[x] &= ~(std::uint64_t{1} << y);
          changed = true;
        }
      }
  }
  Rel out(c.states(), d.states());
  for (std::size_t x = 0; x < c.size(); ++x)
    for (std::size_t y = 0; y < d.size(); ++y)
      if (rel[x] >> y & 1U) out.insert(x, y);
  return out;
}

Rel shared_trace_oracle(const Coalgebra& c, const Coalgebra& d) {
  const Graph gc = graph_of(c);
  const Graph gd = graph_of(d);
  const std::size_t nc = c.size();
  const std::size_t nd = d.size();
  // Product graph successors per node (x,y) as a list of node ids.
  std::vector<std::vector<std::size_t>> succ(nc * nd);
  for (std::size_t l = 0; l < gc.labels.size(); ++l) {
    const auto* dl = succ_named(gd, gc.labels[l]);
    if (!dl) continue;
    for (std::size_t x = 0; x < nc; ++x)
      for (std::size_t y = 0; y < nd; ++y)
        for (std::size_t x2 = 0; x2 < nc; ++x2)
          if (gc.succ[l][x] >> x2 & 1U)
            for (std::size_t y2 = 0; y2 < nd; ++y2)
              if ((*dl)[y] >> y2 & 1U) succ[x * nd + y].push_back(x2 * nd + y2);
  }
  // Nodes with an infinite path are exactly those surviving iterated dead-end removal.
  std::vector<bool> alive(nc * nd, true);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t v = 0; v < alive.size(); ++v) {
      if (!alive[v]) continue;
      bool any = std::any_of(succ[v].begin(), succ[v].end(), [&](std::size_t w) { return alive[w]; });
      if (!any) {
        alive[v] = false;
        changed = true;
      }
    }
  }
  Rel out(c.states(), d.states());
  for (std::size_t x = 0; x < nc; ++x)
    for (std::size_t y = 0; y < nd; ++y)
      if (alive[x * nd + y]) out.insert(x, y);
  return out;
}

Rel ioco_oracle(const Coalgebra& spec, const Coalgebra& impl) {
  if (spec.kind().tag() != KindTag::susp) throw KindMismatch("specification must be SUSP, got " + spec.kind().str());
  if (impl.kind().tag() != KindTag::suspie)
    throw KindMismatch("implementation must be SUSPIE, got " + impl.kind().str());
  const auto& sk = spec.kind();
  const auto& ik = impl.kind();
  const std::size_t ns = spec.size();
  const std::size_t ni = impl.size();
  std::vector<std::vector<bool>> rel(ns, std::vector<bool>(ni, true));

  auto step = [](const FinSet& alphabet, const MapTerm& m, const std::string& name) -> std::optional<std::size_t> {
    auto i = alphabet.find(name);
    if (!i) return std::nullopt;
    return m.image[*i];
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t s = 0; s < ns; ++s)
      for (std::size_t i = 0; i < ni; ++i) {
        if (!rel[s][i]) continue;
        const auto& st = spec(s).as<SuspTerm>();
        const auto& it = impl(i).as<SuspTerm>();
        bool ok = true;
        // Every input the specification allows must lead to related states.
        for (const auto& a : sk.inputs().elements()) {
          auto s2 = step(sk.inputs(), st.in, a);
          if (!s2) continue;
          auto i2 = step(ik.inputs(), it.in, a);
          if (!i2 || !rel[*s2][*i2]) ok = false;
        }
        // Every output of the implementation must be allowed and lead to related states.
        for (const auto& o : ik.outputs().elements()) {
          auto i2 = step(ik.outputs(), it.out, o);
          if (!i2) continue;
          auto s2 = step(sk.outputs(), st.out, o);
          if (!s2 || !rel[*s2][*i2]) ok = false;
        }
        if (!ok) {
          rel[s][i] = false;
          changed = true;
        }
      }
  }
  Rel out(spec.states(), impl.states());
  for (std::size_t s = 0; s < ns; ++s)
    for (std::size_t i = 0; i < ni; ++i)
      if (rel[s][i]) out.insert(s, i);
  return out;
}

}  // namespace hetsim::oracle
