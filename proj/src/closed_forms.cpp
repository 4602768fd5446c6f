#include "hetsim/closed_forms.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "hetsim/errors.hpp"
#include "hetsim/rational.hpp"

namespace hetsim {

namespace {

bool rel(const Rel& r, std::size_t x, std::size_t y) { return r.contains(x, y); }

// Callers sweep many term pairs against one relation; keep its boxes per thread.
const std::vector<Box>& boxes_of(const Rel& r) {
  thread_local Rel last;
  thread_local std::vector<Box> boxes;
  thread_local bool valid = false;
  if (!valid || !(last == r)) {
    boxes = maximal_boxes(r);
    last = r;
    valid = true;
  }
  return boxes;
}

// Exact max-flow (Edmonds-Karp) on a dense capacity matrix; returns the flow value.
Rational max_flow(std::vector<std::vector<Rational>> cap, std::size_t source, std::size_t sink) {
  const std::size_t n = cap.size();
  Rational total;
  while (true) {
    std::vector<std::size_t> parent(n, n);
    parent[source] = source;
    std::deque<std::size_t> queue{source};
    while (!queue.empty() && parent[sink] == n) {
      auto u = queue.front();
      queue.pop_front();
      for (std::size_t v = 0; v < n; ++v)
        if (parent[v] == n && cap[u][v].is_positive()) {
          parent[v] = u;
          queue.push_back(v);
        }
    }
    if (parent[sink] == n) return total;
    Rational push = cap[parent[sink]][sink];
    for (auto v = sink; v != source; v = parent[v]) push = std::min(push, cap[parent[v]][v]);
    for (auto v = sink; v != source; v = parent[v]) {
      cap[parent[v]][v] -= push;
      cap[v][parent[v]] += push;
    }
    total += push;
  }
}

bool mapped_related(const Rel& r, const std::optional<std::size_t>& a, const std::optional<std::size_t>& b) {
  return a && b && rel(r, *a, *b);
}

}  // namespace

bool forth_lift(const Rel& r, const PltsTerm& s, const PltsTerm& t) {
  for (const auto& a : s.arrows) {
    bool found = false;
    for (const auto& b : t.arrows)
      if (a.label == b.label && rel(r, a.state, b.state)) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

bool egli_milner_lift(const Rel& r, const PltsTerm& s, const PltsTerm& t) {
  if (!forth_lift(r, s, t)) return false;
  for (const auto& b : t.arrows) {
    bool found = false;
    for (const auto& a : s.arrows)
      if (a.label == b.label && rel(r, a.state, b.state)) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

bool coupling_lift(const Rel& r, const DltsTerm& alpha, const DltsTerm& beta) {
  const std::size_t na = alpha.weights.size();
  const std::size_t nb = beta.weights.size();
  const std::size_t source = na + nb;
  const std::size_t sink = source + 1;
  std::vector<std::vector<Rational>> cap(na + nb + 2, std::vector<Rational>(na + nb + 2));
  Rational total_a, total_b;
  for (std::size_t i = 0; i < na; ++i) {
    cap[source][i] = alpha.weights[i].second;
    total_a += alpha.weights[i].second;
  }
  for (std::size_t j = 0; j < nb; ++j) {
    cap[na + j][sink] = beta.weights[j].second;
    total_b += beta.weights[j].second;
  }
  if (!(total_a == total_b)) return false;
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) {
      const auto& a = alpha.weights[i].first;
      const auto& b = beta.weights[j].first;
      // Capacity 1 bounds every flow anyway since total mass is 1.
      if (a.label == b.label && rel(r, a.state, b.state)) cap[i][na + j] = Rational(1);
    }
  return max_flow(std::move(cap), source, sink) == total_a;
}

bool det_id_lift(const Rel& r, const DetTerm& a, const DetTerm& b) {
  return a.arrow.label == b.arrow.label && rel(r, a.arrow.state, b.arrow.state);
}

bool map_id_lift(const Rel& r, const MapTerm& a, const MapTerm& b) {
  if (a.image.size() != b.image.size()) return false;
  for (std::size_t i = 0; i < a.image.size(); ++i) {
    if (a.image[i].has_value() != b.image[i].has_value()) return false;
    if (a.image[i] && !rel(r, *a.image[i], *b.image[i])) return false;
  }
  return true;
}

bool kr_lift(const Rel& label_rel, const Rel& r, const PltsTerm& s, const PltsTerm& t) {
  for (const auto& a : s.arrows) {
    const auto& targets = label_rel.row(a.label);
    for (auto m = targets.find_first(); m != Subset::npos; m = targets.find_next(m)) {
      bool found = false;
      for (const auto& b : t.arrows)
        if (b.label == m && rel(r, a.state, b.state)) {
          found = true;
          break;
        }
      if (!found) return false;
    }
  }
  return true;
}

bool lr_lift(const Rel& label_rel, const Rel& r, const PltsTerm& s, const PltsTerm& t) {
  if (!kr_lift(label_rel, r, s, t)) return false;
  for (const auto& b : t.arrows)
    for (std::size_t l = 0; l < label_rel.src().size(); ++l) {
      if (!label_rel.contains(l, b.label)) continue;
      bool found = false;
      for (const auto& a : s.arrows)
        if (a.label == l && rel(r, a.state, b.state)) {
          found = true;
          break;
        }
      if (!found) return false;
    }
  return true;
}

bool ioco_in_lift(const Rel& r, const MapTerm& d, const MapTerm& t) {
  for (std::size_t i = 0; i < d.image.size(); ++i)
    if (d.image[i] && !mapped_related(r, d.image[i], t.image[i])) return false;
  return true;
}

bool ioco_out_lift(const Rel& r, const MapTerm& d, const MapTerm& t) {
  for (std::size_t o = 0; o < t.image.size(); ++o)
    if (t.image[o] && !mapped_related(r, d.image[o], t.image[o])) return false;
  return true;
}

bool ioco_lift(const Rel& r, const SuspTerm& d, const SuspTerm& t) {
  return ioco_in_lift(r, d.in, t.in) && ioco_out_lift(r, d.out, t.out);
}

bool ioco_compat_lift(const Rel& r, const SuspTerm& d, const SuspTerm& d2) {
  for (std::size_t i = 0; i < d.in.image.size(); ++i)
    if (d.in.image[i] && d2.in.image[i] && !rel(r, *d.in.image[i], *d2.in.image[i])) return false;
  for (std::size_t o = 0; o < d.out.image.size(); ++o)
    if (mapped_related(r, d.out.image[o], d2.out.image[o])) return true;
  return false;
}

bool lqlr_comp_lift(const Rel& ql, const Rel& rl, const Rel& r, const PltsTerm& s, const PltsTerm& u) {
  const auto& boxes = boxes_of(r);
  const std::size_t nmid = rl.dst().size();
  // Label sets present in S and U with successors inside a given subset.
  auto s_has = [&](std::size_t l, const Subset& a) {
    return std::any_of(s.arrows.begin(), s.arrows.end(), [&](const Arrow& e) { return e.label == l && a[e.state]; });
  };
  auto u_has = [&](std::size_t p, const Subset& b) {
    return std::any_of(u.arrows.begin(), u.arrows.end(), [&](const Arrow& e) { return e.label == p && b[e.state]; });
  };
  // (i): every l' with (l',m)∈R has an l'-successor of S in A.
  auto cond_r = [&](std::size_t m, const Subset& a) {
    for (std::size_t l = 0; l < rl.src().size(); ++l)
      if (rl.contains(l, m) && !s_has(l, a)) return false;
    return true;
  };
  // (ii): every p with (m,p)∈Q has a p-successor of U in B.
  auto cond_q = [&](std::size_t m, const Subset& b) {
    for (std::size_t p = 0; p < ql.dst().size(); ++p)
      if (ql.contains(m, p) && !u_has(p, b)) return false;
    return true;
  };
  for (const auto& a : s.arrows)
    for (std::size_t m = 0; m < nmid; ++m) {
      if (!rl.contains(a.label, m)) continue;
      bool ok = std::any_of(boxes.begin(), boxes.end(), [&](const Box& bx) {
        return bx.left[a.state] && cond_r(m, bx.left) && cond_q(m, bx.right);
      });
      if (!ok) return false;
    }
  for (const auto& c : u.arrows)
    for (std::size_t m = 0; m < nmid; ++m) {
      if (!ql.contains(m, c.label)) continue;
      bool ok = std::any_of(boxes.begin(), boxes.end(), [&](const Box& bx) {
        return bx.right[c.state] && cond_q(m, bx.right) && cond_r(m, bx.left);
      });
      if (!ok) return false;
    }
  return true;
}

bool shared_step_lift(const Rel& r, const PltsTerm& s, const PltsTerm& t) {
  for (const auto& a : s.arrows)
    for (const auto& b : t.arrows)
      if (a.label == b.label && rel(r, a.state, b.state)) return true;
  return false;
}

Coalgebra weak_saturate(const Coalgebra& c, const std::string& tau) {
  if (c.kind().tag() != KindTag::plts) throw KindMismatch("weak saturation needs a PLTS system, got " + c.kind().str());
  const auto& labels = c.kind().labels();
  const auto tau_index = labels.find(tau);
  if (!tau_index) throw KindMismatch("'" + tau + "' is not a label of " + c.kind().str());
  if (labels.contains(kEpsilonLabel))
    throw ValidationError(std::string("label '") + kEpsilonLabel + "' is reserved for saturation");

  const std::size_t n = c.size();
  // closure[x] = states reachable by τ*.
  std::vector<Subset> closure(n, Subset(n));
  for (std::size_t x = 0; x < n; ++x) {
    std::deque<std::size_t> queue{x};
    closure[x].set(x);
    while (!queue.empty()) {
      auto p = queue.front();
      queue.pop_front();
      for (const auto& a : c(p).as<PltsTerm>().arrows)
        if (a.label == *tau_index && !closure[x][a.state]) {
          closure[x].set(a.state);
          queue.push_back(a.state);
        }
    }
  }

  std::vector<std::string> names = labels.elements();
  names.push_back(kEpsilonLabel);
  auto kind = FunctorKind::plts(FinSet(names));
  const auto& new_labels = kind.labels();
  std::vector<std::size_t> relabel(labels.size());
  for (std::size_t l = 0; l < labels.size(); ++l) relabel[l] = new_labels.index_of(labels[l]);
  const std::size_t eps = new_labels.index_of(kEpsilonLabel);

  std::vector<FunctorTerm> trans;
  trans.reserve(n);
  for (std::size_t x = 0; x < n; ++x) {
    std::set<Arrow> arrows;
    for (auto p = closure[x].find_first(); p != Subset::npos; p = closure[x].find_next(p)) {
      arrows.insert({eps, p});
      for (const auto& a : c(p).as<PltsTerm>().arrows)
        for (auto q = closure[a.state].find_first(); q != Subset::npos; q = closure[a.state].find_next(q))
          arrows.insert({relabel[a.label], q});
    }
    trans.emplace_back(PltsTerm{{arrows.begin(), arrows.end()}});
  }
  return Coalgebra(kind, c.states(), std::move(trans));
}

}  // namespace hetsim
