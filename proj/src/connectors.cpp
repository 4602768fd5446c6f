#include "hetsim/connectors.hpp"

#include <algorithm>
#include <set>

#include "hetsim/closed_forms.hpp"
#include "hetsim/errors.hpp"
#include "hetsim/oracle.hpp"
#include "hetsim/sexpr.hpp"

namespace hetsim {

namespace {

FinSet names_of(const std::vector<std::string>& v) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& s : v)
    if (seen.insert(s).second) out.push_back(s);
  return FinSet(std::move(out));
}

FinSet pair_dom(const LabelPairs& r) {
  std::vector<std::string> v;
  for (const auto& p : r) v.push_back(p.first);
  return names_of(v);
}

FinSet pair_range(const LabelPairs& r) {
  std::vector<std::string> v;
  for (const auto& p : r) v.push_back(p.second);
  return names_of(v);
}

bool subset_names(const FinSet& a, const FinSet& b) {
  return std::all_of(a.elements().begin(), a.elements().end(), [&](const std::string& n) { return b.contains(n); });
}

bool is_map_kind(const FunctorKind& k) {
  return k.tag() == KindTag::pmap || k.tag() == KindTag::tmap || k.tag() == KindTag::nemap;
}

std::optional<FunctorKind> merge(std::optional<FunctorKind> a, std::optional<FunctorKind> b) {
  if (!a) return b;
  if (!b) return a;
  if (a->tag() == KindTag::plts && b->tag() == KindTag::plts)
    return FunctorKind::plts(union_of(a->labels(), b->labels()));
  return a;
}

// Kind suggested by the liftings on one side of a Kantorovich node.
std::optional<FunctorKind> kant_side_kind(const std::vector<LambdaRel::Pair>& pairs, bool left) {
  std::vector<std::string> labels;
  bool dist = false, maps = false, any = false, big = false;
  std::vector<const Lifting*> stack;
  for (const auto& p : pairs) stack.push_back(left ? &p.first : &p.second);
  std::vector<const PosExpr*> skels;
  while (!stack.empty()) {
    const Lifting* l = stack.back();
    stack.pop_back();
    any = true;
    switch (l->tag()) {
      case Lifting::Tag::pge:
      case Lifting::Tag::pdual:
        dist = true;
        labels.push_back(l->label());
        break;
      case Lifting::Tag::down:
      case Lifting::Tag::up:
        maps = true;
        break;
      case Lifting::Tag::dia:
      case Lifting::Tag::box:
        labels.push_back(l->label());
        break;
      case Lifting::Tag::bigbox:
      case Lifting::Tag::bigdia:
        big = true;
        break;
      case Lifting::Tag::pos:
        skels.push_back(&l->skeleton());
        while (!skels.empty()) {
          const PosExpr* e = skels.back();
          skels.pop_back();
          if (e->op == PosExpr::Op::apply) stack.push_back(e->atom.get());
          for (const auto& k : e->kids) skels.push_back(&k);
        }
        break;
      default:
        break;
    }
  }
  if (!any || maps) return std::nullopt;
  // bigbox/bigdia alone fit any alphabet
  if (big && !dist && labels.empty()) return std::nullopt;
  return dist ? FunctorKind::dlts(names_of(labels)) : FunctorKind::plts(names_of(labels));
}

SExpr rel_sexpr(const LabelPairs& r) {
  std::vector<SExpr> items{SExpr::make_atom("rel")};
  for (const auto& [a, b] : r) items.push_back(SExpr::make_list({SExpr::make_atom(a), SExpr::make_atom(b)}));
  return SExpr::make_list(std::move(items));
}

SExpr nat_sexpr(const NatTrans& n) {
  switch (n.tag()) {
    case NatTrans::Tag::relabel_conv:
      return SExpr::make_list({SExpr::make_atom("relabel-conv"), rel_sexpr(n.pairs())});
    case NatTrans::Tag::relabel:
      return SExpr::make_list({SExpr::make_atom("relabel"), rel_sexpr(n.pairs())});
    case NatTrans::Tag::incl:
      return SExpr::make_list({SExpr::make_atom("incl")});
    case NatTrans::Tag::proj1:
      return SExpr::make_list({SExpr::make_atom("proj1")});
    case NatTrans::Tag::proj2:
      return SExpr::make_list({SExpr::make_atom("proj2")});
  }
  return SExpr::make_atom("?");
}

SExpr expr_sexpr(const ConnectorExpr& e) {
  using T = ConnectorExpr::Tag;
  auto head = [](const char* h, std::vector<SExpr> rest = {}) {
    std::vector<SExpr> items{SExpr::make_atom(h)};
    for (auto& r : rest) items.push_back(std::move(r));
    return SExpr::make_list(std::move(items));
  };
  switch (e.tag()) {
    case T::kant: {
      std::vector<SExpr> pairs;
      for (const auto& [l, m] : e.lambda_pairs())
        pairs.push_back(SExpr::make_list({lifting_to_sexpr(l), lifting_to_sexpr(m)}));
      return head("kant", std::move(pairs));
    }
    case T::id:
      return head("id");
    case T::comp:
      return head("comp", {expr_sexpr(e.child(0)), expr_sexpr(e.child(1))});
    case T::conv:
      return head("conv", {expr_sexpr(e.child(0))});
    case T::meet:
      return head("meet", {expr_sexpr(e.child(0)), expr_sexpr(e.child(1))});
    case T::prod:
      return head("prod", {expr_sexpr(e.child(0)), expr_sexpr(e.child(1))});
    case T::pull_left:
      return head("pull-left", {expr_sexpr(e.child(0)), nat_sexpr(e.nat())});
    case T::pull_right:
      return head("pull-right", {nat_sexpr(e.nat()), expr_sexpr(e.child(0))});
    case T::kr:
      return head("kr", {rel_sexpr(e.label_pairs())});
    case T::lr:
      return head("lr", {rel_sexpr(e.label_pairs())});
    case T::lf:
      return head("lf");
    case T::ioco_in:
      return head("ioco-in");
    case T::ioco_out:
      return head("ioco-out");
    case T::weak:
      return head("weak", {SExpr::make_atom(e.tau())});
  }
  return SExpr::make_atom("?");
}

LabelPairs normalized(LabelPairs r) {
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

// Label relation between two alphabets; names must exist on both sides.
Rel label_relation(const LabelPairs& pairs, const FinSet& a, const FinSet& b, const std::string& where) {
  Rel out(a, b);
  for (const auto& [l, m] : pairs) {
    auto i = a.find(l);
    auto j = b.find(m);
    if (!i) throw KindMismatch(where + ": label '" + l + "' not in {" + a.format(a.all()).substr(1));
    if (!j) throw KindMismatch(where + ": label '" + m + "' not in {" + b.format(b.all()).substr(1));
    out.insert(*i, *j);
  }
  return out;
}

// Per source label index, the target label indices.
std::vector<std::vector<std::size_t>> relabel_table(const NatTrans& n, const FunctorKind& src, const FunctorKind& dst) {
  std::vector<std::vector<std::size_t>> table(src.labels().size());
  switch (n.tag()) {
    case NatTrans::Tag::relabel_conv: {
      // S ↦ {(m,x) | (l,m) ∈ R, (l,x) ∈ S}
      Rel r = label_relation(n.pairs(), src.labels(), dst.labels(), "relabel-conv");
      for (auto [l, m] : r.pairs()) table[l].push_back(m);
      break;
    }
    case NatTrans::Tag::relabel: {
      // T ↦ {(l,y) | (l,m) ∈ R, (m,y) ∈ T}
      Rel r = label_relation(n.pairs(), dst.labels(), src.labels(), "relabel");
      for (auto [l, m] : r.pairs()) table[m].push_back(l);
      break;
    }
    case NatTrans::Tag::incl:
      for (std::size_t l = 0; l < src.labels().size(); ++l) table[l].push_back(dst.labels().index_of(src.labels()[l]));
      break;
    default:
      break;
  }
  return table;
}

FunctorTerm apply_nat(const NatTrans& n, const std::vector<std::vector<std::size_t>>& table, const FunctorTerm& t) {
  switch (n.tag()) {
    case NatTrans::Tag::relabel_conv:
    case NatTrans::Tag::relabel: {
      PltsTerm out;
      for (const auto& a : t.as<PltsTerm>().arrows)
        for (auto m : table[a.label]) out.arrows.push_back({m, a.state});
      return out;
    }
    case NatTrans::Tag::incl: {
      const auto& a = t.as<DetTerm>().arrow;
      return PltsTerm{{{table[a.label][0], a.state}}};
    }
    case NatTrans::Tag::proj1:
      return split(t).first;
    case NatTrans::Tag::proj2:
      return split(t).second;
  }
  return t;
}

std::vector<std::uint64_t> masks_by_weight(std::size_t bits) {
  // Ascending popcount, then ascending value.
  std::vector<std::uint64_t> out;
  out.reserve(std::size_t{1} << bits);
  for (std::size_t c = 0; c <= bits; ++c) {
    if (c == 0) {
      out.push_back(0);
      continue;
    }
    std::uint64_t m = (std::uint64_t{1} << c) - 1;
    const std::uint64_t limit = std::uint64_t{1} << bits;
    while (m < limit) {
      out.push_back(m);
      std::uint64_t low = m & (~m + 1);
      std::uint64_t ripple = m + low;
      m = (((ripple ^ m) >> 2) / low) | ripple;
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// NatTrans

NatTrans::NatTrans(Tag tag, LabelPairs r) : tag_(tag), pairs_(normalized(std::move(r))) {}

std::optional<FunctorKind> NatTrans::natural_dst(const FunctorKind& src) const {
  switch (tag_) {
    case Tag::relabel_conv:
      if (src.tag() == KindTag::plts) return FunctorKind::plts(pair_range(pairs_));
      return std::nullopt;
    case Tag::relabel:
      if (src.tag() == KindTag::plts) return FunctorKind::plts(pair_dom(pairs_));
      return std::nullopt;
    case Tag::incl:
      if (src.tag() == KindTag::det) return FunctorKind::plts(src.labels());
      return std::nullopt;
    case Tag::proj1:
    case Tag::proj2:
      if (auto c = src.components()) return tag_ == Tag::proj1 ? c->first : c->second;
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<FunctorKind> NatTrans::natural_src(const FunctorKind& dst) const {
  switch (tag_) {
    case Tag::relabel_conv:
      if (dst.tag() == KindTag::plts) return FunctorKind::plts(pair_dom(pairs_));
      return std::nullopt;
    case Tag::relabel:
      if (dst.tag() == KindTag::plts) return FunctorKind::plts(pair_range(pairs_));
      return std::nullopt;
    case Tag::incl:
      if (dst.tag() == KindTag::plts && !dst.labels().empty()) return FunctorKind::det(dst.labels());
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

void NatTrans::check(const FunctorKind& src, const FunctorKind& dst) const {
  auto fail = [&]() { throw KindMismatch(str() + " does not map " + src.str() + " to " + dst.str()); };
  switch (tag_) {
    case Tag::relabel_conv:
    case Tag::relabel:
      if (src.tag() != KindTag::plts || dst.tag() != KindTag::plts) fail();
      relabel_table(*this, src, dst);
      return;
    case Tag::incl:
      if (src.tag() != KindTag::det || dst.tag() != KindTag::plts || !subset_names(src.labels(), dst.labels())) fail();
      return;
    case Tag::proj1:
    case Tag::proj2: {
      auto c = src.components();
      if (!c || !((tag_ == Tag::proj1 ? c->first : c->second) == dst)) fail();
      return;
    }
  }
}

FunctorTerm NatTrans::apply(const FunctorKind& src, const FunctorKind& dst, const FunctorTerm& t) const {
  check(src, dst);
  return apply_nat(*this, relabel_table(*this, src, dst), t);
}

std::string NatTrans::str() const { return nat_sexpr(*this).str(); }

// ---------------------------------------------------------------------------
// ConnectorExpr

ConnectorExpr ConnectorExpr::kant(std::vector<LambdaRel::Pair> pairs) {
  return ConnectorExpr(std::make_shared<const Node>(Node{Tag::kant, {}, std::nullopt, {}, std::move(pairs), {}}));
}
ConnectorExpr ConnectorExpr::id() { return ConnectorExpr(std::make_shared<const Node>(Node{Tag::id, {}, {}, {}, {}, {}})); }
ConnectorExpr ConnectorExpr::comp(ConnectorExpr outer, ConnectorExpr inner) {
  return ConnectorExpr(
      std::make_shared<const Node>(Node{Tag::comp, {std::move(outer), std::move(inner)}, {}, {}, {}, {}}));
}
ConnectorExpr ConnectorExpr::conv(ConnectorExpr c) {
  return ConnectorExpr(std::make_shared<const Node>(Node{Tag::conv, {std::move(c)}, {}, {}, {}, {}}));
}
ConnectorExpr ConnectorExpr::meet(ConnectorExpr a, ConnectorExpr b) {
  return ConnectorExpr(std::make_shared<const Node>(Node{Tag::meet, {std::move(a), std::move(b)}, {}, {}, {}, {}}));
}
ConnectorExpr ConnectorExpr::prod(ConnectorExpr a, ConnectorExpr b) {
  return ConnectorExpr(std::make_shared<const Node>(Node{Tag::prod, {std::move(a), std::move(b)}, {}, {}, {}, {}}));
}
ConnectorExpr ConnectorExpr::pull_left(ConnectorExpr c, NatTrans alpha) {
  return ConnectorExpr(
      std::make_shared<const Node>(Node{Tag::pull_left, {std::move(c)}, std::move(alpha), {}, {}, {}}));
}
ConnectorExpr ConnectorExpr::pull_right(NatTrans beta, ConnectorExpr c) {
  return ConnectorExpr(
      std::make_shared<const Node>(Node{Tag::pull_right, {std::move(c)}, std::move(beta), {}, {}, {}}));
}
ConnectorExpr ConnectorExpr::kr(LabelPairs r) {
  return ConnectorExpr(std::make_shared<const Node>(Node{Tag::kr, {}, {}, normalized(std::move(r)), {}, {}}));
}
ConnectorExpr ConnectorExpr::lr(LabelPairs r) {
  return ConnectorExpr(std::make_shared<const Node>(Node{Tag::lr, {}, {}, normalized(std::move(r)), {}, {}}));
}
ConnectorExpr ConnectorExpr::lf() { return ConnectorExpr(std::make_shared<const Node>(Node{Tag::lf, {}, {}, {}, {}, {}})); }
ConnectorExpr ConnectorExpr::lt() { return pull_left(lf(), NatTrans::incl()); }
ConnectorExpr ConnectorExpr::ioco_in() {
  return ConnectorExpr(std::make_shared<const Node>(Node{Tag::ioco_in, {}, {}, {}, {}, {}}));
}
ConnectorExpr ConnectorExpr::ioco_out() {
  return ConnectorExpr(std::make_shared<const Node>(Node{Tag::ioco_out, {}, {}, {}, {}, {}}));
}
ConnectorExpr ConnectorExpr::ioco() { return prod(ioco_in(), ioco_out()); }
ConnectorExpr ConnectorExpr::weak(std::string tau) {
  return ConnectorExpr(std::make_shared<const Node>(Node{Tag::weak, {}, {}, {}, {}, std::move(tau)}));
}

std::string ConnectorExpr::str() const { return expr_sexpr(*this).str(); }

ConnectorExpr converse(const ConnectorExpr& c) {
  if (c.tag() == ConnectorExpr::Tag::conv) return c.child(0);
  return ConnectorExpr::conv(c);
}

LabelPairs weak_label_relation(const FinSet& labels, const std::string& tau) {
  LabelPairs out;
  for (const auto& l : labels.elements()) {
    if (l == kEpsilonLabel) continue;
    out.emplace_back(l, l == tau ? std::string(kEpsilonLabel) : l);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Kind inference

std::optional<FunctorKind> natural_dst(const ConnectorExpr& e, const FunctorKind& src) {
  using T = ConnectorExpr::Tag;
  switch (e.tag()) {
    case T::kant:
      return kant_side_kind(e.lambda_pairs(), false);
    case T::id:
    case T::lf:
    case T::ioco_out:
      return src;
    case T::comp:
      if (auto m = natural_dst(e.child(1), src)) return natural_dst(e.child(0), *m);
      return std::nullopt;
    case T::conv:
      return natural_src(e.child(0), src);
    case T::meet:
      return merge(natural_dst(e.child(0), src), natural_dst(e.child(1), src));
    case T::prod: {
      auto c = src.components();
      if (!c) return std::nullopt;
      auto a = natural_dst(e.child(0), c->first);
      auto b = natural_dst(e.child(1), c->second);
      if (!a || !b) return std::nullopt;
      return FunctorKind::pair(*a, *b);
    }
    case T::pull_left:
      if (auto m = e.nat().natural_dst(src)) return natural_dst(e.child(0), *m);
      return std::nullopt;
    case T::pull_right:
      if (auto m = natural_dst(e.child(0), src)) return e.nat().natural_src(*m);
      return std::nullopt;
    case T::kr:
    case T::lr:
      if (src.tag() == KindTag::plts) return FunctorKind::plts(pair_range(e.label_pairs()));
      return std::nullopt;
    case T::ioco_in:
      if (is_map_kind(src)) return FunctorKind::tmap(src.labels());
      return std::nullopt;
    case T::weak:
      if (src.tag() == KindTag::plts) return FunctorKind::plts(union_of(src.labels(), FinSet{kEpsilonLabel}));
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<FunctorKind> natural_src(const ConnectorExpr& e, const FunctorKind& dst) {
  using T = ConnectorExpr::Tag;
  switch (e.tag()) {
    case T::kant:
      return kant_side_kind(e.lambda_pairs(), true);
    case T::id:
    case T::lf:
    case T::ioco_out:
      return dst;
    case T::comp:
      if (auto m = natural_src(e.child(0), dst)) return natural_src(e.child(1), *m);
      return std::nullopt;
    case T::conv:
      return natural_dst(e.child(0), dst);
    case T::meet:
      return merge(natural_src(e.child(0), dst), natural_src(e.child(1), dst));
    case T::prod: {
      auto c = dst.components();
      if (!c) return std::nullopt;
      auto a = natural_src(e.child(0), c->first);
      auto b = natural_src(e.child(1), c->second);
      if (!a || !b) return std::nullopt;
      return FunctorKind::pair(*a, *b);
    }
    case T::pull_left:
      if (auto m = natural_src(e.child(0), dst)) return e.nat().natural_src(*m);
      return std::nullopt;
    case T::pull_right:
      if (auto m = e.nat().natural_dst(dst)) return natural_src(e.child(0), *m);
      return std::nullopt;
    case T::kr:
    case T::lr:
      if (dst.tag() == KindTag::plts) return FunctorKind::plts(pair_dom(e.label_pairs()));
      return std::nullopt;
    case T::ioco_in:
      if (is_map_kind(dst)) return FunctorKind::pmap(dst.labels());
      return std::nullopt;
    case T::weak:
      if (dst.tag() == KindTag::plts) {
        std::vector<std::string> names;
        for (const auto& l : dst.labels().elements())
          if (l != kEpsilonLabel) names.push_back(l);
        return FunctorKind::plts(FinSet(std::move(names)));
      }
      return std::nullopt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Bound connectors

enum class Closed { none, lqlr, ioco_compat, shared_step, outer_only, inner_only };

struct Connector::Node {
  ConnectorExpr expr;
  FunctorKind src;
  FunctorKind dst;
  EvalOptions opts;
  std::vector<Connector> kids;
  std::optional<LambdaRel> lambda;
  std::vector<std::pair<BoundLifting, BoundLifting>> bound;
  Rel label_rel;
  Rel label_rel2;
  std::vector<std::vector<std::size_t>> nat_table;
  FunctorKind nat_other;  // the kind on the far side of a pulled-back natural transformation
  Closed closed = Closed::none;
  std::string text;  // expr.str(), reported as the failed clause

  Node(ConnectorExpr e, FunctorKind s, FunctorKind d, EvalOptions o)
      : expr(std::move(e)), src(std::move(s)), dst(std::move(d)), opts(o), nat_other(src), text(expr.str()) {}
};

namespace {

using CNode = Connector::Node;

bool id_lift(const FunctorKind& kind, const Rel& r, const FunctorTerm& a, const FunctorTerm& b) {
  switch (kind.tag()) {
    case KindTag::plts:
      return egli_milner_lift(r, a.as<PltsTerm>(), b.as<PltsTerm>());
    case KindTag::dlts:
      return coupling_lift(r, a.as<DltsTerm>(), b.as<DltsTerm>());
    case KindTag::det:
      return det_id_lift(r, a.as<DetTerm>(), b.as<DetTerm>());
    case KindTag::pmap:
    case KindTag::tmap:
    case KindTag::nemap:
      return map_id_lift(r, a.as<MapTerm>(), b.as<MapTerm>());
    case KindTag::susp:
    case KindTag::suspie: {
      const auto& x = a.as<SuspTerm>();
      const auto& y = b.as<SuspTerm>();
      return map_id_lift(r, x.in, y.in) && map_id_lift(r, x.out, y.out);
    }
    case KindTag::pair: {
      auto [a1, a2] = split(a);
      auto [b1, b2] = split(b);
      return id_lift(kind.first(), r, a1, b1) && id_lift(kind.second(), r, a2, b2);
    }
  }
  return false;
}

LiftVerdict kant_explain(const CNode& n, const Rel& r, const FunctorTerm& a, const FunctorTerm& b, bool minimal) {
  const auto supp = support(a);
  const std::size_t k = supp.size();
  const std::size_t nx = r.src().size();
  const std::size_t ny = r.dst().size();
  for (std::size_t p = 0; p < n.bound.size(); ++p) {
    const auto& [lam, mu] = n.bound[p];
    const std::size_t arity = lam.arity();
    const std::size_t bits = arity * k;
    if (bits > n.opts.support_cap)
      throw Intractable("Kantorovich clause " + lam.lifting().str() + " needs " + std::to_string(bits) +
                        " argument bits (cap " + std::to_string(n.opts.support_cap) + ")");
    std::vector<Subset> args(arity, Subset(nx));
    std::vector<Subset> images(arity, Subset(ny));
    auto check = [&](std::uint64_t mask) -> bool {
      for (std::size_t i = 0; i < arity; ++i) {
        args[i].reset();
        images[i].reset();
        for (std::size_t j = 0; j < k; ++j)
          if (mask >> (i * k + j) & 1U) {
            args[i].set(supp[j]);
            images[i] |= r.row(supp[j]);
          }
      }
      return !lam.eval(args, a, nx) || mu.eval(images, b, ny);
    };
    auto fail = [&]() {
      LiftVerdict v;
      v.holds = false;
      std::string shown;
      for (std::size_t i = 0; i < arity; ++i) shown += (i ? "," : "") + r.src().format(args[i]);
      v.clause = "(" + lam.lifting().str() + "," + mu.lifting().str() + ") with A=(" + shown + ")";
      v.witness = KantWitness{p, args};
      return v;
    };
    if (minimal) {
      for (auto mask : masks_by_weight(bits))
        if (!check(mask)) return fail();
    } else {
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask)
        if (!check(mask)) return fail();
    }
  }
  return {};
}

LiftVerdict simple(bool holds, const std::string& clause, bool explain) {
  LiftVerdict v;
  v.holds = holds;
  if (!holds && explain) v.clause = clause;
  return v;
}

LiftVerdict evaluate(const CNode& n, const Rel& r, const FunctorTerm& a, const FunctorTerm& b, bool explain) {
  using T = ConnectorExpr::Tag;
  auto sub = [&](std::size_t i, const Rel& rr, const FunctorTerm& x, const FunctorTerm& y) {
    return explain ? n.kids[i].explain(rr, x, y) : LiftVerdict{n.kids[i].lift(rr, x, y), {}, std::nullopt};
  };
  switch (n.expr.tag()) {
    case T::kant:
      return kant_explain(n, r, a, b, explain);
    case T::id:
      return simple(id_lift(n.src, r, a, b), n.text, explain);
    case T::comp: {
      const auto& outer = n.kids[0];
      const auto& inner = n.kids[1];
      switch (n.closed) {
        case Closed::lqlr:
          return simple(lqlr_comp_lift(n.label_rel, n.label_rel2, r, a.as<PltsTerm>(), b.as<PltsTerm>()), n.text, explain);
        case Closed::ioco_compat:
          return simple(ioco_compat_lift(r, a.as<SuspTerm>(), b.as<SuspTerm>()), n.text, explain);
        case Closed::shared_step:
          return simple(shared_step_lift(r, a.as<PltsTerm>(), b.as<PltsTerm>()), n.text, explain);
        case Closed::outer_only:
          return sub(0, r, a, b);
        case Closed::inner_only:
          return sub(1, r, a, b);
        case Closed::none:
          break;
      }
      return simple(oracle::brute_compose(outer, inner, r, a, b, n.opts), n.text, explain);
    }
    case T::conv: {
      auto v = sub(0, converse(r), b, a);
      if (!v.holds && explain) v.clause = "converse of " + v.clause;
      return v;
    }
    case T::meet: {
      auto v = sub(0, r, a, b);
      if (!v.holds) return v;
      return sub(1, r, a, b);
    }
    case T::prod: {
      auto [a1, a2] = split(a);
      auto [b1, b2] = split(b);
      auto v = sub(0, r, a1, b1);
      if (!v.holds) return v;
      return sub(1, r, a2, b2);
    }
    case T::pull_left:
      return sub(0, r, apply_nat(n.expr.nat(), n.nat_table, a), b);
    case T::pull_right:
      return sub(0, r, a, apply_nat(n.expr.nat(), n.nat_table, b));
    case T::kr:
    case T::weak:
      return simple(kr_lift(n.label_rel, r, a.as<PltsTerm>(), b.as<PltsTerm>()), n.text, explain);
    case T::lr:
      return simple(lr_lift(n.label_rel, r, a.as<PltsTerm>(), b.as<PltsTerm>()), n.text, explain);
    case T::lf:
      return simple(forth_lift(r, a.as<PltsTerm>(), b.as<PltsTerm>()), n.text, explain);
    case T::ioco_in: {
      const MapTerm& x = a.get_if<SuspTerm>() ? a.as<SuspTerm>().in : a.as<MapTerm>();
      const MapTerm& y = b.get_if<SuspTerm>() ? b.as<SuspTerm>().in : b.as<MapTerm>();
      return simple(ioco_in_lift(r, x, y), n.text, explain);
    }
    case T::ioco_out:
      return simple(ioco_out_lift(r, a.as<MapTerm>(), b.as<MapTerm>()), n.text, explain);
  }
  return {};
}

// Label pairs of an `lr` node, or of the converse of one (L_R converse is L_{R°}).
std::optional<LabelPairs> as_lr(const ConnectorExpr& e) {
  if (e.tag() == ConnectorExpr::Tag::lr) return e.label_pairs();
  if (e.tag() == ConnectorExpr::Tag::conv && e.child(0).tag() == ConnectorExpr::Tag::lr) {
    LabelPairs out;
    for (const auto& [l, m] : e.child(0).label_pairs()) out.emplace_back(m, l);
    return out;
  }
  return std::nullopt;
}

[[noreturn]] void mismatch(const ConnectorExpr& e, const FunctorKind& l, const FunctorKind& r, const std::string& why) {
  throw KindMismatch(e.str() + " cannot connect " + l.str() + " to " + r.str() + ": " + why);
}

}  // namespace

const FunctorKind& Connector::src() const { return node_->src; }
const FunctorKind& Connector::dst() const { return node_->dst; }
const ConnectorExpr& Connector::expr() const { return node_->expr; }
const EvalOptions& Connector::options() const { return node_->opts; }
const LambdaRel* Connector::lambda() const { return node_->lambda ? &*node_->lambda : nullptr; }
std::vector<Connector> Connector::children() const { return node_->kids; }

std::optional<std::string> Connector::closed_form() const {
  switch (node_->closed) {
    case Closed::lqlr:
      return "lqlr";
    case Closed::ioco_compat:
      return "ioco-compat";
    case Closed::shared_step:
      return "shared-step";
    case Closed::outer_only:
    case Closed::inner_only:
      return "identity";
    case Closed::none:
      break;
  }
  return std::nullopt;
}

bool Connector::lift(const Rel& r, const FunctorTerm& a, const FunctorTerm& b) const {
  return evaluate(*node_, r, a, b, false).holds;
}

LiftVerdict Connector::explain(const Rel& r, const FunctorTerm& a, const FunctorTerm& b) const {
  return evaluate(*node_, r, a, b, true);
}

Connector bind(const ConnectorExpr& e, const FunctorKind& left, const FunctorKind& right, const EvalOptions& opts) {
  using T = ConnectorExpr::Tag;
  auto n = std::make_shared<CNode>(e, left, right, opts);
  switch (e.tag()) {
    case T::kant: {
      n->lambda.emplace(left, right, e.lambda_pairs());
      for (const auto& [l, m] : n->lambda->pairs())
        n->bound.emplace_back(BoundLifting(l, left, opts.arity_cap), BoundLifting(m, right, opts.arity_cap));
      break;
    }
    case T::id:
      if (!(left == right)) mismatch(e, left, right, "identity needs equal kinds");
      break;
    case T::comp: {
      auto mid = merge(natural_dst(e.child(1), left), natural_src(e.child(0), right));
      if (!mid && left == right) mid = left;
      if (!mid) mismatch(e, left, right, "cannot infer the middle kind");
      n->kids.push_back(bind(e.child(0), *mid, right, opts));
      n->kids.push_back(bind(e.child(1), left, *mid, opts));
      if (opts.use_closed_forms) {
        const auto& outer = e.child(0);
        const auto& inner = e.child(1);
        if (outer.tag() == T::id) {
          n->closed = Closed::inner_only;
        } else if (inner.tag() == T::id) {
          n->closed = Closed::outer_only;
        } else if (auto q = as_lr(outer), rr = as_lr(inner); q && rr) {
          n->closed = Closed::lqlr;
          n->label_rel = label_relation(*q, mid->labels(), right.labels(), "lr");
          n->label_rel2 = label_relation(*rr, left.labels(), mid->labels(), "lr");
        } else if (inner == ConnectorExpr::ioco() && outer == ConnectorExpr::conv(ConnectorExpr::ioco())) {
          n->closed = Closed::ioco_compat;
        } else if (outer == ConnectorExpr::lt() && inner == ConnectorExpr::conv(ConnectorExpr::lt()) &&
                   left == right) {
          n->closed = Closed::shared_step;
        }
      }
      break;
    }
    case T::conv:
      n->kids.push_back(bind(e.child(0), right, left, opts));
      break;
    case T::meet:
      n->kids.push_back(bind(e.child(0), left, right, opts));
      n->kids.push_back(bind(e.child(1), left, right, opts));
      break;
    case T::prod: {
      auto lc = left.components();
      auto rc = right.components();
      if (!lc || !rc) mismatch(e, left, right, "product needs product kinds");
      n->kids.push_back(bind(e.child(0), lc->first, rc->first, opts));
      n->kids.push_back(bind(e.child(1), lc->second, rc->second, opts));
      break;
    }
    case T::pull_left: {
      auto mid = merge(e.nat().natural_dst(left), natural_src(e.child(0), right));
      if (!mid) mismatch(e, left, right, "cannot infer the kind behind " + e.nat().str());
      e.nat().check(left, *mid);
      n->nat_table = relabel_table(e.nat(), left, *mid);
      n->nat_other = *mid;
      n->kids.push_back(bind(e.child(0), *mid, right, opts));
      break;
    }
    case T::pull_right: {
      auto mid = merge(e.nat().natural_dst(right), natural_dst(e.child(0), left));
      if (!mid) mismatch(e, left, right, "cannot infer the kind behind " + e.nat().str());
      e.nat().check(right, *mid);
      n->nat_table = relabel_table(e.nat(), right, *mid);
      n->nat_other = *mid;
      n->kids.push_back(bind(e.child(0), left, *mid, opts));
      break;
    }
    case T::kr:
    case T::lr:
      if (left.tag() != KindTag::plts || right.tag() != KindTag::plts) mismatch(e, left, right, "needs PLTS kinds");
      n->label_rel = label_relation(e.label_pairs(), left.labels(), right.labels(), e.tag() == T::kr ? "kr" : "lr");
      break;
    case T::lf:
      if (left.tag() != KindTag::plts || !(left == right)) mismatch(e, left, right, "needs one PLTS kind");
      break;
    case T::ioco_in:
      if (!is_map_kind(left) || !is_map_kind(right) || !(left.labels() == right.labels()))
        mismatch(e, left, right, "needs map kinds over one input alphabet");
      break;
    case T::ioco_out:
      if (!is_map_kind(left) || !is_map_kind(right) || !(left.labels() == right.labels()))
        mismatch(e, left, right, "needs map kinds over one output alphabet");
      break;
    case T::weak: {
      if (left.tag() != KindTag::plts || right.tag() != KindTag::plts) mismatch(e, left, right, "needs PLTS kinds");
      if (!left.labels().contains(e.tau())) mismatch(e, left, right, "'" + e.tau() + "' is not a label");
      n->label_rel = label_relation(weak_label_relation(left.labels(), e.tau()), left.labels(), right.labels(), "weak");
      break;
    }
  }
  return Connector(std::move(n));
}

bool connector_lift(const ConnectorExpr& e, const FunctorKind& left, const FunctorKind& right, const Rel& r,
                    const FunctorTerm& a, const FunctorTerm& b, const EvalOptions& opts) {
  return bind(e, left, right, opts).lift(r, a, b);
}

}  // namespace hetsim
