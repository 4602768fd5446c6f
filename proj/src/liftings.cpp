#include "hetsim/liftings.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "hetsim/errors.hpp"

namespace hetsim {

namespace {

// Largest placeholder index + 1 below `e`, and whether the shape is legal.
void check_skeleton(const PosExpr& e, bool inside, std::size_t& arity) {
  switch (e.op) {
    case PosExpr::Op::top:
    case PosExpr::Op::bot:
      return;
    case PosExpr::Op::conj:
    case PosExpr::Op::disj:
      for (const auto& k : e.kids) check_skeleton(k, inside, arity);
      return;
    case PosExpr::Op::var:
      if (!inside) throw ValidationError("placeholder %" + std::to_string(e.var) + " outside an application");
      arity = std::max(arity, e.var + 1);
      return;
    case PosExpr::Op::apply:
      if (inside) throw ValidationError("nested application inside a lifting argument");
      if (!e.atom) throw ValidationError("application without a lifting");
      if (e.atom->tag() == Lifting::Tag::pos) throw ValidationError("pos skeletons cannot be applied inside pos");
      for (const auto& k : e.kids) check_skeleton(k, true, arity);
      return;
  }
}

SExpr skeleton_to_sexpr(const PosExpr& e) {
  auto list = [&](const char* head) {
    std::vector<SExpr> items{SExpr::make_atom(head)};
    for (const auto& k : e.kids) items.push_back(skeleton_to_sexpr(k));
    return SExpr::make_list(std::move(items));
  };
  switch (e.op) {
    case PosExpr::Op::top:
      return SExpr::make_atom("T");
    case PosExpr::Op::bot:
      return SExpr::make_atom("F");
    case PosExpr::Op::conj:
      return list("and");
    case PosExpr::Op::disj:
      return list("or");
    case PosExpr::Op::var:
      return SExpr::make_atom("%" + std::to_string(e.var));
    case PosExpr::Op::apply: {
      std::vector<SExpr> items{SExpr::make_atom("app"), lifting_to_sexpr(*e.atom)};
      for (const auto& k : e.kids) items.push_back(skeleton_to_sexpr(k));
      return SExpr::make_list(std::move(items));
    }
  }
  return SExpr::make_atom("?");
}

[[noreturn]] void bad(const SExpr& e, const std::string& what) { throw ParseError(what, e.line, e.column); }

PosExpr skeleton_from_sexpr(const SExpr& e) {
  if (e.is_atom()) {
    if (e.atom == "T") return PosExpr::top();
    if (e.atom == "F") return PosExpr::bot();
    if (e.atom.size() > 1 && e.atom[0] == '%') {
      std::size_t i = 0;
      for (std::size_t k = 1; k < e.atom.size(); ++k) {
        if (!std::isdigit(static_cast<unsigned char>(e.atom[k]))) bad(e, "bad placeholder '" + e.atom + "'");
        i = i * 10 + static_cast<std::size_t>(e.atom[k] - '0');
      }
      return PosExpr::placeholder(i);
    }
    bad(e, "unknown skeleton atom '" + e.atom + "'");
  }
  const std::string head = e.head();
  std::vector<PosExpr> kids;
  if (head == "and" || head == "or") {
    for (std::size_t i = 1; i < e.items.size(); ++i) kids.push_back(skeleton_from_sexpr(e.items[i]));
    return head == "and" ? PosExpr::conj(std::move(kids)) : PosExpr::disj(std::move(kids));
  }
  if (head == "app") {
    if (e.items.size() < 2) bad(e, "app needs a lifting");
    for (std::size_t i = 2; i < e.items.size(); ++i) kids.push_back(skeleton_from_sexpr(e.items[i]));
    return PosExpr::apply(lifting_from_sexpr(e.items[1]), std::move(kids));
  }
  bad(e, "unknown skeleton operator '" + head + "'");
}

// Boolean dual of a skeleton: swap T/F and and/or, dualize applied atoms.
PosExpr skeleton_dual(const PosExpr& e) {
  switch (e.op) {
    case PosExpr::Op::top:
      return PosExpr::bot();
    case PosExpr::Op::bot:
      return PosExpr::top();
    case PosExpr::Op::var:
      return e;
    case PosExpr::Op::conj:
    case PosExpr::Op::disj: {
      std::vector<PosExpr> kids;
      for (const auto& k : e.kids) kids.push_back(skeleton_dual(k));
      return e.op == PosExpr::Op::conj ? PosExpr::disj(std::move(kids)) : PosExpr::conj(std::move(kids));
    }
    case PosExpr::Op::apply: {
      std::vector<PosExpr> kids;
      for (const auto& k : e.kids) kids.push_back(skeleton_dual(k));
      return PosExpr::apply(dual_lifting(*e.atom), std::move(kids));
    }
  }
  return e;
}

enum class Shape { arrows, dist, single, map, susp, none };

Shape shape_of(const FunctorKind& kind) {
  switch (kind.tag()) {
    case KindTag::plts:
      return Shape::arrows;
    case KindTag::dlts:
      return Shape::dist;
    case KindTag::det:
      return Shape::single;
    case KindTag::pmap:
    case KindTag::tmap:
    case KindTag::nemap:
      return Shape::map;
    case KindTag::susp:
    case KindTag::suspie:
      return Shape::susp;
    case KindTag::pair:
      return Shape::none;
  }
  return Shape::none;
}

bool tag_fits(Lifting::Tag tag, Shape shape) {
  using T = Lifting::Tag;
  switch (shape) {
    case Shape::arrows:
    case Shape::single:
      return tag == T::dia || tag == T::box || tag == T::bigbox || tag == T::bigdia;
    case Shape::dist:
      return tag == T::dia || tag == T::box || tag == T::pge || tag == T::pdual || tag == T::bigbox ||
             tag == T::bigdia;
    case Shape::map:
    case Shape::susp:
      return tag == T::dia || tag == T::box || tag == T::down || tag == T::up;
    case Shape::none:
      return false;
  }
  return false;
}

bool mem(const Subset& a, std::size_t x) { return x < a.size() && a[x]; }

bool eval_map(Lifting::Tag tag, const MapTerm& m, std::size_t letter, const Subset* a) {
  const auto& slot = m.image[letter];
  switch (tag) {
    case Lifting::Tag::dia:
      return slot && mem(*a, *slot);
    case Lifting::Tag::box:
      return !slot || mem(*a, *slot);
    case Lifting::Tag::down:
      return !slot;
    case Lifting::Tag::up:
      return slot.has_value();
    default:
      return false;
  }
}

}  // namespace

PosExpr PosExpr::apply(Lifting atom, std::vector<PosExpr> args) {
  return {Op::apply, 0, std::make_shared<const Lifting>(std::move(atom)), std::move(args)};
}

Lifting Lifting::pge(std::string label, Rational eps) {
  if (eps < Rational(0) || Rational(1) < eps) throw ValidationError("threshold " + eps.str() + " outside [0,1]");
  Lifting l(Tag::pge, std::move(label));
  l.eps_ = std::move(eps);
  return l;
}

Lifting Lifting::pdual(std::string label, Rational eps) {
  Lifting l = pge(std::move(label), std::move(eps));
  l.tag_ = Tag::pdual;
  return l;
}

Lifting Lifting::pos(PosExpr skeleton) {
  std::size_t arity = 0;
  check_skeleton(skeleton, false, arity);
  Lifting l(Tag::pos, {});
  l.skel_ = std::make_shared<const PosExpr>(std::move(skeleton));
  l.arity_ = arity;
  return l;
}

std::size_t Lifting::arity(const FunctorKind& kind) const {
  switch (tag_) {
    case Tag::down:
    case Tag::up:
      return 0;
    case Tag::bigbox:
    case Tag::bigdia:
      return kind.labels().size();
    case Tag::pos:
      return arity_;
    default:
      return 1;
  }
}

std::string Lifting::str() const { return lifting_to_sexpr(*this).functional(); }

SExpr lifting_to_sexpr(const Lifting& l) {
  using T = Lifting::Tag;
  auto node = [](std::vector<std::string> parts) {
    std::vector<SExpr> items;
    for (auto& p : parts) items.push_back(SExpr::make_atom(std::move(p)));
    return SExpr::make_list(std::move(items));
  };
  switch (l.tag()) {
    case T::dia:
      return node({"dia", l.label()});
    case T::box:
      return node({"box", l.label()});
    case T::down:
      return node({"down", l.label()});
    case T::up:
      return node({"up", l.label()});
    case T::pge:
      return node({"pge", l.label(), l.threshold().str()});
    case T::pdual:
      return SExpr::make_list({SExpr::make_atom("dual"), node({"pge", l.label(), l.threshold().str()})});
    case T::bigbox:
      return node({"bigbox"});
    case T::bigdia:
      return node({"bigdia"});
    case T::pos:
      return SExpr::make_list({SExpr::make_atom("pos"), skeleton_to_sexpr(l.skeleton())});
  }
  return node({"?"});
}

Lifting lifting_from_sexpr(const SExpr& e) {
  const std::string head = e.is_atom() ? e.atom : e.head();
  const std::size_t nargs = e.is_atom() ? 0 : e.items.size() - 1;
  auto arg = [&](std::size_t i) -> const SExpr& { return e.items[i + 1]; };
  auto label = [&]() {
    if (nargs != 1 || !arg(0).is_atom()) bad(e, head + " takes one label");
    return arg(0).atom;
  };
  if (head == "dia") return Lifting::dia(label());
  if (head == "box") return Lifting::box(label());
  if (head == "down") return Lifting::down(label());
  if (head == "up") return Lifting::up(label());
  if (head == "pge") {
    if (nargs != 2 || !arg(0).is_atom() || !arg(1).is_atom()) bad(e, "pge takes a label and a threshold");
    try {
      return Lifting::pge(arg(0).atom, Rational::parse(arg(1).atom));
    } catch (const std::invalid_argument& ex) {
      bad(arg(1), ex.what());
    } catch (const ValidationError& ex) {
      bad(arg(1), ex.what());
    }
  }
  if (head == "bigbox" || head == "bigdia") {
    if (nargs != 0) bad(e, head + " takes no arguments");
    return head == "bigbox" ? Lifting::bigbox() : Lifting::bigdia();
  }
  if (head == "dual") {
    if (nargs != 1) bad(e, "dual takes one lifting");
    return dual_lifting(lifting_from_sexpr(arg(0)));
  }
  if (head == "pos") {
    if (nargs != 1) bad(e, "pos takes one skeleton");
    try {
      return Lifting::pos(skeleton_from_sexpr(arg(0)));
    } catch (const ValidationError& ex) {
      bad(e, ex.what());
    }
  }
  bad(e, "unknown lifting '" + head + "'");
}

Lifting parse_lifting(std::string_view text) { return lifting_from_sexpr(parse_functional(text)); }

Lifting dual_lifting(const Lifting& l) {
  using T = Lifting::Tag;
  switch (l.tag()) {
    case T::dia:
      return Lifting::box(l.label());
    case T::box:
      return Lifting::dia(l.label());
    case T::down:
      return Lifting::up(l.label());
    case T::up:
      return Lifting::down(l.label());
    case T::pge:
      return Lifting::pdual(l.label(), l.threshold());
    case T::pdual:
      return Lifting::pge(l.label(), l.threshold());
    case T::bigbox:
      return Lifting::bigdia();
    case T::bigdia:
      return Lifting::bigbox();
    case T::pos:
      return Lifting::pos(skeleton_dual(l.skeleton()));
  }
  return l;
}

// ---------------------------------------------------------------------------
// Binding

struct BoundLifting::Node {
  Lifting::Tag tag;
  Shape shape;
  int component = 0;       // SUSP: 0 = input map, 1 = output map
  std::size_t letter = 0;  // resolved label index
  Rational eps;
  // pos: bound skeleton mirrored from the lifting
  struct Skel {
    PosExpr::Op op;
    std::size_t var = 0;
    std::shared_ptr<const BoundLifting> atom;
    std::vector<Skel> kids;
  };
  Skel skel;

  static Subset inner(const Skel& s, std::span<const Subset> args, std::size_t n) {
    switch (s.op) {
      case PosExpr::Op::top:
        return ~Subset(n);
      case PosExpr::Op::bot:
        return Subset(n);
      case PosExpr::Op::var:
        return args[s.var];
      case PosExpr::Op::conj: {
        Subset out = ~Subset(n);
        for (const auto& k : s.kids) out &= inner(k, args, n);
        return out;
      }
      case PosExpr::Op::disj: {
        Subset out(n);
        for (const auto& k : s.kids) out |= inner(k, args, n);
        return out;
      }
      case PosExpr::Op::apply:
        break;
    }
    throw std::logic_error("application inside a lifting argument");
  }

  static bool outer(const Skel& s, std::span<const Subset> args, const FunctorTerm& t, std::size_t n) {
    switch (s.op) {
      case PosExpr::Op::top:
        return true;
      case PosExpr::Op::bot:
        return false;
      case PosExpr::Op::conj:
        return std::all_of(s.kids.begin(), s.kids.end(), [&](const Skel& k) { return outer(k, args, t, n); });
      case PosExpr::Op::disj:
        return std::any_of(s.kids.begin(), s.kids.end(), [&](const Skel& k) { return outer(k, args, t, n); });
      case PosExpr::Op::apply: {
        std::vector<Subset> inner_args;
        inner_args.reserve(s.kids.size());
        for (const auto& k : s.kids) inner_args.push_back(inner(k, args, n));
        return s.atom->eval(inner_args, t, n);
      }
      case PosExpr::Op::var:
        break;
    }
    throw std::logic_error("placeholder outside an application");
  }

  static Skel bind(const PosExpr& e, const FunctorKind& kind, std::size_t cap) {
    Skel s{e.op, e.var, nullptr, {}};
    if (e.op == PosExpr::Op::apply) {
      s.atom = std::make_shared<const BoundLifting>(*e.atom, kind, cap);
      if (s.atom->arity() != e.kids.size())
        throw ValidationError(e.atom->str() + " applied to " + std::to_string(e.kids.size()) + " arguments, needs " +
                              std::to_string(s.atom->arity()));
    }
    for (const auto& k : e.kids) s.kids.push_back(bind(k, kind, cap));
    return s;
  }
};

BoundLifting::BoundLifting(const Lifting& l, const FunctorKind& kind, std::size_t arity_cap)
    : lifting_(l), arity_(l.arity(kind)) {
  auto node = std::make_shared<Node>();
  node->tag = l.tag();
  node->shape = shape_of(kind);
  node->eps = l.threshold();
  if (l.tag() == Lifting::Tag::pos) {
    node->skel = Node::bind(l.skeleton(), kind, arity_cap);
    node_ = std::move(node);
    return;
  }
  if (!tag_fits(l.tag(), node->shape))
    throw KindMismatch(l.str() + " does not apply to " + kind.str());
  if (l.tag() == Lifting::Tag::bigbox || l.tag() == Lifting::Tag::bigdia) {
    if (arity_ > arity_cap)
      throw Intractable(l.str() + " over " + std::to_string(arity_) + " labels exceeds the arity cap " +
                        std::to_string(arity_cap));
  } else if (node->shape == Shape::susp) {
    if (auto i = kind.inputs().find(l.label())) {
      node->component = 0;
      node->letter = *i;
    } else if (auto o = kind.outputs().find(l.label())) {
      node->component = 1;
      node->letter = *o;
    } else {
      throw KindMismatch(l.str() + ": '" + l.label() + "' is neither an input nor an output of " + kind.str());
    }
  } else {
    auto i = kind.labels().find(l.label());
    if (!i) throw KindMismatch(l.str() + ": '" + l.label() + "' is not a label of " + kind.str());
    node->letter = *i;
  }
  node_ = std::move(node);
}

bool BoundLifting::eval(std::span<const Subset> args, const FunctorTerm& t, std::size_t n) const {
  if (args.size() != arity_)
    throw std::invalid_argument(lifting_.str() + " takes " + std::to_string(arity_) + " arguments, got " +
                                std::to_string(args.size()));
  const Node& nd = *node_;
  using T = Lifting::Tag;
  if (nd.tag == T::pos) return Node::outer(nd.skel, args, t, n);

  switch (nd.shape) {
    case Shape::arrows: {
      const auto& arrows = t.as<PltsTerm>().arrows;
      switch (nd.tag) {
        case T::dia:
          return std::any_of(arrows.begin(), arrows.end(),
                             [&](const Arrow& a) { return a.label == nd.letter && mem(args[0], a.state); });
        case T::box:
          return std::all_of(arrows.begin(), arrows.end(),
                             [&](const Arrow& a) { return a.label != nd.letter || mem(args[0], a.state); });
        case T::bigbox:
          return std::all_of(arrows.begin(), arrows.end(), [&](const Arrow& a) { return mem(args[a.label], a.state); });
        case T::bigdia:
          return std::any_of(arrows.begin(), arrows.end(), [&](const Arrow& a) { return mem(args[a.label], a.state); });
        default:
          break;
      }
      break;
    }
    case Shape::single: {
      const auto& a = t.as<DetTerm>().arrow;
      switch (nd.tag) {
        case T::dia:
          return a.label == nd.letter && mem(args[0], a.state);
        case T::box:
          return a.label != nd.letter || mem(args[0], a.state);
        case T::bigbox:
        case T::bigdia:
          return mem(args[a.label], a.state);
        default:
          break;
      }
      break;
    }
    case Shape::dist: {
      const auto& w = t.as<DltsTerm>().weights;
      auto mass = [&](bool inside) {
        Rational m;
        for (const auto& [a, p] : w)
          if (a.label == nd.letter && mem(args[0], a.state) == inside) m += p;
        return m;
      };
      switch (nd.tag) {
        case T::dia:
          return mass(true).is_positive();
        case T::box:
          return mass(false).is_zero();
        case T::pge:
          return !(mass(true) < nd.eps);
        case T::pdual:
          return mass(false) < nd.eps;
        case T::bigbox:
          return std::all_of(w.begin(), w.end(), [&](const auto& e) { return mem(args[e.first.label], e.first.state); });
        case T::bigdia:
          return std::any_of(w.begin(), w.end(), [&](const auto& e) { return mem(args[e.first.label], e.first.state); });
        default:
          break;
      }
      break;
    }
    case Shape::map:
      return eval_map(nd.tag, t.as<MapTerm>(), nd.letter, args.empty() ? nullptr : &args[0]);
    case Shape::susp: {
      const auto& s = t.as<SuspTerm>();
      return eval_map(nd.tag, nd.component == 0 ? s.in : s.out, nd.letter, args.empty() ? nullptr : &args[0]);
    }
    case Shape::none:
      break;
  }
  throw KindMismatch(lifting_.str() + " cannot be evaluated on this term");
}

bool eval_lifting(const Lifting& l, const FunctorKind& kind, std::span<const Subset> args, const FunctorTerm& t,
                  std::size_t n) {
  return BoundLifting(l, kind).eval(args, t, n);
}

bool applicable(const Lifting& l, const FunctorKind& kind) {
  try {
    BoundLifting b(l, kind);
    return true;
  } catch (const Error&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// Lambda relations

LambdaRel::LambdaRel(FunctorKind left, FunctorKind right, std::vector<Pair> pairs)
    : left_(std::move(left)), right_(std::move(right)) {
  for (auto& p : pairs) {
    BoundLifting l(p.first, left_);
    BoundLifting r(p.second, right_);
    if (l.arity() != r.arity())
      throw ValidationError("pair (" + p.first.str() + ", " + p.second.str() + ") does not preserve arity");
    if (!contains(p.first, p.second)) pairs_.push_back(std::move(p));
  }
}

bool LambdaRel::contains(const Lifting& l, const Lifting& m) const {
  return std::any_of(pairs_.begin(), pairs_.end(), [&](const Pair& p) { return p.first == l && p.second == m; });
}

LambdaRel lambda_dual(const LambdaRel& lambda) {
  std::vector<LambdaRel::Pair> out;
  for (const auto& [l, m] : lambda.pairs()) out.emplace_back(dual_lifting(l), dual_lifting(m));
  return LambdaRel(lambda.left(), lambda.right(), std::move(out));
}

LambdaRel lambda_converse(const LambdaRel& lambda) {
  std::vector<LambdaRel::Pair> out;
  for (const auto& [l, m] : lambda.pairs()) out.emplace_back(m, l);
  return LambdaRel(lambda.right(), lambda.left(), std::move(out));
}

LambdaRel lambda_compose(const LambdaRel& theta, const LambdaRel& lambda) {
  if (!(theta.left() == lambda.right()))
    throw KindMismatch("cannot compose lifting relations over " + lambda.right().str() + " and " + theta.left().str());
  std::vector<LambdaRel::Pair> out;
  for (const auto& [l, m] : lambda.pairs())
    for (const auto& [m2, p] : theta.pairs())
      if (m == m2) out.emplace_back(l, p);
  return LambdaRel(lambda.left(), theta.right(), std::move(out));
}

}  // namespace hetsim
