#include "hetsim/logic.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "hetsim/errors.hpp"
#include "hetsim/sexpr.hpp"

namespace hetsim {

namespace {

Formula parse_one(FunctionalReader& in, const LambdaRel& lambda);

Lifting read_lifting(FunctionalReader& in) { return lifting_from_sexpr(in.read()); }

Formula parse_modal(FunctionalReader& in, const LambdaRel& lambda) {
  in.expect('<');
  Lifting l = read_lifting(in);
  in.expect(',');
  Lifting m = read_lifting(in);
  in.expect('>');
  std::size_t index = lambda.size();
  for (std::size_t i = 0; i < lambda.size(); ++i)
    if (lambda.pairs()[i].first == l && lambda.pairs()[i].second == m) index = i;
  if (index == lambda.size()) in.fail("pair <" + l.str() + "," + m.str() + "> not in Λ");
  const std::size_t arity = l.arity(lambda.left());

  std::vector<Formula> args;
  if (in.peek() == '(') {
    in.expect('(');
    if (in.peek() == ')') {
      in.expect(')');
    } else {
      Formula first = parse_one(in, lambda);
      char c = in.peek();
      if (c == '&' || c == '|') {
        in.expect(c);
        Formula second = parse_one(in, lambda);
        in.expect(')');
        args.push_back(c == '&' ? Formula::conj(first, second) : Formula::disj(first, second));
      } else {
        args.push_back(first);
        while (in.peek() == ',') {
          in.expect(',');
          args.push_back(parse_one(in, lambda));
        }
        in.expect(')');
      }
    }
  } else {
    args.push_back(parse_one(in, lambda));
  }
  if (args.size() != arity)
    in.fail("modality <" + l.str() + "," + m.str() + "> takes " + std::to_string(arity) + " arguments, got " +
            std::to_string(args.size()));
  return Formula::mod(index, l, m, std::move(args));
}

Formula parse_one(FunctionalReader& in, const LambdaRel& lambda) {
  char c = in.peek();
  if (c == '<') return parse_modal(in, lambda);
  if (c == '(') {
    in.expect('(');
    Formula a = parse_one(in, lambda);
    char op = in.peek();
    if (op != '&' && op != '|') in.fail("expected '&' or '|'");
    in.expect(op);
    Formula b = parse_one(in, lambda);
    in.expect(')');
    return op == '&' ? Formula::conj(a, b) : Formula::disj(a, b);
  }
  if (c == '\0') in.fail("unexpected end of formula");
  SExpr atom = in.read();
  if (atom.is_atom() && atom.atom == "T") return Formula::top();
  if (atom.is_atom() && atom.atom == "F") return Formula::bot();
  in.fail("expected T, F, '(' or '<'");
}

class Evaluator {
 public:
  Evaluator(const Coalgebra& m, Side side, std::size_t arity_cap) : m_(m), side_(side), cap_(arity_cap) {}

  const Subset& ext(const Formula& f) {
    auto it = memo_.find(f.id());
    if (it != memo_.end()) return it->second;
    Subset out(m_.size());
    switch (f.op()) {
      case Formula::Op::bot:
        break;
      case Formula::Op::top:
        out.set();
        break;
      case Formula::Op::conj:
        out = ext(f.kids()[0]) & ext(f.kids()[1]);
        break;
      case Formula::Op::disj:
        out = ext(f.kids()[0]) | ext(f.kids()[1]);
        break;
      case Formula::Op::mod: {
        std::vector<Subset> args;
        for (const auto& k : f.kids()) args.push_back(ext(k));
        const BoundLifting& l = bound(side_ == Side::left ? f.left_lifting() : f.right_lifting());
        for (std::size_t x = 0; x < m_.size(); ++x)
          if (l.eval(args, m_(x), m_.size())) out.set(x);
        break;
      }
    }
    return memo_.emplace(f.id(), std::move(out)).first->second;
  }

 private:
  const BoundLifting& bound(const Lifting& l) {
    const std::string key = l.str();
    auto it = lifts_.find(key);
    if (it == lifts_.end()) it = lifts_.emplace(key, BoundLifting(l, m_.kind(), cap_)).first;
    return it->second;
  }

  const Coalgebra& m_;
  Side side_;
  std::size_t cap_;
  std::unordered_map<const void*, Subset> memo_;
  std::map<std::string, BoundLifting> lifts_;
};

Formula fold(std::vector<Formula> parts, bool conj) {
  if (parts.empty()) return conj ? Formula::top() : Formula::bot();
  Formula out = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) out = conj ? Formula::conj(out, parts[i]) : Formula::disj(out, parts[i]);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Formula

Formula Formula::bot() { return Formula(std::make_shared<const Node>(Node{Op::bot, {}, 0, nullptr, nullptr})); }
Formula Formula::top() { return Formula(std::make_shared<const Node>(Node{Op::top, {}, 0, nullptr, nullptr})); }
Formula Formula::conj(Formula a, Formula b) {
  return Formula(std::make_shared<const Node>(Node{Op::conj, {std::move(a), std::move(b)}, 0, nullptr, nullptr}));
}
Formula Formula::disj(Formula a, Formula b) {
  return Formula(std::make_shared<const Node>(Node{Op::disj, {std::move(a), std::move(b)}, 0, nullptr, nullptr}));
}
Formula Formula::mod(std::size_t pair, Lifting left, Lifting right, std::vector<Formula> args) {
  return Formula(std::make_shared<const Node>(Node{Op::mod, std::move(args), pair,
                                                   std::make_shared<const Lifting>(std::move(left)),
                                                   std::make_shared<const Lifting>(std::move(right))}));
}

std::size_t Formula::depth() const {
  std::size_t d = 0;
  for (const auto& k : kids()) d = std::max(d, k.depth());
  return op() == Op::mod ? d + 1 : d;
}

std::string Formula::str() const {
  switch (op()) {
    case Op::bot:
      return "F";
    case Op::top:
      return "T";
    case Op::conj:
      return "(" + kids()[0].str() + " & " + kids()[1].str() + ")";
    case Op::disj:
      return "(" + kids()[0].str() + " | " + kids()[1].str() + ")";
    case Op::mod: {
      std::string out = "<" + left_lifting().str() + "," + right_lifting().str() + ">";
      if (kids().size() == 1) return out + kids()[0].str();
      out += "(";
      for (std::size_t i = 0; i < kids().size(); ++i) out += (i ? ", " : "") + kids()[i].str();
      return out + ")";
    }
  }
  return "?";
}

Formula parse_formula(std::string_view text, const LambdaRel& lambda) {
  FunctionalReader in(text);
  Formula f = parse_one(in, lambda);
  if (!in.at_end()) in.fail("trailing input after formula");
  return f;
}

Subset formula_extension(const Formula& f, const Coalgebra& m, Side side, std::size_t arity_cap) {
  Evaluator ev(m, side, arity_cap);
  return ev.ext(f);
}

bool eval_formula(const Formula& f, const Coalgebra& m, Side side, std::size_t x) {
  if (x >= m.size()) throw CarrierMismatch("state index " + std::to_string(x) + " out of range");
  return formula_extension(f, m, side)[x];
}

// ---------------------------------------------------------------------------
// Distinguishing formulas

Distinguisher::Distinguisher(const Coalgebra& c, const Coalgebra& d, const LambdaRel& lambda, const SimResult& sim)
    : c_(c), d_(d), lambda_(lambda), sim_(sim), entry_(c.size() * d.size(), nullptr), memo_(c.size() * d.size()) {
  for (const auto& e : sim.removal_log) entry_[e.x * d.size() + e.y] = &e;
  Rel r = Rel::full(c.states(), d.states());
  before_.push_back(r);  // unused round 0
  std::size_t i = 0;
  for (std::size_t k = 1; k <= sim.rounds; ++k) {
    before_.push_back(r);
    while (i < sim.removal_log.size() && sim.removal_log[i].round == k) {
      r.erase(sim.removal_log[i].x, sim.removal_log[i].y);
      ++i;
    }
  }
}

Formula Distinguisher::build(std::size_t x, std::size_t y) {
  auto& slot = memo_[x * d_.size() + y];
  if (slot) return *slot;
  const Removal* e = entry_[x * d_.size() + y];
  if (!e || !e->witness) throw std::logic_error("no Kantorovich witness recorded for a removed pair");
  const auto& w = *e->witness;
  const Rel& r = before_.at(e->round);
  const auto supp_y = support(d_(y));

  std::vector<Formula> args;
  for (const auto& a : w.args) {
    const Subset img = image(r, a);
    std::vector<Formula> disjuncts;
    for_each_bit(a, [&](std::size_t x2) {
      std::vector<Formula> conjuncts;
      std::set<const void*> seen;
      for (auto y2 : supp_y) {
        if (img[y2]) continue;
        Formula phi = build(x2, y2);
        if (seen.insert(phi.id()).second) conjuncts.push_back(phi);
      }
      disjuncts.push_back(fold(std::move(conjuncts), true));
    });
    args.push_back(fold(std::move(disjuncts), false));
  }
  const auto& [l, m] = lambda_.pairs().at(w.pair_index);
  slot = Formula::mod(w.pair_index, l, m, std::move(args));
  return *slot;
}

std::optional<Formula> Distinguisher::formula(std::size_t x, std::size_t y) {
  if (sim_.relation.contains(x, y)) return std::nullopt;
  Formula f = build(x, y);
  if (!eval_formula(f, c_, Side::left, x) || eval_formula(f, d_, Side::right, y))
    throw std::logic_error("synthesized formula " + f.str() + " does not separate " + c_.states()[x] + " from " +
                           d_.states()[y]);
  return f;
}

std::optional<Formula> distinguishing_formula(const Coalgebra& c, const Coalgebra& d, const LambdaRel& lambda,
                                              const SimResult& sim, std::size_t x, std::size_t y) {
  Distinguisher dist(c, d, lambda, sim);
  return dist.formula(x, y);
}

std::optional<Formula> distinguishing_formula(const Coalgebra& c, const Coalgebra& d, const LambdaRel& lambda,
                                              std::size_t x, std::size_t y, const EvalOptions& opts) {
  auto sim = greatest_simulation(c, d, ConnectorExpr::kant(lambda.pairs()), opts);
  return distinguishing_formula(c, d, lambda, sim, x, y);
}

}  // namespace hetsim
