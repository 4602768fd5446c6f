#pragma once

// Monotone predicate liftings (modalities) for the catalog functors, their
// duals, and arity-preserving relations between liftings.

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hetsim/functors.hpp"
#include "hetsim/rational.hpp"
#include "hetsim/relcore.hpp"
#include "hetsim/sexpr.hpp"

namespace hetsim {

class Lifting;

/// Node of a positive-Boolean skeleton. At the outer level the leaves are
/// applications of atomic liftings; inside an application the leaves are
/// argument placeholders `%i`.
struct PosExpr {
  enum class Op { top, bot, conj, disj, var, apply };
  Op op = Op::top;
  std::size_t var = 0;                   // Op::var
  std::shared_ptr<const Lifting> atom;   // Op::apply
  std::vector<PosExpr> kids;             // conj/disj operands, or apply arguments

  static PosExpr top() { return {}; }
  static PosExpr bot() { return {Op::bot, 0, nullptr, {}}; }
  static PosExpr conj(std::vector<PosExpr> k) { return {Op::conj, 0, nullptr, std::move(k)}; }
  static PosExpr disj(std::vector<PosExpr> k) { return {Op::disj, 0, nullptr, std::move(k)}; }
  static PosExpr placeholder(std::size_t i) { return {Op::var, i, nullptr, {}}; }
  static PosExpr apply(Lifting atom, std::vector<PosExpr> args);
};

/// A monotone predicate lifting. Labels are kept by name and resolved against
/// a functor kind when the lifting is bound.
class Lifting {
 public:
  enum class Tag {
    dia,     // some l-successor in A
    box,     // every l-successor in A
    down,    // 0-ary: l undefined (partial maps)
    up,      // 0-ary: l defined; dual of down
    pge,     // mass of l-successors in A is >= eps
    pdual,   // mass of l-successors outside A is < eps; dual of pge
    bigbox,  // |A|-ary: every l-successor in A_l
    bigdia,  // |A|-ary: some l-successor in A_l
    pos,     // positive Boolean skeleton
  };

  static Lifting dia(std::string label) { return Lifting(Tag::dia, std::move(label)); }
  static Lifting box(std::string label) { return Lifting(Tag::box, std::move(label)); }
  static Lifting down(std::string label) { return Lifting(Tag::down, std::move(label)); }
  static Lifting up(std::string label) { return Lifting(Tag::up, std::move(label)); }
  static Lifting pge(std::string label, Rational eps);
  static Lifting pdual(std::string label, Rational eps);
  static Lifting bigbox() { return Lifting(Tag::bigbox, {}); }
  static Lifting bigdia() { return Lifting(Tag::bigdia, {}); }
  /// Arity is one more than the largest placeholder index. Throws
  /// ValidationError if placeholders occur outside an application or
  /// applications are nested.
  static Lifting pos(PosExpr skeleton);

  Tag tag() const { return tag_; }
  const std::string& label() const { return label_; }
  const Rational& threshold() const { return eps_; }
  const PosExpr& skeleton() const { return *skel_; }

  /// Number of arguments when used over `kind` (bigbox/bigdia depend on the alphabet).
  std::size_t arity(const FunctorKind& kind) const;

  /// Canonical surface form, e.g. `dia(a)`, `pge(a,1/2)`, `dual(pge(a,1/2))`.
  std::string str() const;

  friend bool operator==(const Lifting& a, const Lifting& b) { return a.str() == b.str(); }
  friend bool operator<(const Lifting& a, const Lifting& b) { return a.str() < b.str(); }

 private:
  Lifting(Tag tag, std::string label) : tag_(tag), label_(std::move(label)) {}

  Tag tag_;
  std::string label_;
  Rational eps_;
  std::shared_ptr<const PosExpr> skel_;
  std::size_t arity_ = 0;  // pos only
};

/// Tree form shared by both surfaces: `(pge a 1/2)` / `pge(a,1/2)`.
SExpr lifting_to_sexpr(const Lifting& l);
/// Accepts `dia a`, `box a`, `down o`, `up o`, `pge a eps`, `bigbox`, `bigdia`,
/// `pos skeleton`, and `dual L`. Throws ParseError.
Lifting lifting_from_sexpr(const SExpr& e);
/// Parses the functional surface, e.g. `dia(a)`.
Lifting parse_lifting(std::string_view text);

/// The dual lifting `λ∂(A…) = FX ∖ λ(X∖A…)`; an involution.
Lifting dual_lifting(const Lifting& l);

/// A lifting resolved against a functor kind, ready for repeated evaluation.
class BoundLifting {
 public:
  /// Throws KindMismatch if the lifting does not apply to `kind`, and
  /// Intractable if a bigbox/bigdia alphabet exceeds `arity_cap`.
  BoundLifting(const Lifting& l, const FunctorKind& kind, std::size_t arity_cap = 8);

  const Lifting& lifting() const { return lifting_; }
  std::size_t arity() const { return arity_; }

  /// Whether `t ∈ λ(args)`; every argument is a subset of a carrier with `n` elements.
  bool eval(std::span<const Subset> args, const FunctorTerm& t, std::size_t n) const;

 private:
  struct Node;
  Lifting lifting_;
  std::size_t arity_;
  std::shared_ptr<const Node> node_;
};

/// Unbound evaluation; throws KindMismatch / std::invalid_argument on arity errors.
bool eval_lifting(const Lifting& l, const FunctorKind& kind, std::span<const Subset> args, const FunctorTerm& t,
                  std::size_t n);

/// Whether `l` can be used over `kind`.
bool applicable(const Lifting& l, const FunctorKind& kind);

/// An arity-preserving relation between liftings for `left` and liftings for `right`.
class LambdaRel {
 public:
  using Pair = std::pair<Lifting, Lifting>;

  /// Validates applicability and equal arities; duplicate pairs are dropped,
  /// first occurrence order is kept.
  LambdaRel(FunctorKind left, FunctorKind right, std::vector<Pair> pairs);

  const FunctorKind& left() const { return left_; }
  const FunctorKind& right() const { return right_; }
  const std::vector<Pair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool contains(const Lifting& l, const Lifting& m) const;

 private:
  FunctorKind left_;
  FunctorKind right_;
  std::vector<Pair> pairs_;
};

/// `{(λ∂, μ∂) | (λ, μ) ∈ Λ}`.
LambdaRel lambda_dual(const LambdaRel& lambda);
/// `{(μ, λ) | (λ, μ) ∈ Λ}` with the kinds swapped.
LambdaRel lambda_converse(const LambdaRel& lambda);
/// Relational composite `Θ·Λ` (Λ first), matching middle liftings by canonical form.
LambdaRel lambda_compose(const LambdaRel& theta, const LambdaRel& lambda);

}  // namespace hetsim
