#pragma once

// Connector expressions and their evaluation: given a connector L, a relation
// r and terms a, b, decide a (L r) b.
//
// Expressions are built untyped (as parsed from the DSL) and bound to a pair
// of functor kinds before evaluation; binding infers the kinds of inner nodes.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hetsim/functors.hpp"
#include "hetsim/liftings.hpp"
#include "hetsim/relcore.hpp"

namespace hetsim {

using LabelPairs = std::vector<std::pair<std::string, std::string>>;

/// Natural transformations used to pull connectors back.
class NatTrans {
 public:
  enum class Tag {
    relabel_conv,  // PLTS(A) ⇒ PLTS(B), S ↦ S·R°
    relabel,       // PLTS(B) ⇒ PLTS(A), T ↦ T·R
    incl,          // DET(A) ⇒ PLTS(A)
    proj1,
    proj2,
  };

  static NatTrans relabel_conv(LabelPairs r) { return NatTrans(Tag::relabel_conv, std::move(r)); }
  static NatTrans relabel(LabelPairs r) { return NatTrans(Tag::relabel, std::move(r)); }
  static NatTrans incl() { return NatTrans(Tag::incl, {}); }
  static NatTrans proj1() { return NatTrans(Tag::proj1, {}); }
  static NatTrans proj2() { return NatTrans(Tag::proj2, {}); }

  Tag tag() const { return tag_; }
  /// Label pairs (l, m) with l in A and m in B, sorted and duplicate-free.
  const LabelPairs& pairs() const { return pairs_; }

  /// Target kind determined by the source kind, if any.
  std::optional<FunctorKind> natural_dst(const FunctorKind& src) const;
  /// Source kind determined by the target kind, if any.
  std::optional<FunctorKind> natural_src(const FunctorKind& dst) const;

  /// Component at carriers over the given kinds; throws KindMismatch if ill-typed.
  FunctorTerm apply(const FunctorKind& src, const FunctorKind& dst, const FunctorTerm& t) const;
  void check(const FunctorKind& src, const FunctorKind& dst) const;

  std::string str() const;
  friend bool operator==(const NatTrans& a, const NatTrans& b) { return a.tag_ == b.tag_ && a.pairs_ == b.pairs_; }

 private:
  NatTrans(Tag tag, LabelPairs r);
  Tag tag_;
  LabelPairs pairs_;
};

/// Untyped connector expression tree.
class ConnectorExpr {
 public:
  enum class Tag {
    kant,
    id,
    comp,  // children: outer, inner (outer applied after inner)
    conv,
    meet,
    prod,
    pull_left,   // child · α
    pull_right,  // β° · child
    kr,
    lr,
    lf,
    ioco_in,
    ioco_out,
    weak,
  };

  static ConnectorExpr kant(std::vector<LambdaRel::Pair> pairs);
  static ConnectorExpr id();
  static ConnectorExpr comp(ConnectorExpr outer, ConnectorExpr inner);
  static ConnectorExpr conv(ConnectorExpr c);
  static ConnectorExpr meet(ConnectorExpr a, ConnectorExpr b);
  static ConnectorExpr prod(ConnectorExpr a, ConnectorExpr b);
  static ConnectorExpr pull_left(ConnectorExpr c, NatTrans alpha);
  static ConnectorExpr pull_right(NatTrans beta, ConnectorExpr c);
  static ConnectorExpr kr(LabelPairs r);
  static ConnectorExpr lr(LabelPairs r);
  static ConnectorExpr lf();
  /// L_f pulled back along the inclusion of DET into PLTS.
  static ConnectorExpr lt();
  static ConnectorExpr ioco_in();
  static ConnectorExpr ioco_out();
  /// Product of the input and output clauses.
  static ConnectorExpr ioco();
  static ConnectorExpr weak(std::string tau);

  Tag tag() const { return node_->tag; }
  std::size_t arity() const { return node_->kids.size(); }
  const ConnectorExpr& child(std::size_t i = 0) const { return node_->kids.at(i); }
  const NatTrans& nat() const { return *node_->nat; }
  const LabelPairs& label_pairs() const { return node_->labels; }
  const std::vector<LambdaRel::Pair>& lambda_pairs() const { return node_->lambda; }
  const std::string& tau() const { return node_->tau; }

  /// DSL s-expression, e.g. `(comp (lr (rel (b c))) (lr (rel (a b))))`.
  std::string str() const;

  friend bool operator==(const ConnectorExpr& a, const ConnectorExpr& b) { return a.str() == b.str(); }

 private:
  struct Node {
    Tag tag;
    std::vector<ConnectorExpr> kids;
    std::optional<NatTrans> nat;
    LabelPairs labels;
    std::vector<LambdaRel::Pair> lambda;
    std::string tau;
  };
  explicit ConnectorExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Converse with double converses cancelled.
ConnectorExpr converse(const ConnectorExpr& c);

struct EvalOptions {
  std::size_t support_cap = 20;               // max n·|supp(a)| bits enumerated by Kantorovich nodes
  std::size_t comp_support_cap = 4;           // max |supp| per side for the generic composite search
  std::uint64_t middle_cap = std::uint64_t{1} << 20;  // max middle terms enumerated per composite check
  std::size_t arity_cap = 8;                  // max alphabet size for bigbox/bigdia
  bool use_closed_forms = true;               // dispatch registered composite descriptions
};

/// Witness subsets of a failed Kantorovich clause.
struct KantWitness {
  std::size_t pair_index;    // index into the bound lambda relation
  std::vector<Subset> args;  // A_1..A_n over the left carrier
};

struct LiftVerdict {
  bool holds = true;
  std::string clause;  // violated clause when !holds
  std::optional<KantWitness> witness;
};

/// A connector expression bound to source and target kinds.
class Connector {
 public:
  const FunctorKind& src() const;
  const FunctorKind& dst() const;
  const ConnectorExpr& expr() const;
  const EvalOptions& options() const;

  /// a (L r) b, with r : X ⇸ Y and a, b terms over X and Y.
  bool lift(const Rel& r, const FunctorTerm& a, const FunctorTerm& b) const;
  /// Like lift, with the violated clause on failure. For Kantorovich roots
  /// the witness subsets are minimal (by size, then lexicographic).
  LiftVerdict explain(const Rel& r, const FunctorTerm& a, const FunctorTerm& b) const;

  /// Lambda relation of a Kantorovich root.
  const LambdaRel* lambda() const;
  /// Children of composite-like nodes, in expression order.
  std::vector<Connector> children() const;
  /// Name of the registered description used by a composite node, if any.
  std::optional<std::string> closed_form() const;

  struct Node;
  explicit Connector(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

 private:
  std::shared_ptr<const Node> node_;
};

/// Kinds an expression would naturally connect, given one side.
std::optional<FunctorKind> natural_dst(const ConnectorExpr& e, const FunctorKind& src);
std::optional<FunctorKind> natural_src(const ConnectorExpr& e, const FunctorKind& dst);

/// Binds `e` as a connector `left → right`; throws KindMismatch if ill-typed.
Connector bind(const ConnectorExpr& e, const FunctorKind& left, const FunctorKind& right, const EvalOptions& opts = {});

/// Convenience: bind and evaluate once.
bool connector_lift(const ConnectorExpr& e, const FunctorKind& left, const FunctorKind& right, const Rel& r,
                    const FunctorTerm& a, const FunctorTerm& b, const EvalOptions& opts = {});

/// Label relation R̂ used for weak simulation over `labels`: (l,l) for l ≠ τ and (τ, eps).
LabelPairs weak_label_relation(const FinSet& labels, const std::string& tau);

}  // namespace hetsim
