#pragma once

// The positive modal logic over a lambda relation: formulas, model checking
// over both sides, and synthesis of distinguishing formulas.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hetsim/connectors.hpp"
#include "hetsim/functors.hpp"
#include "hetsim/liftings.hpp"
#include "hetsim/simulation.hpp"

namespace hetsim {

/// Immutable formula with structural sharing.
class Formula {
 public:
  enum class Op { bot, top, conj, disj, mod };

  static Formula bot();
  static Formula top();
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  /// `<λ,μ>(args...)`; `pair` indexes the lambda relation the formula lives in.
  static Formula mod(std::size_t pair, Lifting left, Lifting right, std::vector<Formula> args);

  Op op() const { return node_->op; }
  /// Operands of conj/disj, or modal arguments.
  const std::vector<Formula>& kids() const { return node_->kids; }
  std::size_t pair() const { return node_->pair; }
  const Lifting& left_lifting() const { return *node_->left; }
  const Lifting& right_lifting() const { return *node_->right; }

  /// Modal depth.
  std::size_t depth() const;
  /// Fully parenthesized surface form, e.g. `<dia(a),dia(a)>(T & F)`.
  std::string str() const;

  /// Identity of the shared node, for memo tables.
  const void* id() const { return node_.get(); }

 private:
  struct Node {
    Op op;
    std::vector<Formula> kids;
    std::size_t pair = 0;
    std::shared_ptr<const Lifting> left;
    std::shared_ptr<const Lifting> right;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Grammar: `T | F | (φ & ψ) | (φ | ψ) | <lift,lift>φ | <lift,lift>(φ, ...)`.
/// Pairs are resolved against `lambda`; throws ParseError on syntax errors,
/// unknown pairs and arity mismatches.
Formula parse_formula(std::string_view text, const LambdaRel& lambda);

enum class Side { left, right };

/// States of `m` satisfying `f`, interpreting modalities by λ (left) or μ (right).
Subset formula_extension(const Formula& f, const Coalgebra& m, Side side, std::size_t arity_cap = 8);
bool eval_formula(const Formula& f, const Coalgebra& m, Side side, std::size_t x);

/// A formula true at x and false at y, or nullopt if x is similar to y.
/// The result is model-checked before it is returned; a failed check throws
/// std::logic_error.
std::optional<Formula> distinguishing_formula(const Coalgebra& c, const Coalgebra& d, const LambdaRel& lambda,
                                              std::size_t x, std::size_t y, const EvalOptions& opts = {});

/// Same, reusing a greatest simulation computed for the Kantorovich connector of `lambda`.
std::optional<Formula> distinguishing_formula(const Coalgebra& c, const Coalgebra& d, const LambdaRel& lambda,
                                              const SimResult& sim, std::size_t x, std::size_t y);

/// Builder that shares formulas between pairs of one simulation run.
class Distinguisher {
 public:
  Distinguisher(const Coalgebra& c, const Coalgebra& d, const LambdaRel& lambda, const SimResult& sim);
  /// nullopt if (x,y) is in the simulation.
  std::optional<Formula> formula(std::size_t x, std::size_t y);

 private:
  Formula build(std::size_t x, std::size_t y);

  const Coalgebra& c_;
  const Coalgebra& d_;
  const LambdaRel& lambda_;
  const SimResult& sim_;
  std::vector<const Removal*> entry_;           // per pair x*|D|+y
  std::vector<std::optional<Formula>> memo_;    // per pair
  std::vector<Rel> before_;                     // relation at the start of each round
};

}  // namespace hetsim
