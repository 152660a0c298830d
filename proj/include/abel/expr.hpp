#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace abel {

/// Immutable scalar expression in the single variable `x`.
///
/// Grammar: numbers (decimal or scientific), `x`, the constants `pi` and `e`,
/// the functions exp/log/sqrt/abs, binary + - * / ^ and parentheses. `^` binds
/// tightest and is right-associative; unary minus binds tighter than * and /
/// but looser than `^`, so `-2^2` is -4 and `2^-1` is 0.5.
class Expr {
 public:
  struct Node;

  /// Parses `source`; throws ParseError carrying the byte offset of the problem.
  static Expr parse(std::string_view source);
  static Expr constant(double value);
  static Expr variable();

  /// Evaluates at `x`. Domain violations, division by zero and non-finite
  /// intermediate results raise abel::Error instead of producing NaN/inf.
  double eval(double x) const;
  double operator()(double x) const { return eval(x); }

  /// Fully parenthesised source text that re-parses to an equivalent tree.
  std::string to_string() const;

  /// True when the tree contains no reference to `x`.
  bool is_constant() const;

 private:
  explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;

  friend class Parser;
};

inline Expr parse(std::string_view source) { return Expr::parse(source); }
inline double eval(const Expr& e, double x) { return e.eval(x); }
inline std::string pretty(const Expr& e) { return e.to_string(); }

}  // namespace abel
