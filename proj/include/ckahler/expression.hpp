#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ckahler/jet.hpp"
#include "ckahler/rational.hpp"

namespace ckahler {

struct SourceSpan {
  int line = 1;
  int column = 1;
  int length = 0;
};

/// Identifiers an expression may use. Coordinates take precedence when a
/// name is declared twice (the loader rejects that case).
struct Identifiers {
  std::vector<std::string> coordinates;
  std::vector<std::string> parameters;
};

/// Immutable AST node. Literals are non-negative; a leading minus is a
/// Negate node.
class Expression {
 public:
  enum class Kind { Literal, Coordinate, Parameter, Negate, Add, Sub, Mul, Div, Pow };

  static Expression literal(Rational value, SourceSpan span = {});
  static Expression coordinate(int index, SourceSpan span = {});
  static Expression parameter(int index, SourceSpan span = {});
  static Expression negate(Expression operand, SourceSpan span = {});
  static Expression binary(Kind kind, Expression lhs, Expression rhs, SourceSpan span = {});
  static Expression power(Expression base, unsigned exponent, SourceSpan span = {});

  Kind kind() const { return node_->kind; }
  const Rational& value() const { return node_->value; }
  int index() const { return node_->index; }
  unsigned exponent() const { return node_->exponent; }
  const Expression& lhs() const { return node_->children.at(0); }
  const Expression& rhs() const { return node_->children.at(1); }
  const SourceSpan& span() const { return node_->span; }
  /// True if a division occurs anywhere below; such expressions need a
  /// unit check on the denominator when turned into jets.
  bool has_division() const { return node_->has_division; }

  /// Structural equality, ignoring source spans.
  friend bool operator==(const Expression& a, const Expression& b);

 private:
  struct Node {
    Kind kind = Kind::Literal;
    Rational value;
    int index = 0;
    unsigned exponent = 0;
    std::vector<Expression> children;
    SourceSpan span;
    bool has_division = false;
  };
  explicit Expression(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

struct ParseOptions {
  /// Decimal literals such as 0.25 are accepted only for the float backend.
  bool allow_decimals = false;
  /// Line reported for errors, for expressions embedded in a larger file.
  int line = 1;
};

/// expr := term (('+'|'-') term)*; term := factor (('*'|'/') factor)*;
/// factor := base ('^' uint)?; base := rational | ident | '(' expr ')' | '-' base.
/// A rational literal is digits, optionally followed directly by '/' and digits.
/// Throws SyntaxError or UndeclaredIdentifier with line and column.
Expression parse_expression(std::string_view text, const Identifiers& ids, const ParseOptions& options = {});

/// Canonical text that parses back to the same AST.
std::string to_string(const Expression& e, const Identifiers& ids);

/// Jet of the expression at the space's base point. `parameters[i]` is the
/// value substituted for parameter i (a ParamPoly variable in exact mode).
template <class S>
Jet<S> to_jet(const Expression& e, const JetSpacePtr& space, int order, std::span<const S> parameters);

extern template Jet<ParamPoly> to_jet(const Expression&, const JetSpacePtr&, int, std::span<const ParamPoly>);
extern template Jet<double> to_jet(const Expression&, const JetSpacePtr&, int, std::span<const double>);

}  // namespace ckahler
