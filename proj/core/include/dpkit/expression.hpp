#pragma once

#include <memory>
#include <string>

namespace dpkit {

/// Values of the identifiers an expression may reference.
struct ExpressionVariables {
  double x = 0.0;
  double y = 0.0;
  double s = 0.0;
  double xi1 = 0.0;
  double xi2 = 0.0;
};

/// Arithmetic expression over x, y, s, xi1, xi2 and the constant pi.
///
/// Grammar: numbers, + - * / ^ (right associative), unary minus, parentheses and the
/// functions sin, cos, exp, abs, log. Parse errors throw InvalidInput with the offending
/// position. Evaluation is thread-safe.
class Expression {
 public:
  static Expression parse(const std::string& text);

  double operator()(const ExpressionVariables& v) const;
  const std::string& text() const { return text_; }

  /// True if the expression references the given identifier.
  bool uses(const std::string& identifier) const;

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace dpkit
