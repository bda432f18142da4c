#pragma once

// Arithmetic expressions of the coordinates used in configuration files,
// e.g. "0.1 * sin(pi * x) * heaviside(t - 0.5)".
//
// Variables: x, y, t, nx, ny (outward normal on a boundary), pi.
// Operators: + - * / ^ and unary minus.
// Functions: sin cos tan exp log sqrt abs tanh heaviside (one argument),
//            min max pow atan2 (two arguments).

#include <memory>
#include <string>

namespace viscofrac {

struct ExprVars {
  double x = 0.0;
  double y = 0.0;
  double t = 0.0;
  double nx = 0.0;
  double ny = 0.0;
};

class Expression {
 public:
  Expression();  // the constant 0

  /// Throws std::invalid_argument with the offending position on syntax errors.
  static Expression parse(const std::string& text);
  static Expression constant(double value);

  double operator()(const ExprVars& vars) const;
  const std::string& source() const { return source_; }
  /// True if the expression does not reference any variable.
  bool is_constant() const;

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string source_;
};

}  // namespace viscofrac
