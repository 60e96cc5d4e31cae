#pragma once

#include <memory>
#include <string>

#include "sgbc/random_fields.hpp"

// Small arithmetic grammar for spatial data in configuration files:
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := ('+' | '-') unary | power
//   power  := atom ('^' unary)?          right associative
//   atom   := number | name | name '(' expr ')' | '(' expr ')'
//
// Names: x (alias of x1), x1, x2, pi, e. Functions: sin, cos, tan, exp, log,
// sqrt, abs.

namespace sgbc {

class Expression {
 public:
  /// Throws ConfigError with the offending position on a syntax error.
  explicit Expression(const std::string& text);

  double operator()(const Point& x) const;
  const std::string& text() const { return text_; }
  ScalarField function() const;

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace sgbc
