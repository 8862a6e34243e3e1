#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>

#include "padicrd/errors.hpp"

namespace padicrd::expr {

// Grammar (standard precedence, '^' binds tighter than unary minus):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' integer)?       integer := '-'? digits ('^' integer)?
//   primary := number | identifier | '(' expr ')'
//
// The identifiers u and v are the two species; any other identifier is a
// named parameter. Exponents are integer literals.

enum class Kind { constant, parameter, variable, add, sub, mul, div, pow, neg };

struct Node;
using ExprPtr = std::shared_ptr<const Node>;

struct Node {
  Kind kind;
  double value = 0.0;  // constant
  std::string name;    // parameter / variable
  int exponent = 0;    // pow
  ExprPtr lhs;         // binary operands, pow base, neg operand
  ExprPtr rhs;
};

class ParseError : public ConfigError {
 public:
  ParseError(std::size_t position, std::string expected, const std::string& message)
      : ConfigError(message), position_(position), expected_(std::move(expected)) {}
  std::size_t position() const { return position_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

ExprPtr constant(double c);
ExprPtr parameter(std::string name);
ExprPtr variable(std::string name);
ExprPtr binary(Kind k, ExprPtr a, ExprPtr b);
ExprPtr power(ExprPtr base, int exponent);
ExprPtr negate(ExprPtr a);

ExprPtr parse(const std::string& text);

// Minimal-parenthesis rendering; parse(print(e)) reproduces e node for node
// when e contains no negative constants.
std::string print(const ExprPtr& e);

bool equal(const ExprPtr& a, const ExprPtr& b);

// Identifiers other than u and v.
std::set<std::string> parameters(const ExprPtr& e);

// Replace parameters by constants. Throws ConfigError on an unknown identifier.
ExprPtr bind(const ExprPtr& e, const std::map<std::string, double>& params);

// d e / d var, simplified.
ExprPtr differentiate(const ExprPtr& e, const std::string& var);

// Constant folding and the identities x+0, x*1, x*0, x^1, x^0, --x.
ExprPtr simplify(const ExprPtr& e);

// IEEE evaluation: division by zero yields inf/nan. Parameters must be bound.
double evaluate_unchecked(const Node& e, double u, double v);

// As above but throws NumericalError on division by zero or an unbound parameter.
double evaluate(const ExprPtr& e, double u, double v);

}  // namespace padicrd::expr
