#include "padicrd/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace padicrd::expr {

ExprPtr constant(double c) { return std::make_shared<const Node>(Node{Kind::constant, c, {}, 0, {}, {}}); }

ExprPtr parameter(std::string name) {
  return std::make_shared<const Node>(Node{Kind::parameter, 0.0, std::move(name), 0, {}, {}});
}

ExprPtr variable(std::string name) {
  return std::make_shared<const Node>(Node{Kind::variable, 0.0, std::move(name), 0, {}, {}});
}

ExprPtr binary(Kind k, ExprPtr a, ExprPtr b) {
  return std::make_shared<const Node>(Node{k, 0.0, {}, 0, std::move(a), std::move(b)});
}

ExprPtr power(ExprPtr base, int exponent) {
  return std::make_shared<const Node>(Node{Kind::pow, 0.0, {}, exponent, std::move(base), {}});
}

ExprPtr negate(ExprPtr a) {
  return std::make_shared<const Node>(Node{Kind::neg, 0.0, {}, 0, std::move(a), {}});
}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  ExprPtr run() {
    auto e = expression();
    skip_ws();
    if (pos_ != s_.size()) fail("operator or end of input");
    return e;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& expected) const {
    std::string found = pos_ < s_.size() ? std::string("'") + s_[pos_] + "'" : "end of input";
    throw ParseError(pos_, expected,
                     "syntax error at position " + std::to_string(pos_) + ": expected " + expected +
                         ", found " + found);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprPtr expression() {
    auto lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = binary(Kind::add, lhs, term());
      } else if (accept('-')) {
        lhs = binary(Kind::sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr term() {
    auto lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = binary(Kind::mul, lhs, unary());
      } else if (accept('/')) {
        lhs = binary(Kind::div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr unary() {
    if (accept('-')) return negate(unary());
    return power_expr();
  }

  ExprPtr power_expr() {
    auto base = primary();
    if (accept('^')) return power(base, integer_exponent());
    return base;
  }

  int integer_exponent() {
    skip_ws();
    const bool negative = accept('-');
    skip_ws();
    const auto start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("integer exponent");
    if (pos_ - start > 6) {
      pos_ = start;
      fail("integer exponent of at most 6 digits");
    }
    long long n = std::stoll(s_.substr(start, pos_ - start));
    if (accept('^')) {
      // right-associative chain of integer literals folds to one exponent
      const int rhs = integer_exponent();
      if (rhs < 0) fail("non-negative exponent in an exponent chain");
      long long folded = 1;
      for (int i = 0; i < rhs; ++i) {
        folded *= n;
        if (std::llabs(folded) > 1'000'000) fail("exponent chain small enough to fold");
      }
      n = folded;
    }
    return static_cast<int>(negative ? -n : n);
  }

  ExprPtr primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("number, identifier or '('");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = expression();
      if (!accept(')')) fail("')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const auto start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
        ++pos_;
      }
      auto name = s_.substr(start, pos_ - start);
      if (name == "u" || name == "v") return variable(std::move(name));
      return parameter(std::move(name));
    }
    fail("number, identifier or '('");
  }

  ExprPtr number() {
    const auto start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      auto save = pos_++;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      const auto digits = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (digits == pos_) pos_ = save;  // not an exponent; 'e' starts something else
    }
    const auto text = s_.substr(start, pos_ - start);
    if (text == ".") {
      pos_ = start;
      fail("number");
    }
    return constant(std::strtod(text.c_str(), nullptr));
  }
};

int precedence(const Node& n) {
  switch (n.kind) {
    case Kind::add:
    case Kind::sub: return 1;
    case Kind::mul:
    case Kind::div: return 2;
    case Kind::neg: return 3;
    case Kind::pow: return 4;
    default: return 5;
  }
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  // Shortest form that still round-trips keeps printed formulas readable.
  for (int digits = 1; digits < 17; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return s;
}

void print_into(const Node& n, std::string& out);

void print_child(const Node& child, bool parens, std::string& out) {
  if (parens) out += '(';
  print_into(child, out);
  if (parens) out += ')';
}

void print_into(const Node& n, std::string& out) {
  switch (n.kind) {
    case Kind::constant:
      if (n.value < 0) {
        out += "(" + format_number(n.value) + ")";
      } else {
        out += format_number(n.value);
      }
      return;
    case Kind::parameter:
    case Kind::variable: out += n.name; return;
    case Kind::add:
    case Kind::sub:
    case Kind::mul:
    case Kind::div: {
      const int p = precedence(n);
      print_child(*n.lhs, precedence(*n.lhs) < p, out);
      out += n.kind == Kind::add ? "+" : n.kind == Kind::sub ? "-" : n.kind == Kind::mul ? "*" : "/";
      print_child(*n.rhs, precedence(*n.rhs) <= p, out);
      return;
    }
    case Kind::neg:
      out += '-';
      print_child(*n.lhs, precedence(*n.lhs) < 3, out);
      return;
    case Kind::pow:
      print_child(*n.lhs, precedence(*n.lhs) < 5, out);
      out += '^';
      out += std::to_string(n.exponent);
      return;
  }
}

bool is_const(const ExprPtr& e, double c) { return e->kind == Kind::constant && e->value == c; }
bool is_const(const ExprPtr& e) { return e->kind == Kind::constant; }

}  // namespace

ExprPtr parse(const std::string& text) { return Parser(text).run(); }

std::string print(const ExprPtr& e) {
  std::string out;
  print_into(*e, out);
  return out;
}

bool equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Kind::constant: return a->value == b->value;
    case Kind::parameter:
    case Kind::variable: return a->name == b->name;
    case Kind::pow: return a->exponent == b->exponent && equal(a->lhs, b->lhs);
    case Kind::neg: return equal(a->lhs, b->lhs);
    default: return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
  }
}

std::set<std::string> parameters(const ExprPtr& e) {
  std::set<std::string> out;
  auto walk = [&](auto&& self, const ExprPtr& n) -> void {
    if (!n) return;
    if (n->kind == Kind::parameter) out.insert(n->name);
    self(self, n->lhs);
    self(self, n->rhs);
  };
  walk(walk, e);
  return out;
}

ExprPtr bind(const ExprPtr& e, const std::map<std::string, double>& params) {
  switch (e->kind) {
    case Kind::constant:
    case Kind::variable: return e;
    case Kind::parameter: {
      auto it = params.find(e->name);
      if (it == params.end()) throw ConfigError("unknown identifier \"" + e->name + "\"");
      return constant(it->second);
    }
    case Kind::pow: return power(bind(e->lhs, params), e->exponent);
    case Kind::neg: return negate(bind(e->lhs, params));
    default: return binary(e->kind, bind(e->lhs, params), bind(e->rhs, params));
  }
}

ExprPtr simplify(const ExprPtr& e) {
  switch (e->kind) {
    case Kind::constant:
    case Kind::parameter:
    case Kind::variable: return e;
    case Kind::neg: {
      auto a = simplify(e->lhs);
      if (is_const(a)) return constant(-a->value);
      if (a->kind == Kind::neg) return a->lhs;
      return negate(a);
    }
    case Kind::pow: {
      auto b = simplify(e->lhs);
      if (e->exponent == 0) return constant(1.0);
      if (e->exponent == 1) return b;
      if (is_const(b)) return constant(std::pow(b->value, e->exponent));
      return power(b, e->exponent);
    }
    default: break;
  }
  auto a = simplify(e->lhs);
  auto b = simplify(e->rhs);
  switch (e->kind) {
    case Kind::add:
      if (is_const(a) && is_const(b)) return constant(a->value + b->value);
      if (is_const(a, 0.0)) return b;
      if (is_const(b, 0.0)) return a;
      break;
    case Kind::sub:
      if (is_const(a) && is_const(b)) return constant(a->value - b->value);
      if (is_const(b, 0.0)) return a;
      if (is_const(a, 0.0)) return simplify(negate(b));
      break;
    case Kind::mul:
      if (is_const(a) && is_const(b)) return constant(a->value * b->value);
      if (is_const(a, 0.0) || is_const(b, 0.0)) return constant(0.0);
      if (is_const(a, 1.0)) return b;
      if (is_const(b, 1.0)) return a;
      if (is_const(a) && b->kind == Kind::mul && is_const(b->lhs)) {
        return simplify(binary(Kind::mul, constant(a->value * b->lhs->value), b->rhs));
      }
      break;
    case Kind::div:
      if (is_const(a) && is_const(b) && b->value != 0.0) return constant(a->value / b->value);
      if (is_const(a, 0.0)) return constant(0.0);
      if (is_const(b, 1.0)) return a;
      break;
    default: break;
  }
  return binary(e->kind, a, b);
}

namespace {

ExprPtr derive(const ExprPtr& e, const std::string& var) {
  switch (e->kind) {
    case Kind::constant:
    case Kind::parameter: return constant(0.0);
    case Kind::variable: return constant(e->name == var ? 1.0 : 0.0);
    case Kind::add:
    case Kind::sub: return binary(e->kind, derive(e->lhs, var), derive(e->rhs, var));
    case Kind::mul:
      return binary(Kind::add, binary(Kind::mul, derive(e->lhs, var), e->rhs),
                    binary(Kind::mul, e->lhs, derive(e->rhs, var)));
    case Kind::div:
      return binary(Kind::div,
                    binary(Kind::sub, binary(Kind::mul, derive(e->lhs, var), e->rhs),
                           binary(Kind::mul, e->lhs, derive(e->rhs, var))),
                    power(e->rhs, 2));
    case Kind::pow:
      if (e->exponent == 0) return constant(0.0);
      return binary(Kind::mul,
                    binary(Kind::mul, constant(e->exponent), power(e->lhs, e->exponent - 1)),
                    derive(e->lhs, var));
    case Kind::neg: return negate(derive(e->lhs, var));
  }
  return constant(0.0);
}

}  // namespace

ExprPtr differentiate(const ExprPtr& e, const std::string& var) { return simplify(derive(e, var)); }

double evaluate_unchecked(const Node& e, double u, double v) {
  switch (e.kind) {
    case Kind::constant: return e.value;
    case Kind::variable: return e.name == "u" ? u : v;
    case Kind::parameter: return std::numeric_limits<double>::quiet_NaN();
    case Kind::add: return evaluate_unchecked(*e.lhs, u, v) + evaluate_unchecked(*e.rhs, u, v);
    case Kind::sub: return evaluate_unchecked(*e.lhs, u, v) - evaluate_unchecked(*e.rhs, u, v);
    case Kind::mul: return evaluate_unchecked(*e.lhs, u, v) * evaluate_unchecked(*e.rhs, u, v);
    case Kind::div: return evaluate_unchecked(*e.lhs, u, v) / evaluate_unchecked(*e.rhs, u, v);
    case Kind::pow: return std::pow(evaluate_unchecked(*e.lhs, u, v), e.exponent);
    case Kind::neg: return -evaluate_unchecked(*e.lhs, u, v);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double evaluate(const ExprPtr& e, double u, double v) {
  auto check = [&](auto&& self, const Node& n) -> double {
    switch (n.kind) {
      case Kind::parameter: throw NumericalError("unbound parameter \"" + n.name + "\"");
      case Kind::div: {
        const double num = self(self, *n.lhs);
        const double den = self(self, *n.rhs);
        if (den == 0.0) throw NumericalError("division by zero");
        return num / den;
      }
      case Kind::pow: {
        const double b = self(self, *n.lhs);
        if (b == 0.0 && n.exponent < 0) throw NumericalError("division by zero");
        return std::pow(b, n.exponent);
      }
      case Kind::add: return self(self, *n.lhs) + self(self, *n.rhs);
      case Kind::sub: return self(self, *n.lhs) - self(self, *n.rhs);
      case Kind::mul: return self(self, *n.lhs) * self(self, *n.rhs);
      case Kind::neg: return -self(self, *n.lhs);
      default: return evaluate_unchecked(n, u, v);
    }
  };
  return check(check, *e);
}

}  // namespace padicrd::expr
