#pragma once

// Tiny arithmetic language in one variable `t`, used for the cumulative
// hazard K(t) of the additive hazard model, e.g. "t^2/2", "3*t", "t".
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | 't' | '(' expr ')'
//
// Evaluation runs in forward-mode dual numbers, so K'(t) comes for free.

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <string>
#include <utility>

#include "dgmd/error.hpp"

namespace dgmd::expr {

struct Dual {
  double value = 0.0;
  double slope = 0.0;
};

inline Dual operator+(Dual a, Dual b) { return {a.value + b.value, a.slope + b.slope}; }
inline Dual operator-(Dual a, Dual b) { return {a.value - b.value, a.slope - b.slope}; }
inline Dual operator*(Dual a, Dual b) {
  return {a.value * b.value, a.slope * b.value + a.value * b.slope};
}
inline Dual operator/(Dual a, Dual b) {
  return {a.value / b.value, (a.slope * b.value - a.value * b.slope) / (b.value * b.value)};
}
inline Dual pow(Dual a, Dual b) {
  const double v = std::pow(a.value, b.value);
  if (b.slope == 0.0) {
    const double d = b.value == 0.0 ? 0.0 : b.value * std::pow(a.value, b.value - 1.0);
    return {v, d * a.slope};
  }
  return {v, v * (b.slope * std::log(a.value) + b.value * a.slope / a.value)};
}

struct Node {
  enum class Kind { number, variable, add, sub, mul, div, pow, neg };
  Kind kind = Kind::number;
  double number = 0.0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;

  Dual eval(Dual t) const {
    switch (kind) {
      case Kind::number: return {number, 0.0};
      case Kind::variable: return t;
      case Kind::add: return lhs->eval(t) + rhs->eval(t);
      case Kind::sub: return lhs->eval(t) - rhs->eval(t);
      case Kind::mul: return lhs->eval(t) * rhs->eval(t);
      case Kind::div: return lhs->eval(t) / rhs->eval(t);
      case Kind::pow: return expr::pow(lhs->eval(t), rhs->eval(t));
      case Kind::neg: {
        const Dual x = lhs->eval(t);
        return {-x.value, -x.slope};
      }
    }
    return {};
  }
};

/// Parsed expression; cheap to copy and safe to share across threads.
class Expression {
 public:
  Expression() = default;
  Expression(std::string text, std::shared_ptr<const Node> root)
      : text_(std::move(text)), root_(std::move(root)) {}

  const std::string& text() const { return text_; }
  double value(double t) const { return root_->eval({t, 0.0}).value; }
  double derivative(double t) const { return root_->eval({t, 1.0}).slope; }

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

namespace detail {

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  std::shared_ptr<const Node> parse() {
    auto node = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return node;
  }

 private:
  using Ptr = std::shared_ptr<const Node>;

  static Ptr make(Node::Kind kind, Ptr lhs, Ptr rhs = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::ConfigError,
                "expression '" + text_ + "' column " + std::to_string(pos_ + 1) + ": " + msg);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Ptr expression() {
    Ptr node = term();
    for (;;) {
      if (accept('+')) {
        node = make(Node::Kind::add, node, term());
      } else if (accept('-')) {
        node = make(Node::Kind::sub, node, term());
      } else {
        return node;
      }
    }
  }

  Ptr term() {
    Ptr node = unary();
    for (;;) {
      if (accept('*')) {
        node = make(Node::Kind::mul, node, unary());
      } else if (accept('/')) {
        node = make(Node::Kind::div, node, unary());
      } else {
        return node;
      }
    }
  }

  Ptr unary() {
    if (accept('-')) return make(Node::Kind::neg, unary());
    return power();
  }

  Ptr power() {
    Ptr base = primary();
    if (accept('^')) return make(Node::Kind::pow, base, unary());
    return base;
  }

  Ptr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Ptr inner = expression();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (c == 't') {
      ++pos_;
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::variable;
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = text_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::number;
      n->number = v;
      return n;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Expression parse(const std::string& text) {
  detail::Parser p(text);
  return Expression(text, p.parse());
}

}  // namespace dgmd::expr
