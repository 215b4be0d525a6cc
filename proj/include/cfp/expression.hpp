#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cfp/error.hpp"

namespace cfp {

/// Compiled arithmetic expression in the variables x and y.
///
/// Grammar:
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('-' | '+') unary | primary
///   primary := number | variable | '(' expr ')'
///   variable:= 'x' | 'y' | 'x' digits | 'y' digits
///
/// Bare `x` and `y` denote the component being computed, so a scalar formula
/// applies componentwise; `x2` or `y1` address a fixed (1-based) component.
class Expression {
 public:
  static Expression parse(std::string_view text) {
    Expression e;
    e.source_ = std::string(text);
    Parser p{e.source_, 0, e};
    e.root_ = p.expr();
    p.skip_space();
    if (p.pos != e.source_.size()) p.fail("unexpected '" + std::string(1, e.source_[p.pos]) + "'");
    return e;
  }

  /// Evaluates component `component` (0-based) of the image of (x, y).
  double evaluate(std::span<const double> x, std::span<const double> y, std::size_t component = 0) const {
    return eval(root_, x, y, component);
  }

  const std::string& source() const noexcept { return source_; }

  /// Largest explicit component index used (xN / yN), 0 if none.
  std::size_t max_index() const noexcept { return max_index_; }

  friend bool operator==(const Expression& a, const Expression& b) { return a.source_ == b.source_; }

 private:
  enum class Op { number, var_x, var_y, neg, add, sub, mul, div };

  struct Node {
    Op op;
    double value = 0.0;
    std::size_t index = 0;  // 0 = current component, otherwise 1-based
    std::size_t lhs = 0;
    std::size_t rhs = 0;
  };

  struct Parser {
    std::string_view text;
    std::size_t pos;
    Expression& out;

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(1, pos + 1, what); }

    void skip_space() {
      while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool accept(char c) {
      skip_space();
      if (pos < text.size() && text[pos] == c) {
        ++pos;
        return true;
      }
      return false;
    }

    std::size_t add(Node n) {
      out.nodes_.push_back(n);
      return out.nodes_.size() - 1;
    }

    std::size_t expr() {
      std::size_t lhs = term();
      for (;;) {
        if (accept('+')) {
          lhs = add({Op::add, 0.0, 0, lhs, term()});
        } else if (accept('-')) {
          lhs = add({Op::sub, 0.0, 0, lhs, term()});
        } else {
          return lhs;
        }
      }
    }

    std::size_t term() {
      std::size_t lhs = unary();
      for (;;) {
        if (accept('*')) {
          lhs = add({Op::mul, 0.0, 0, lhs, unary()});
        } else if (accept('/')) {
          lhs = add({Op::div, 0.0, 0, lhs, unary()});
        } else {
          return lhs;
        }
      }
    }

    std::size_t unary() {
      if (accept('-')) return add({Op::neg, 0.0, 0, unary(), 0});
      if (accept('+')) return unary();
      return primary();
    }

    std::size_t primary() {
      skip_space();
      if (pos >= text.size()) fail("unexpected end of expression");
      const char c = text[pos];
      if (c == '(') {
        ++pos;
        const std::size_t inner = expr();
        if (!accept(')')) fail("expected ')'");
        return inner;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
      if (std::isalpha(static_cast<unsigned char>(c))) return variable();
      fail("unexpected '" + std::string(1, c) + "'");
    }

    std::size_t number() {
      const std::size_t start = pos;
      while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.')) ++pos;
      if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
        std::size_t look = pos + 1;
        if (look < text.size() && (text[look] == '+' || text[look] == '-')) ++look;
        if (look < text.size() && std::isdigit(static_cast<unsigned char>(text[look]))) {
          pos = look;
          while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        }
      }
      double value = 0.0;
      const auto res = std::from_chars(text.data() + start, text.data() + pos, value);
      if (res.ec != std::errc{} || res.ptr != text.data() + pos) {
        pos = start;
        fail("malformed number");
      }
      return add({Op::number, value, 0, 0, 0});
    }

    std::size_t variable() {
      const std::size_t start = pos;
      while (pos < text.size() && std::isalnum(static_cast<unsigned char>(text[pos]))) ++pos;
      const std::string_view name = text.substr(start, pos - start);
      const char head = name.front();
      if (head != 'x' && head != 'y') {
        pos = start;
        fail("unknown identifier '" + std::string(name) + "'");
      }
      std::size_t index = 0;
      if (name.size() > 1) {
        const auto digits = name.substr(1);
        const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), index);
        if (res.ec != std::errc{} || res.ptr != digits.data() + digits.size() || index == 0) {
          pos = start;
          fail("unknown identifier '" + std::string(name) + "'");
        }
      }
      out.max_index_ = std::max(out.max_index_, index);
      return add({head == 'x' ? Op::var_x : Op::var_y, 0.0, index, 0, 0});
    }
  };

  double eval(std::size_t id, std::span<const double> x, std::span<const double> y, std::size_t component) const {
    const Node& n = nodes_[id];
    switch (n.op) {
      case Op::number: return n.value;
      case Op::var_x: return x[n.index == 0 ? component : n.index - 1];
      case Op::var_y: return y[n.index == 0 ? component : n.index - 1];
      case Op::neg: return -eval(n.lhs, x, y, component);
      case Op::add: return eval(n.lhs, x, y, component) + eval(n.rhs, x, y, component);
      case Op::sub: return eval(n.lhs, x, y, component) - eval(n.rhs, x, y, component);
      case Op::mul: return eval(n.lhs, x, y, component) * eval(n.rhs, x, y, component);
      case Op::div: return eval(n.lhs, x, y, component) / eval(n.rhs, x, y, component);
    }
    return 0.0;
  }

  std::string source_{};
  std::vector<Node> nodes_{};
  std::size_t root_ = 0;
  std::size_t max_index_ = 0;
};

/// Parses a set literal "{e1, e2, ...}" into its member expressions. Column
/// numbers in errors refer to the whole literal.
inline std::vector<Expression> parse_expression_set(std::string_view text) {
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip();
  if (pos >= text.size() || text[pos] != '{') throw ParseError(1, pos + 1, "expected '{'");
  ++pos;
  std::vector<Expression> out;
  for (;;) {
    const std::size_t start = pos;
    int depth = 0;
    while (pos < text.size()) {
      const char c = text[pos];
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (depth == 0 && (c == ',' || c == '}')) break;
      ++pos;
    }
    if (pos >= text.size()) throw ParseError(1, pos + 1, "expected '}'");
    try {
      out.push_back(Expression::parse(text.substr(start, pos - start)));
    } catch (const ParseError& e) {
      throw ParseError(1, start + e.column(), std::string(e.what()).substr(std::string(e.what()).find(": ") + 2));
    }
    if (text[pos] == '}') {
      ++pos;
      break;
    }
    ++pos;
  }
  skip();
  if (pos != text.size()) throw ParseError(1, pos + 1, "trailing characters after '}'");
  return out;
}

}  // namespace cfp
