/**
 * @file expr.hpp
 * @brief Arithmetic expression trees over state variables x1..xn and
 *        perturbation variables y1..ym, with symbolic differentiation,
 *        a small text grammar, and a linear evaluation tape.
 *
 * Grammar (whitespace ignored):
 *
 *   expr    := term (('+' | '-') term)*
 *   term    := unary (('*' | '/') unary)*
 *   unary   := '-' unary | '+' unary | primary
 *   primary := number | 'x' index | 'y' index | '(' expr ')'
 *   number  := digits ['.' digits] [('e'|'E') ['+'|'-'] digits]
 *
 * Indices are 1-based. Rational literals are written as quotients (`57/10`);
 * decimal literals that are not exactly representable become one-ulp
 * enclosures of their exact value.
 */
#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "incluso/errors.hpp"
#include "incluso/interval.hpp"

namespace incluso {

enum class OpKind : std::uint8_t { constant, var_x, var_y, add, sub, mul, div, neg };

struct ExprNode {
  OpKind kind = OpKind::constant;
  Interval value{};
  std::size_t index = 0;
  std::shared_ptr<const ExprNode> lhs;
  std::shared_ptr<const ExprNode> rhs;
};

/// Immutable expression handle; copies share structure.
class Expr {
 public:
  Expr() : Expr(constant(Interval(0.0))) {}

  [[nodiscard]] static Expr constant(const Interval& v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = OpKind::constant;
    n->value = v;
    return Expr(std::move(n));
  }
  [[nodiscard]] static Expr x(std::size_t i) { return variable(OpKind::var_x, i); }
  [[nodiscard]] static Expr y(std::size_t j) { return variable(OpKind::var_y, j); }

  [[nodiscard]] const ExprNode& node() const noexcept { return *node_; }
  [[nodiscard]] const std::shared_ptr<const ExprNode>& ptr() const noexcept { return node_; }

  [[nodiscard]] bool is_constant() const noexcept { return node_->kind == OpKind::constant; }
  [[nodiscard]] bool is_constant(double v) const noexcept {
    return is_constant() && node_->value.lo() == v && node_->value.hi() == v;
  }

  friend Expr operator+(const Expr& a, const Expr& b) {
    if (a.is_constant(0.0)) return b;
    if (b.is_constant(0.0)) return a;
    if (a.is_constant() && b.is_constant()) return constant(a.node().value + b.node().value);
    return binary(OpKind::add, a, b);
  }
  friend Expr operator-(const Expr& a, const Expr& b) {
    if (b.is_constant(0.0)) return a;
    if (a.is_constant(0.0)) return -b;
    if (a.is_constant() && b.is_constant()) return constant(a.node().value - b.node().value);
    return binary(OpKind::sub, a, b);
  }
  friend Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_constant(0.0) || b.is_constant(0.0)) return constant(Interval(0.0));
    if (a.is_constant(1.0)) return b;
    if (b.is_constant(1.0)) return a;
    if (a.is_constant() && b.is_constant()) return constant(a.node().value * b.node().value);
    return binary(OpKind::mul, a, b);
  }
  friend Expr operator/(const Expr& a, const Expr& b) {
    if (b.is_constant(1.0)) return a;
    if (a.is_constant(0.0) && !(b.is_constant() && contains_zero(b.node().value))) return a;
    if (a.is_constant() && b.is_constant()) return constant(a.node().value / b.node().value);
    return binary(OpKind::div, a, b);
  }
  friend Expr operator-(const Expr& a) {
    if (a.is_constant()) return constant(-a.node().value);
    auto n = std::make_shared<ExprNode>();
    n->kind = OpKind::neg;
    n->lhs = a.node_;
    return Expr(std::move(n));
  }

 private:
  explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}

  static Expr variable(OpKind k, std::size_t i) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->index = i;
    return Expr(std::move(n));
  }
  static Expr binary(OpKind k, const Expr& a, const Expr& b) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->lhs = a.node_;
    n->rhs = b.node_;
    return Expr(std::move(n));
  }
  static Expr wrap(std::shared_ptr<const ExprNode> n) { return Expr(std::move(n)); }

  friend inline Expr derivative(const Expr& e, OpKind var_kind, std::size_t index);

  std::shared_ptr<const ExprNode> node_;
};

/// Symbolic partial derivative with respect to x_index (var_kind = var_x) or y_index (var_y).
[[nodiscard]] inline Expr derivative(const Expr& e, OpKind var_kind, std::size_t index) {
  const ExprNode& n = e.node();
  auto sub = [](const std::shared_ptr<const ExprNode>& p) { return Expr::wrap(p); };
  switch (n.kind) {
    case OpKind::constant:
      return Expr::constant(Interval(0.0));
    case OpKind::var_x:
    case OpKind::var_y:
      return Expr::constant(Interval((n.kind == var_kind && n.index == index) ? 1.0 : 0.0));
    case OpKind::add:
      return derivative(sub(n.lhs), var_kind, index) + derivative(sub(n.rhs), var_kind, index);
    case OpKind::sub:
      return derivative(sub(n.lhs), var_kind, index) - derivative(sub(n.rhs), var_kind, index);
    case OpKind::neg:
      return -derivative(sub(n.lhs), var_kind, index);
    case OpKind::mul: {
      const Expr a = sub(n.lhs);
      const Expr b = sub(n.rhs);
      return derivative(a, var_kind, index) * b + a * derivative(b, var_kind, index);
    }
    case OpKind::div: {
      const Expr a = sub(n.lhs);
      const Expr b = sub(n.rhs);
      const Expr da = derivative(a, var_kind, index);
      const Expr db = derivative(b, var_kind, index);
      if (db.is_constant(0.0)) return da / b;
      return (da * b - a * db) / (b * b);
    }
  }
  return Expr::constant(Interval(0.0));
}

/// Largest x and y index (1-based count) referenced by `e`.
inline void variable_extent(const Expr& e, std::size_t& nx, std::size_t& ny) {
  const ExprNode& n = e.node();
  std::vector<const ExprNode*> stack{&n};
  while (!stack.empty()) {
    const ExprNode* p = stack.back();
    stack.pop_back();
    if (p->kind == OpKind::var_x) nx = std::max(nx, p->index + 1);
    if (p->kind == OpKind::var_y) ny = std::max(ny, p->index + 1);
    if (p->lhs) stack.push_back(p->lhs.get());
    if (p->rhs) stack.push_back(p->rhs.get());
  }
}

// ---- parsing -----------------------------------------------------------------

namespace detail {

// Exact value of a decimal literal when representable, else a one-ulp enclosure.
[[nodiscard]] inline Interval decimal_literal(std::string_view text) {
  const std::string s(text);
  const double v = std::strtod(s.c_str(), nullptr);
  if (!std::isfinite(v)) throw ParseError("numeric literal out of range", 0);

  // Collect significand digits and the decimal exponent.
  std::uint64_t digits = 0;
  int ndigits = 0;
  int exp10 = 0;
  bool overflow = false;
  bool after_point = false;
  std::size_t i = 0;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '.') {
      after_point = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) break;
    if (digits == 0 && c == '0') {
      if (after_point) --exp10;
      continue;
    }
    if (ndigits >= 18) {
      if (c != '0') overflow = true;
      if (!after_point) ++exp10;
      continue;
    }
    digits = digits * 10 + static_cast<std::uint64_t>(c - '0');
    ++ndigits;
    if (after_point) --exp10;
  }
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) exp10 += std::atoi(s.c_str() + i + 1);

  bool exact = !overflow;
  if (exact && digits != 0) {
    if (exp10 >= 0) {
      // digits * 10^exp10 must be an integer below 2^53.
      double p = static_cast<double>(digits);
      for (int k = 0; k < exp10 && exact; ++k) {
        p *= 10.0;
        if (p >= 0x1p53) exact = false;
      }
      if (static_cast<double>(digits) >= 0x1p53) exact = false;
    } else {
      // digits / 10^k exact iff 5^k divides digits and the quotient fits in 53 bits.
      std::uint64_t d = digits;
      for (int k = 0; k < -exp10 && exact; ++k) {
        if (d % 5 != 0) exact = false;
        d /= 5;
      }
      if (exact && d >= (std::uint64_t{1} << 53)) exact = false;
    }
  }
  if (exact) return Interval(v);
  return Interval(rounding::next_down(v), rounding::next_up(v));
}

class Parser {
 public:
  Parser(std::string_view text, std::size_t max_x, std::size_t max_y) : s_(text), max_x_(max_x), max_y_(max_y) {}

  Expr parse() {
    Expr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr expr() {
    Expr lhs = term();
    while (true) {
      if (accept('+')) {
        lhs = lhs + term();
      } else if (accept('-')) {
        lhs = lhs - term();
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = unary();
    while (true) {
      if (accept('*')) {
        lhs = lhs * unary();
      } else if (accept('/')) {
        const std::size_t at = pos_;
        Expr rhs = unary();
        if (rhs.is_constant() && contains_zero(rhs.node().value)) {
          pos_ = at;
          fail("division by zero constant");
        }
        lhs = lhs / rhs;
      } else {
        return lhs;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return primary();
  }

  Expr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (c == 'x' || c == 'y') {
      const std::size_t at = pos_;
      ++pos_;
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected variable index");
      const std::size_t idx = std::stoul(std::string(s_.substr(start, pos_ - start)));
      const std::size_t limit = c == 'x' ? max_x_ : max_y_;
      if (idx == 0 || idx > limit) {
        pos_ = at;
        fail(std::string("variable index out of range for '") + c + "'");
      }
      return c == 'x' ? Expr::x(idx - 1) : Expr::y(idx - 1);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    fail(std::string("unexpected character '") + c + "'");
  }

  Expr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      const std::size_t b = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return pos_ - b;
    };
    std::size_t n = digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) fail("malformed number");
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail("malformed exponent");
    }
    try {
      return Expr::constant(decimal_literal(s_.substr(start, pos_ - start)));
    } catch (const ParseError&) {
      pos_ = start;
      fail("numeric literal out of range");
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t max_x_;
  std::size_t max_y_;
};

}  // namespace detail

/// Parse an expression over x1..x<max_x> and y1..y<max_y>; throws ParseError.
[[nodiscard]] inline Expr parse_expression(std::string_view text, std::size_t max_x, std::size_t max_y) {
  return detail::Parser(text, max_x, max_y).parse();
}

// ---- evaluation tape -----------------------------------------------------------

/// Linearised DAG of a list of expressions; shared subtrees are evaluated once.
class Tape {
 public:
  struct Instr {
    OpKind kind;
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    std::size_t index = 0;
    Interval value{};
  };

  Tape() = default;

  explicit Tape(std::span<const Expr> outputs) {
    std::unordered_map<const ExprNode*, std::uint32_t> seen;
    outputs_.reserve(outputs.size());
    for (const auto& e : outputs) outputs_.push_back(emit(e.node(), seen));
  }

  [[nodiscard]] std::size_t size() const noexcept { return code_.size(); }
  [[nodiscard]] std::size_t outputs() const noexcept { return outputs_.size(); }
  [[nodiscard]] std::span<const Instr> code() const noexcept { return code_; }
  [[nodiscard]] std::uint32_t output_slot(std::size_t i) const { return outputs_[i]; }

  /// Evaluate every output with scalar type T (Interval or double-like with
  /// a constructor from Interval via `lift`).
  template <class T, class Lift>
  [[nodiscard]] std::vector<T> evaluate(std::span<const T> x, std::span<const T> y, Lift&& lift) const {
    std::vector<T> slot(code_.size());
    for (std::size_t k = 0; k < code_.size(); ++k) {
      const Instr& in = code_[k];
      switch (in.kind) {
        case OpKind::constant:
          slot[k] = lift(in.value);
          break;
        case OpKind::var_x:
          slot[k] = x[in.index];
          break;
        case OpKind::var_y:
          slot[k] = y[in.index];
          break;
        case OpKind::add:
          slot[k] = slot[in.a] + slot[in.b];
          break;
        case OpKind::sub:
          slot[k] = slot[in.a] - slot[in.b];
          break;
        case OpKind::mul:
          slot[k] = slot[in.a] * slot[in.b];
          break;
        case OpKind::div:
          slot[k] = slot[in.a] / slot[in.b];
          break;
        case OpKind::neg:
          slot[k] = -slot[in.a];
          break;
      }
    }
    std::vector<T> out;
    out.reserve(outputs_.size());
    for (auto o : outputs_) out.push_back(slot[o]);
    return out;
  }

  [[nodiscard]] std::vector<Interval> evaluate(std::span<const Interval> x, std::span<const Interval> y) const {
    return evaluate<Interval>(x, y, [](const Interval& v) { return v; });
  }

 private:
  std::uint32_t emit(const ExprNode& n, std::unordered_map<const ExprNode*, std::uint32_t>& seen) {
    if (auto it = seen.find(&n); it != seen.end()) return it->second;
    Instr in{n.kind};
    in.index = n.index;
    in.value = n.value;
    if (n.lhs) in.a = emit(*n.lhs, seen);
    if (n.rhs) in.b = emit(*n.rhs, seen);
    code_.push_back(in);
    const auto slot = static_cast<std::uint32_t>(code_.size() - 1);
    seen.emplace(&n, slot);
    return slot;
  }

  std::vector<Instr> code_;
  std::vector<std::uint32_t> outputs_;
};

}  // namespace incluso
