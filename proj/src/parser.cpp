#include "jetsym/parser.hpp"

#include <cctype>
#include <optional>

namespace jetsym {

namespace {

class Parser {
 public:
  Parser(std::string_view text, const Chart& chart) : text_(text), chart_(chart) {}

  RatExpr parse_all() {
    RatExpr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  bool digit_at(std::size_t p) const {
    return p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]));
  }

  mpz_class integer() {
    skip_ws();
    if (!digit_at(pos_)) fail("expected integer");
    const std::size_t start = pos_;
    while (digit_at(pos_)) ++pos_;
    return mpz_class(std::string(text_.substr(start, pos_ - start)));
  }

  RatExpr expr() {
    RatExpr value = term();
    while (true) {
      if (accept('+')) value += term();
      else if (accept('-')) value -= term();
      else return value;
    }
  }

  RatExpr term() {
    RatExpr value = factor_value();
    while (true) {
      if (accept('*')) {
        value *= factor_value();
      } else if (accept('/')) {
        const std::size_t at = pos_;
        if (auto inv = inverse_of_product()) {
          value *= *inv;
          continue;
        }
        auto [base, k] = factor();
        if (base.is_zero()) {
          pos_ = at;
          fail("division by zero");
        }
        // keep the factored shape of the divisor: a / b^k = a * (1/b)^k
        value *= base.pow(-k);
      } else {
        return value;
      }
    }
  }

  // "(f1^k1*f2^k2*...)" as a divisor: the product of the inverse powers, so the
  // factored shape survives. nullopt (position unchanged) for any other divisor.
  std::optional<RatExpr> inverse_of_product() {
    const std::size_t start = pos_;
    if (!accept('(')) return std::nullopt;
    try {
      RatExpr out(1);
      do {
        auto [base, k] = factor();
        if (base.is_zero()) throw ParseError("division by zero", pos_);
        out *= base.pow(-k);
      } while (accept('*'));
      if (accept(')') && !peek('^')) return out;
    } catch (const ParseError&) {
    }
    pos_ = start;
    return std::nullopt;
  }

  RatExpr factor_value() {
    const std::size_t at = pos_;
    auto [base, k] = factor();
    if (k < 0 && base.is_zero()) {
      pos_ = at;
      fail("negative power of zero");
    }
    return base.pow(k);
  }

  std::pair<RatExpr, int> factor() {
    if (accept('-')) {
      auto [b, k] = factor();
      return {-b.pow(k), 1};
    }
    if (accept('+')) return factor();
    RatExpr b = base();
    if (!accept('^')) return {b, 1};
    skip_ws();
    bool negative = false;
    if (accept('-')) negative = true;
    else accept('+');
    skip_ws();
    if (!digit_at(pos_)) fail("non-integer exponent");
    mpz_class e = integer();
    skip_ws();
    if (pos_ < text_.size() && (text_[pos_] == '.' || (text_[pos_] == '/' && digit_at(pos_ + 1))))
      fail("non-integer exponent");
    if (e > 1000) fail("exponent too large");
    const int k = static_cast<int>(e.get_si());
    return {b, negative ? -k : k};
  }

  RatExpr base() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (accept('(')) {
      RatExpr e = expr();
      expect(')');
      return e;
    }
    if (digit_at(pos_)) {
      mpz_class num = integer();
      // rational literal: integer "/" positive-integer
      const std::size_t save = pos_;
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '/') {
        std::size_t q = pos_ + 1;
        while (q < text_.size() && std::isspace(static_cast<unsigned char>(text_[q]))) ++q;
        if (digit_at(q)) {
          pos_ = q;
          const std::size_t den_at = pos_;
          mpz_class den = integer();
          if (den == 0) {
            pos_ = den_at;
            fail("zero denominator in rational literal");
          }
          Rational r(num, den);
          r.canonicalize();
          return RatExpr(r);
        }
      }
      pos_ = save;
      return RatExpr(Rational(num));
    }
    if (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
      const std::string name(text_.substr(start, pos_ - start));
      if (name == "exp" || name == "sin" || name == "cos" || name == "sinh" || name == "cosh") {
        if (!peek('(')) fail("expected '(' after " + name);
        return function(name);
      }
      if (auto idx = chart_.index_of(name)) return RatExpr::variable(*idx);
      if (auto it = chart_.params.find(name); it != chart_.params.end()) return RatExpr(it->second);
      pos_ = start;
      fail("undeclared identifier '" + name + "'");
    }
    fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
  }

  RatExpr function(const std::string& name) {
    expect('(');
    const std::size_t arg_at = pos_;
    RatExpr arg = expr();
    expect(')');
    std::optional<LinearForm> lin;
    if (arg.has_trivial_den()) lin = arg.num().as_linear_form();
    if (!lin) {
      pos_ = arg_at;
      fail("argument of " + name + " is not affine-linear in the coordinates");
    }
    if (name == "exp") return RatExpr(Expression::exp(*lin));
    if (name == "sin") return RatExpr(Expression::sin(*lin));
    if (name == "cos") return RatExpr(Expression::cos(*lin));
    const Expression plus = Expression::exp(*lin);
    const Expression minus = Expression::exp(-*lin);
    const Rational half(1, 2);
    if (name == "sinh") return RatExpr((plus - minus) * half);
    return RatExpr((plus + minus) * half);
  }

  std::string_view text_;
  const Chart& chart_;
  std::size_t pos_ = 0;
};

}  // namespace

RatExpr parse_expr(std::string_view text, const Chart& chart) { return Parser(text, chart).parse_all(); }

LinearForm parse_linear(std::string_view text, const Chart& chart) {
  RatExpr e = parse_expr(text, chart);
  std::optional<LinearForm> lin;
  if (e.has_trivial_den()) lin = e.num().as_linear_form();
  if (!lin) throw ParseError("expression is not affine-linear", 0);
  return *lin;
}

}  // namespace jetsym
