#pragma once

// Exact symbolic functions on a coordinate chart.
//
// An Expression is a finite sum of terms
//
//     q * x^m * exp(L1) * {sin,cos}(L2)
//
// with q rational, x^m a coordinate monomial and L1, L2 affine-linear forms with
// rational coefficients. Products of trigonometric factors are rewritten with the
// product-to-sum identities so every term carries at most one of them; sine/cosine
// arguments are sign-normalized. Under these rules the representation is unique, and
// because the characters x^m e^{L1} cos/sin(L2) are linearly independent over the
// rationals, an Expression is the zero function iff its term list is empty.
//
// A RatExpr is a quotient num / (x^m * prod f_i^{k_i}) of an Expression by a
// coordinate monomial and a product of normalized denominator factors. Factors are
// cancelled from the numerator by exact polynomial division when possible.

#include "jetsym/rational.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace jetsym {

using Monomial = std::vector<int>;  // exponent per coordinate index, trailing zeros trimmed

Monomial mono_mul(const Monomial& a, const Monomial& b);
int mono_degree(const Monomial& m);
int mono_exponent(const Monomial& m, std::size_t var);
bool mono_divides(const Monomial& d, const Monomial& m);
Monomial mono_div(const Monomial& m, const Monomial& d);  // requires mono_divides(d, m)
Monomial mono_gcd(const Monomial& a, const Monomial& b);
Monomial mono_lcm(const Monomial& a, const Monomial& b);
/// Graded-lex comparison: negative if a < b.
int mono_compare(const Monomial& a, const Monomial& b);

class LinearForm {
 public:
  LinearForm() = default;
  static LinearForm variable(std::size_t index, const Rational& coeff = 1);
  static LinearForm constant_form(const Rational& c);

  const Rational& coeff(std::size_t index) const;
  std::size_t width() const { return coeffs_.size(); }
  const Rational& constant() const { return constant_; }

  bool is_zero() const { return coeffs_.empty() && constant_ == 0; }
  bool is_constant() const { return coeffs_.empty(); }
  /// True when the first nonzero coordinate coefficient (or the constant, if there is
  /// none) is negative.
  bool leading_negative() const;

  LinearForm operator-() const;
  LinearForm& operator+=(const LinearForm& o);
  LinearForm& operator-=(const LinearForm& o);
  LinearForm& operator*=(const Rational& s);
  friend LinearForm operator+(LinearForm a, const LinearForm& b) { return a += b; }
  friend LinearForm operator-(LinearForm a, const LinearForm& b) { return a -= b; }
  friend LinearForm operator*(LinearForm a, const Rational& s) { return a *= s; }

  Rational evaluate(std::span<const Rational> point) const;

  int compare(const LinearForm& o) const;
  friend bool operator==(const LinearForm& a, const LinearForm& b) { return a.compare(b) == 0; }

  void set_coeff(std::size_t index, const Rational& value);

 private:
  void trim();

  std::vector<Rational> coeffs_;
  Rational constant_;
};

enum class Trig : std::uint8_t { none = 0, sin = 1, cos = 2 };

struct Term {
  Rational coeff;
  Monomial mono;
  LinearForm exp_arg;  // zero form: no exponential factor
  Trig trig = Trig::none;
  LinearForm trig_arg;

  bool has_character() const { return !exp_arg.is_zero() || trig != Trig::none; }
};

/// Total order on the (exp, trig, monomial) signature; coefficients are ignored.
int compare_signature(const Term& a, const Term& b);
/// Order on the transcendental part only.
int compare_character(const Term& a, const Term& b);

class Expression {
 public:
  Expression() = default;
  Expression(const Rational& c);  // NOLINT(google-explicit-constructor)
  Expression(long c) : Expression(Rational(c)) {}  // NOLINT(google-explicit-constructor)

  static Expression variable(std::size_t index);
  static Expression monomial(const Rational& coeff, Monomial m);
  static Expression exp(const LinearForm& arg);
  static Expression sin(const LinearForm& arg);
  static Expression cos(const LinearForm& arg);
  static Expression from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  std::optional<Rational> as_constant() const;
  bool is_polynomial() const;
  /// Polynomial of total degree <= 1 without transcendental factors.
  std::optional<LinearForm> as_linear_form() const;

  Monomial monomial_content() const;
  /// The exponential argument shared by every term, if there is one.
  std::optional<LinearForm> common_exp() const;
  const Term& leading_term() const { return terms_.front(); }

  Expression operator-() const;
  Expression& operator+=(const Expression& o);
  Expression& operator-=(const Expression& o);
  Expression& operator*=(const Expression& o);
  Expression& operator*=(const Rational& s);
  friend Expression operator+(Expression a, const Expression& b) { return a += b; }
  friend Expression operator-(Expression a, const Expression& b) { return a -= b; }
  friend Expression operator*(const Expression& a, const Expression& b);
  friend Expression operator*(Expression a, const Rational& s) { return a *= s; }
  friend Expression operator*(const Rational& s, Expression a) { return a *= s; }

  Expression pow(unsigned k) const;
  Expression derivative(std::size_t var) const;
  /// Multiply every term by x^m * exp(e).
  Expression shifted(const Monomial& m, const LinearForm& e) const;

  int compare(const Expression& o) const;
  friend bool operator==(const Expression& a, const Expression& b) { return a.compare(b) == 0; }

 private:
  std::vector<Term> terms_;
};

/// Exact quotient num / f when f is a polynomial dividing num (with num grouped by
/// transcendental character); nullopt otherwise.
std::optional<Expression> exact_divide(const Expression& num, const Expression& f);

struct DenFactor {
  Expression base;  // normalized: >= 2 terms, monomial content 1, leading coefficient 1
  int power = 1;
};

class RatExpr {
 public:
  RatExpr() = default;
  RatExpr(Expression num);  // NOLINT(google-explicit-constructor)
  RatExpr(const Rational& c) : RatExpr(Expression(c)) {}  // NOLINT(google-explicit-constructor)
  RatExpr(long c) : RatExpr(Expression(c)) {}  // NOLINT(google-explicit-constructor)

  /// num / den; throws std::domain_error if den is the zero function.
  static RatExpr quotient(const Expression& num, const Expression& den);
  static RatExpr variable(std::size_t index) { return RatExpr(Expression::variable(index)); }

  const Expression& num() const { return num_; }
  const Monomial& den_monomial() const { return den_mono_; }
  const std::vector<DenFactor>& den_factors() const { return den_factors_; }
  bool has_trivial_den() const { return den_mono_.empty() && den_factors_.empty(); }
  Expression den_expanded() const;

  bool is_zero() const { return num_.is_zero(); }
  std::optional<Rational> as_constant() const;

  RatExpr operator-() const;
  RatExpr& operator+=(const RatExpr& o);
  RatExpr& operator-=(const RatExpr& o);
  RatExpr& operator*=(const RatExpr& o);
  RatExpr& operator/=(const RatExpr& o);
  friend RatExpr operator+(RatExpr a, const RatExpr& b) { return a += b; }
  friend RatExpr operator-(RatExpr a, const RatExpr& b) { return a -= b; }
  friend RatExpr operator*(RatExpr a, const RatExpr& b) { return a *= b; }
  friend RatExpr operator/(RatExpr a, const RatExpr& b) { return a /= b; }

  RatExpr inverse() const;
  RatExpr pow(int k) const;
  RatExpr derivative(std::size_t var) const;

  /// Structural identity of the stored representation (not mathematical equality).
  bool identical(const RatExpr& o) const;

 private:
  void normalize();

  Expression num_;
  Monomial den_mono_;
  std::vector<DenFactor> den_factors_;  // sorted by base
};

/// Mathematical equality via the exact zero test.
bool equal(const RatExpr& a, const RatExpr& b);

/// Largest coordinate index referenced plus one.
std::size_t variable_span(const RatExpr& e);

/// Text in the parser grammar, e.g. "(2*x*exp(x))/(y^3*(1 + x^2)^2)".
std::string to_string(const LinearForm& f, std::span<const std::string> names);
std::string to_string(const Expression& e, std::span<const std::string> names);
std::string to_string(const RatExpr& e, std::span<const std::string> names);

}  // namespace jetsym
