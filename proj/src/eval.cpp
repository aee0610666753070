#include "jetsym/eval.hpp"

#include <cmath>

namespace jetsym {

unsigned bits_to_digits10(unsigned bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

PrecisionScope::PrecisionScope(unsigned bits) : saved_digits_(Real::default_precision()) {
  Real::default_precision(bits_to_digits10(bits));
}

PrecisionScope::~PrecisionScope() { Real::default_precision(saved_digits_); }

Real to_real(const Rational& q) {
  Real num(q.get_num().get_mpz_t());
  Real den(q.get_den().get_mpz_t());
  return num / den;
}

namespace {

Rational power(const Rational& base, int e) {
  Rational r(1);
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

// Sum of the terms plus the sum of their magnitudes (used as a cancellation scale).
std::pair<Real, Real> evaluate_with_scale(const Expression& e, std::span<const Rational> point) {
  Real sum = 0;
  Real scale = 0;
  for (const auto& t : e.terms()) {
    Rational poly = t.coeff;
    for (std::size_t i = 0; i < t.mono.size(); ++i) {
      if (t.mono[i] == 0) continue;
      if (i >= point.size()) throw EvaluationError("evaluation point has too few coordinates");
      poly *= power(point[i], t.mono[i]);
    }
    Real v = to_real(poly);
    if (!t.exp_arg.is_zero()) v *= boost::multiprecision::exp(to_real(t.exp_arg.evaluate(point)));
    if (t.trig == Trig::sin) v *= boost::multiprecision::sin(to_real(t.trig_arg.evaluate(point)));
    if (t.trig == Trig::cos) v *= boost::multiprecision::cos(to_real(t.trig_arg.evaluate(point)));
    sum += v;
    scale += boost::multiprecision::abs(v);
  }
  return {sum, scale};
}

}  // namespace

Real evaluate_at(const Expression& e, std::span<const Rational> point, unsigned precision_bits) {
  PrecisionScope scope(precision_bits);
  if (auto q = evaluate_exact(e, point)) return to_real(*q);
  return evaluate_with_scale(e, point).first;
}

Real evaluate_at(const RatExpr& e, std::span<const Rational> point, unsigned precision_bits) {
  PrecisionScope scope(precision_bits);
  if (auto q = evaluate_exact(e, point)) return to_real(*q);
  const Expression den = e.den_expanded();
  if (auto qd = evaluate_exact(den, point); qd && *qd == 0)
    throw EvaluationError("denominator vanishes at the evaluation point");
  auto [d, scale] = evaluate_with_scale(den, point);
  const Real tiny = boost::multiprecision::ldexp(Real(1), -static_cast<int>(precision_bits) + 16);
  if (boost::multiprecision::abs(d) <= tiny * scale)
    throw EvaluationError("denominator vanishes at the evaluation point to working precision");
  return evaluate_with_scale(e.num(), point).first / d;
}

std::optional<Rational> evaluate_exact(const Expression& e, std::span<const Rational> point) {
  Rational sum(0);
  for (const auto& t : e.terms()) {
    if (!t.exp_arg.is_zero() && t.exp_arg.evaluate(point) != 0) return std::nullopt;
    if (t.trig != Trig::none && t.trig_arg.evaluate(point) != 0) return std::nullopt;
    if (t.trig == Trig::sin) continue;
    Rational v = t.coeff;
    for (std::size_t i = 0; i < t.mono.size(); ++i) {
      if (t.mono[i] == 0) continue;
      if (i >= point.size()) throw EvaluationError("evaluation point has too few coordinates");
      v *= power(point[i], t.mono[i]);
    }
    sum += v;
  }
  return sum;
}

std::optional<Rational> evaluate_exact(const RatExpr& e, std::span<const Rational> point) {
  auto n = evaluate_exact(e.num(), point);
  if (!n) return std::nullopt;
  if (e.has_trivial_den()) return n;
  auto d = evaluate_exact(e.den_expanded(), point);
  if (!d) return std::nullopt;
  if (*d == 0) throw EvaluationError("denominator vanishes at the evaluation point");
  return *n / *d;
}

}  // namespace jetsym
