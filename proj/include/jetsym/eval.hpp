#pragma once

#include "jetsym/expr.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <span>
#include <stdexcept>

namespace jetsym {

using Real = boost::multiprecision::mpfr_float;

/// Sets the working precision of newly created Real values (process-wide in this Boost version).
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_digits_;
};

unsigned bits_to_digits10(unsigned bits);

class EvaluationError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

Real to_real(const Rational& q);

Real evaluate_at(const Expression& e, std::span<const Rational> point, unsigned precision_bits);
/// Throws EvaluationError when the denominator vanishes at the point.
Real evaluate_at(const RatExpr& e, std::span<const Rational> point, unsigned precision_bits);

/// Exact value when no exponential or trigonometric factor survives at the point
/// (e.g. sin(0), exp(0)); nullopt otherwise.
std::optional<Rational> evaluate_exact(const Expression& e, std::span<const Rational> point);
std::optional<Rational> evaluate_exact(const RatExpr& e, std::span<const Rational> point);

}  // namespace jetsym
