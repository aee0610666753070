#pragma once

// Taylor coefficients of RatExpr coefficients at a point, over Q or Z/pZ. Internal header.
//
// Over Z/pZ the transcendental constants are replaced by generic residues: every
// exp(r) with r rational at the point is tau^{rN} for a common denominator N, and
// every e^{i theta} is w^{theta M} with w = ((1 - t^2) + 2ti)/(1 + t^2) on the unit
// circle. By Lindemann-Weierstrass e^{1/N} and e^{i/M} are algebraically independent
// over Q, so this is a generic specialization of the field the true values generate.

#include "field.hpp"
#include "jetsym/expr.hpp"

#include <numeric>
#include <type_traits>
#include <optional>

namespace jetsym::detail {

template <class F>
struct Cx {
  F re, im;
  friend Cx operator+(const Cx& a, const Cx& b) { return {a.re + b.re, a.im + b.im}; }
  friend Cx operator*(const Cx& a, const Cx& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
};

template <class F>
Cx<F> cx_pow(Cx<F> b, std::uint64_t e) {
  Cx<F> r{from_rational<F>(1), from_rational<F>(0)};
  while (e) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

/// Model values for the transcendental constants; only meaningful over Z/pZ.
template <class F>
struct TranscendentalModel {
  long exp_den = 1;    // N
  F tau{};             // models e^{1/N}
  long trig_den = 1;   // M
  Cx<F> unit{};        // models e^{i/M}
};

/// Common denominators of the exp and trig argument values of all terms at a point.
inline void collect_denominators(const Expression& e, std::span<const Rational> p, mpz_class& n, mpz_class& m) {
  for (const auto& t : e.terms()) {
    if (!t.exp_arg.is_zero()) n = lcm(n, t.exp_arg.evaluate(p).get_den());
    if (t.trig != Trig::none) m = lcm(m, t.trig_arg.evaluate(p).get_den());
  }
}

inline bool has_characters(const Expression& e) {
  for (const auto& t : e.terms())
    if (t.has_character()) return true;
  return false;
}

template <class F>
class SeriesEvaluator {
 public:
  SeriesEvaluator(const MultiIndexTable& table, std::vector<Rational> point, TranscendentalModel<F> model)
      : tab_(table), point_(std::move(point)), model_(model) {
    factorial_inv_.push_back(from_rational<F>(1));
    for (int k = 1; k <= tab_.degree(); ++k) factorial_inv_.push_back(factorial_inv_.back() * inverse(from_rational<F>(k)));
    for (const auto& c : point_) p_.push_back(from_rational<F>(c));
  }

  /// t_delta with f(p + h) = sum_delta t_delta h^delta, |delta| <= table degree.
  std::vector<F> series(const Expression& e) const {
    std::vector<F> out(tab_.size(), from_rational<F>(0));
    for (const auto& t : e.terms()) add_term(t, out);
    return out;
  }

  std::vector<F> series(const RatExpr& e) const {
    std::vector<F> num = series(e.num());
    if (e.has_trivial_den()) return num;
    return multiply(num, reciprocal(series(e.den_expanded())));
  }

  std::vector<F> multiply(const std::vector<F>& a, const std::vector<F>& b) const {
    std::vector<F> out(tab_.size(), from_rational<F>(0));
    for (std::size_t d = 0; d < tab_.size(); ++d) {
      F s = from_rational<F>(0);
      for (const auto& [g, r] : tab_.splits(d))
        if (!is_zero(a[g]) && !is_zero(b[r])) s = s + a[g] * b[r];
      out[d] = s;
    }
    return out;
  }

  std::vector<F> reciprocal(const std::vector<F>& a) const {
    if (is_zero(a[0])) throw BadReduction("denominator vanishes at the point");
    const F inv0 = inverse(a[0]);
    std::vector<F> out(tab_.size(), from_rational<F>(0));
    out[0] = inv0;
    for (std::size_t d = 1; d < tab_.size(); ++d) {
      F s = from_rational<F>(0);
      for (const auto& [g, r] : tab_.splits(d))
        if (g != 0 && !is_zero(a[g]) && !is_zero(out[r])) s = s + a[g] * out[r];
      out[d] = -(s * inv0);
    }
    return out;
  }

 private:
  F exp_value(const Rational& r) const {
    if constexpr (!std::is_same_v<F, Zp>) {
      throw std::logic_error("transcendental value in exact evaluation");
    } else {
    const Rational k = r * model_.exp_den;
    if (k.get_den() != 1) throw std::logic_error("exp denominator model is inconsistent");
    const long e = k.get_num().get_si();
    const F v = model_.tau.pow(static_cast<std::uint64_t>(e < 0 ? -e : e));
    return e < 0 ? inverse(v) : v;
    }
  }

  Cx<F> trig_value(const Rational& theta) const {
    if (!std::is_same_v<F, Zp>) throw std::logic_error("transcendental value in exact evaluation");
    const Rational k = theta * model_.trig_den;
    if (k.get_den() != 1) throw std::logic_error("trig denominator model is inconsistent");
    const long e = k.get_num().get_si();
    Cx<F> w = cx_pow(model_.unit, static_cast<std::uint64_t>(e < 0 ? -e : e));
    if (e < 0) w.im = -w.im;  // |w| = 1
    return w;
  }

  void add_term(const Term& t, std::vector<F>& out) const {
    const std::size_t n = tab_.vars();
    const int D = tab_.degree();
    const F zero = from_rational<F>(0);
    Cx<F> base{from_rational<F>(t.coeff), zero};
    if (!t.exp_arg.is_zero()) base = base * Cx<F>{exp_value(t.exp_arg.evaluate(point_)), zero};
    if (t.trig != Trig::none) base = base * trig_value(t.trig_arg.evaluate(point_));

    // f_k(h) = (p_k + h)^{m_k} e^{(a_k + i b_k) h}
    std::vector<std::vector<Cx<F>>> per_var(n);
    for (std::size_t k = 0; k < n; ++k) {
      const int m = mono_exponent(t.mono, k);
      const Cx<F> z{from_rational<F>(t.exp_arg.coeff(k)),
                    t.trig == Trig::none ? zero : from_rational<F>(t.trig_arg.coeff(k))};
      // powers of z divided by factorials
      std::vector<Cx<F>> zf(D + 1);
      zf[0] = {from_rational<F>(1), zero};
      for (int j = 1; j <= D; ++j) zf[j] = zf[j - 1] * z;
      for (int j = 0; j <= D; ++j) zf[j] = zf[j] * Cx<F>{factorial_inv_[j], zero};
      // binomial expansion of (p + h)^m
      std::vector<F> poly(m + 1);
      F binom = from_rational<F>(1);
      for (int g = 0; g <= m; ++g) {
        F pw = from_rational<F>(1);
        for (int r = 0; r < m - g; ++r) pw = pw * p_[k];
        poly[g] = binom * pw;
        binom = binom * from_rational<F>(Rational(m - g, g + 1));
      }
      auto& f = per_var[k];
      f.assign(D + 1, Cx<F>{zero, zero});
      for (int j = 0; j <= D; ++j)
        for (int g = 0; g <= std::min(j, m); ++g) f[j] = f[j] + Cx<F>{poly[g], zero} * zf[j - g];
    }
    for (std::size_t d = 0; d < tab_.size(); ++d) {
      const auto& delta = tab_.at(d);
      Cx<F> v = base;
      for (std::size_t k = 0; k < n; ++k) v = v * per_var[k][delta[k]];
      out[d] = out[d] + (t.trig == Trig::sin ? v.im : v.re);
    }
  }

  const MultiIndexTable& tab_;
  std::vector<Rational> point_;
  TranscendentalModel<F> model_;
  std::vector<F> factorial_inv_;
  std::vector<F> p_;
};

}  // namespace jetsym::detail
