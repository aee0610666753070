#pragma once

// Prime-field arithmetic and truncated multivariate Taylor series used by the jet
// counter. Internal header.

#include "jetsym/rational.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace jetsym::detail {

/// Raised when a rational cannot be reduced (denominator divisible by the prime) or a
/// value that must be invertible vanishes modulo the prime.
class BadReduction : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Element of Z/pZ for a prime p < 2^31; the modulus lives in a thread-local slot so
/// independent runs can use different primes concurrently.
class Zp {
 public:
  static std::uint64_t& modulus() {
    thread_local std::uint64_t p = 2147483647ULL;
    return p;
  }

  Zp() = default;
  explicit Zp(std::int64_t v) {
    const auto p = static_cast<std::int64_t>(modulus());
    v %= p;
    v_ = static_cast<std::uint64_t>(v < 0 ? v + p : v);
  }
  static Zp raw(std::uint64_t v) {
    Zp z;
    z.v_ = v;
    return z;
  }
  static Zp from(const Rational& q);

  std::uint64_t value() const { return v_; }
  bool is_zero() const { return v_ == 0; }

  friend Zp operator+(Zp a, Zp b) {
    std::uint64_t s = a.v_ + b.v_;
    if (s >= modulus()) s -= modulus();
    return raw(s);
  }
  friend Zp operator-(Zp a, Zp b) { return raw(a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + modulus() - b.v_); }
  friend Zp operator*(Zp a, Zp b) { return raw(a.v_ * b.v_ % modulus()); }
  Zp operator-() const { return raw(v_ == 0 ? 0 : modulus() - v_); }
  Zp& operator+=(Zp o) { return *this = *this + o; }
  Zp& operator-=(Zp o) { return *this = *this - o; }
  Zp& operator*=(Zp o) { return *this = *this * o; }
  friend bool operator==(Zp a, Zp b) { return a.v_ == b.v_; }

  Zp pow(std::uint64_t e) const;
  Zp inverse() const;  // throws BadReduction on zero

 private:
  std::uint64_t v_ = 0;
};

inline Zp Zp::pow(std::uint64_t e) const {
  Zp r = raw(1 % modulus()), b = *this;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

inline Zp Zp::inverse() const {
  if (v_ == 0) throw BadReduction("inverse of zero modulo p");
  return pow(modulus() - 2);
}

inline Zp Zp::from(const Rational& q) {
  const mpz_class p = static_cast<unsigned long>(modulus());
  mpz_class num = q.get_num() % p, den = q.get_den() % p;
  if (num < 0) num += p;
  if (den == 0) throw BadReduction("denominator divisible by the prime");
  return raw(num.get_ui()) * raw(den.get_ui()).inverse();
}

// Uniform field operations so the elimination code can run over Q or Z/pZ.
inline bool is_zero(const Rational& q) { return q == 0; }
inline bool is_zero(Zp z) { return z.is_zero(); }
inline Rational inverse(const Rational& q) { return 1 / q; }
inline Zp inverse(Zp z) { return z.inverse(); }
template <class F> F from_rational(const Rational& q);
template <> inline Rational from_rational<Rational>(const Rational& q) { return q; }
template <> inline Zp from_rational<Zp>(const Rational& q) { return Zp::from(q); }

/// Gaussian elimination to reduced row echelon form; returns pivot columns.
template <class F>
std::vector<std::size_t> echelon(std::vector<std::vector<F>>& m, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t piv = r;
    while (piv < m.size() && is_zero(m[piv][c])) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[r], m[piv]);
    const F inv = inverse(m[r][c]);
    for (std::size_t k = c; k < cols; ++k) m[r][k] = m[r][k] * inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || is_zero(m[i][c])) continue;
      const F f = m[i][c];
      for (std::size_t k = c; k < cols; ++k) m[i][k] = m[i][k] - f * m[r][k];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class F>
std::size_t rank_of(std::vector<std::vector<F>> m, std::size_t cols) {
  return echelon(m, cols).size();
}

/// Basis of {x : m x = 0}, one vector of length `cols` per free column.
template <class F>
std::vector<std::vector<F>> kernel_basis(std::vector<std::vector<F>> m, std::size_t cols) {
  const auto pivots = echelon(m, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<F>> out;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<F> v(cols, from_rational<F>(0));
    v[f] = from_rational<F>(1);
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][f];
    out.push_back(std::move(v));
  }
  return out;
}

/// All multi-indices in n variables of total degree <= D, graded then lexicographic.
class MultiIndexTable {
 public:
  MultiIndexTable(std::size_t n, int D);

  std::size_t vars() const { return n_; }
  int degree() const { return D_; }
  std::size_t size() const { return list_.size(); }
  const std::vector<int>& at(std::size_t id) const { return list_[id]; }
  int order(std::size_t id) const { return orders_[id]; }
  /// id of a multi-index; -1 if it exceeds the degree.
  long id_of(const std::vector<int>& alpha) const;
  /// Ids of degree exactly d.
  std::pair<std::size_t, std::size_t> degree_range(int d) const { return {start_[d], start_[d + 1]}; }
  /// For id delta: all pairs (gamma, delta - gamma).
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& splits(std::size_t delta) const;

 private:
  std::size_t n_;
  int D_;
  std::vector<std::vector<int>> list_;
  std::vector<int> orders_;
  std::vector<std::size_t> start_;
  std::map<std::vector<int>, std::size_t> index_;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> splits_;
};

}  // namespace jetsym::detail
