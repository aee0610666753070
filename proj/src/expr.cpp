#include "jetsym/expr.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace jetsym {

// ---------------------------------------------------------------------------
// Monomials

namespace {

void trim_mono(Monomial& m) {
  while (!m.empty() && m.back() == 0) m.pop_back();
}

const Rational& zero_rational() {
  static const Rational z(0);
  return z;
}

}  // namespace

Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim_mono(r);
  return r;
}

int mono_degree(const Monomial& m) {
  int d = 0;
  for (int e : m) d += e;
  return d;
}

int mono_exponent(const Monomial& m, std::size_t var) { return var < m.size() ? m[var] : 0; }

bool mono_divides(const Monomial& d, const Monomial& m) {
  if (d.size() > m.size()) return false;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i] > m[i]) return false;
  return true;
}

Monomial mono_div(const Monomial& m, const Monomial& d) {
  Monomial r = m;
  for (std::size_t i = 0; i < d.size(); ++i) r[i] -= d[i];
  trim_mono(r);
  return r;
}

Monomial mono_gcd(const Monomial& a, const Monomial& b) {
  Monomial r(std::min(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = std::min(a[i], b[i]);
  trim_mono(r);
  return r;
}

Monomial mono_lcm(const Monomial& a, const Monomial& b) {
  Monomial r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = std::max(mono_exponent(a, i), mono_exponent(b, i));
  trim_mono(r);
  return r;
}

int mono_compare(const Monomial& a, const Monomial& b) {
  const int da = mono_degree(a);
  const int db = mono_degree(b);
  if (da != db) return da < db ? -1 : 1;
  const std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    const int ea = mono_exponent(a, i);
    const int eb = mono_exponent(b, i);
    if (ea != eb) return ea < eb ? -1 : 1;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// LinearForm

LinearForm LinearForm::variable(std::size_t index, const Rational& coeff) {
  LinearForm f;
  f.set_coeff(index, coeff);
  return f;
}

LinearForm LinearForm::constant_form(const Rational& c) {
  LinearForm f;
  f.constant_ = c;
  return f;
}

const Rational& LinearForm::coeff(std::size_t index) const {
  return index < coeffs_.size() ? coeffs_[index] : zero_rational();
}

void LinearForm::set_coeff(std::size_t index, const Rational& value) {
  if (index >= coeffs_.size()) coeffs_.resize(index + 1);
  coeffs_[index] = value;
  trim();
}

void LinearForm::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

bool LinearForm::leading_negative() const {
  for (const auto& c : coeffs_)
    if (c != 0) return c < 0;
  return constant_ < 0;
}

LinearForm LinearForm::operator-() const {
  LinearForm r = *this;
  for (auto& c : r.coeffs_) c = -c;
  r.constant_ = -r.constant_;
  return r;
}

LinearForm& LinearForm::operator+=(const LinearForm& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  constant_ += o.constant_;
  trim();
  return *this;
}

LinearForm& LinearForm::operator-=(const LinearForm& o) { return *this += -o; }

LinearForm& LinearForm::operator*=(const Rational& s) {
  for (auto& c : coeffs_) c *= s;
  constant_ *= s;
  trim();
  return *this;
}

Rational LinearForm::evaluate(std::span<const Rational> point) const {
  Rational r = constant_;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    if (i >= point.size()) throw std::out_of_range("LinearForm::evaluate: point too short");
    r += coeffs_[i] * point[i];
  }
  return r;
}

int LinearForm::compare(const LinearForm& o) const {
  const std::size_t n = std::max(coeffs_.size(), o.coeffs_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const int c = cmp(coeff(i), o.coeff(i));
    if (c != 0) return c < 0 ? -1 : 1;
  }
  const int c = cmp(constant_, o.constant_);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

// ---------------------------------------------------------------------------
// Terms

int compare_character(const Term& a, const Term& b) {
  if (int c = a.exp_arg.compare(b.exp_arg); c != 0) return c;
  if (a.trig != b.trig) return a.trig < b.trig ? -1 : 1;
  if (a.trig == Trig::none) return 0;
  return a.trig_arg.compare(b.trig_arg);
}

int compare_signature(const Term& a, const Term& b) {
  if (int c = compare_character(a, b); c != 0) return c;
  return -mono_compare(a.mono, b.mono);
}

namespace {

// Returns false if the term vanishes identically.
bool normalize_term(Term& t) {
  if (t.coeff == 0) return false;
  if (t.trig == Trig::none) {
    t.trig_arg = LinearForm();
    return true;
  }
  if (t.trig_arg.is_zero()) {
    if (t.trig == Trig::sin) return false;
    t.trig = Trig::none;
    return true;
  }
  if (t.trig_arg.leading_negative()) {
    t.trig_arg = -t.trig_arg;
    if (t.trig == Trig::sin) t.coeff = -t.coeff;
  }
  return true;
}

void multiply_terms(const Term& a, const Term& b, std::vector<Term>& out) {
  Term base;
  base.coeff = a.coeff * b.coeff;
  base.mono = mono_mul(a.mono, b.mono);
  base.exp_arg = a.exp_arg + b.exp_arg;
  if (a.trig == Trig::none || b.trig == Trig::none) {
    const Term& t = a.trig == Trig::none ? b : a;
    base.trig = t.trig;
    base.trig_arg = t.trig_arg;
    out.push_back(std::move(base));
    return;
  }
  const LinearForm sum = a.trig_arg + b.trig_arg;
  const LinearForm diff = a.trig_arg - b.trig_arg;
  const Rational half(1, 2);
  Term t1 = base;
  Term t2 = std::move(base);
  t1.coeff *= half;
  t2.coeff *= half;
  if (a.trig == Trig::sin && b.trig == Trig::sin) {
    // sin A sin B = (cos(A-B) - cos(A+B)) / 2
    t1.trig = Trig::cos, t1.trig_arg = diff;
    t2.trig = Trig::cos, t2.trig_arg = sum, t2.coeff = -t2.coeff;
  } else if (a.trig == Trig::cos && b.trig == Trig::cos) {
    t1.trig = Trig::cos, t1.trig_arg = diff;
    t2.trig = Trig::cos, t2.trig_arg = sum;
  } else if (a.trig == Trig::sin) {
    // sin A cos B = (sin(A+B) + sin(A-B)) / 2
    t1.trig = Trig::sin, t1.trig_arg = sum;
    t2.trig = Trig::sin, t2.trig_arg = diff;
  } else {
    // cos A sin B = (sin(A+B) - sin(A-B)) / 2
    t1.trig = Trig::sin, t1.trig_arg = sum;
    t2.trig = Trig::sin, t2.trig_arg = diff, t2.coeff = -t2.coeff;
  }
  out.push_back(std::move(t1));
  out.push_back(std::move(t2));
}

}  // namespace

// ---------------------------------------------------------------------------
// Expression

Expression::Expression(const Rational& c) {
  if (c != 0) {
    Term t;
    t.coeff = c;
    terms_.push_back(std::move(t));
  }
}

Expression Expression::variable(std::size_t index) {
  Monomial m(index + 1, 0);
  m[index] = 1;
  return monomial(1, std::move(m));
}

Expression Expression::monomial(const Rational& coeff, Monomial m) {
  trim_mono(m);
  Term t;
  t.coeff = coeff;
  t.mono = std::move(m);
  return from_terms({std::move(t)});
}

Expression Expression::exp(const LinearForm& arg) {
  Term t;
  t.coeff = 1;
  t.exp_arg = arg;
  return from_terms({std::move(t)});
}

Expression Expression::sin(const LinearForm& arg) {
  Term t;
  t.coeff = 1;
  t.trig = Trig::sin;
  t.trig_arg = arg;
  return from_terms({std::move(t)});
}

Expression Expression::cos(const LinearForm& arg) {
  Term t;
  t.coeff = 1;
  t.trig = Trig::cos;
  t.trig_arg = arg;
  return from_terms({std::move(t)});
}

Expression Expression::from_terms(std::vector<Term> terms) {
  std::vector<Term> kept;
  kept.reserve(terms.size());
  for (auto& t : terms)
    if (normalize_term(t)) kept.push_back(std::move(t));
  std::sort(kept.begin(), kept.end(),
            [](const Term& a, const Term& b) { return compare_signature(a, b) < 0; });
  Expression e;
  for (auto& t : kept) {
    if (!e.terms_.empty() && compare_signature(e.terms_.back(), t) == 0) {
      e.terms_.back().coeff += t.coeff;
      if (e.terms_.back().coeff == 0) e.terms_.pop_back();
    } else {
      e.terms_.push_back(std::move(t));
    }
  }
  return e;
}

std::optional<Rational> Expression::as_constant() const {
  if (terms_.empty()) return Rational(0);
  if (terms_.size() == 1 && terms_[0].mono.empty() && !terms_[0].has_character()) return terms_[0].coeff;
  return std::nullopt;
}

bool Expression::is_polynomial() const {
  return std::none_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.has_character(); });
}

std::optional<LinearForm> Expression::as_linear_form() const {
  LinearForm f;
  for (const auto& t : terms_) {
    if (t.has_character()) return std::nullopt;
    const int d = mono_degree(t.mono);
    if (d == 0) {
      f += LinearForm::constant_form(t.coeff);
    } else if (d == 1) {
      f += LinearForm::variable(t.mono.size() - 1, t.coeff);
    } else {
      return std::nullopt;
    }
  }
  return f;
}

Monomial Expression::monomial_content() const {
  if (terms_.empty()) return {};
  Monomial g = terms_.front().mono;
  for (const auto& t : terms_) g = mono_gcd(g, t.mono);
  return g;
}

std::optional<LinearForm> Expression::common_exp() const {
  if (terms_.empty()) return std::nullopt;
  const LinearForm& first = terms_.front().exp_arg;
  for (const auto& t : terms_)
    if (!(t.exp_arg == first)) return std::nullopt;
  return first;
}

Expression Expression::operator-() const {
  Expression r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

Expression& Expression::operator+=(const Expression& o) {
  if (o.terms_.empty()) return *this;
  std::vector<Term> merged;
  merged.reserve(terms_.size() + o.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    int c;
    if (i == terms_.size()) c = 1;
    else if (j == o.terms_.size()) c = -1;
    else c = compare_signature(terms_[i], o.terms_[j]);
    if (c < 0) {
      merged.push_back(std::move(terms_[i++]));
    } else if (c > 0) {
      merged.push_back(o.terms_[j++]);
    } else {
      Term t = std::move(terms_[i++]);
      t.coeff += o.terms_[j++].coeff;
      if (t.coeff != 0) merged.push_back(std::move(t));
    }
  }
  terms_ = std::move(merged);
  return *this;
}

Expression& Expression::operator-=(const Expression& o) { return *this += -o; }

Expression& Expression::operator*=(const Rational& s) {
  if (s == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coeff *= s;
  return *this;
}

Expression operator*(const Expression& a, const Expression& b) {
  if (a.terms_.empty() || b.terms_.empty()) return {};
  std::vector<Term> out;
  out.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& x : a.terms_)
    for (const auto& y : b.terms_) multiply_terms(x, y, out);
  return Expression::from_terms(std::move(out));
}

Expression& Expression::operator*=(const Expression& o) {
  *this = *this * o;
  return *this;
}

Expression Expression::pow(unsigned k) const {
  Expression result(1);
  Expression base = *this;
  while (k > 0) {
    if (k & 1U) result *= base;
    k >>= 1U;
    if (k > 0) base = base * base;
  }
  return result;
}

Expression Expression::derivative(std::size_t var) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    const int e = mono_exponent(t.mono, var);
    if (e > 0) {
      Term d = t;
      d.coeff *= e;
      d.mono[var] -= 1;
      trim_mono(d.mono);
      out.push_back(std::move(d));
    }
    if (const Rational& a = t.exp_arg.coeff(var); a != 0) {
      Term d = t;
      d.coeff *= a;
      out.push_back(std::move(d));
    }
    if (t.trig != Trig::none) {
      if (const Rational& a = t.trig_arg.coeff(var); a != 0) {
        Term d = t;
        if (t.trig == Trig::sin) {
          d.trig = Trig::cos;
          d.coeff *= a;
        } else {
          d.trig = Trig::sin;
          d.coeff *= -a;
        }
        out.push_back(std::move(d));
      }
    }
  }
  return from_terms(std::move(out));
}

Expression Expression::shifted(const Monomial& m, const LinearForm& e) const {
  std::vector<Term> out = terms_;
  for (auto& t : out) {
    t.mono = mono_mul(t.mono, m);
    t.exp_arg += e;
  }
  return from_terms(std::move(out));
}

int Expression::compare(const Expression& o) const {
  const std::size_t n = std::min(terms_.size(), o.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (int c = compare_signature(terms_[i], o.terms_[i]); c != 0) return c;
    if (int c = cmp(terms_[i].coeff, o.terms_[i].coeff); c != 0) return c < 0 ? -1 : 1;
  }
  if (terms_.size() != o.terms_.size()) return terms_.size() < o.terms_.size() ? -1 : 1;
  return 0;
}

namespace {

Expression divide_monomial(const Expression& e, const Monomial& m) {
  if (m.empty()) return e;
  std::vector<Term> out = e.terms();
  for (auto& t : out) t.mono = mono_div(t.mono, m);
  return Expression::from_terms(std::move(out));
}

struct GrlexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const { return mono_compare(a, b) > 0; }
};

}  // namespace

std::optional<Expression> exact_divide(const Expression& num, const Expression& f) {
  if (f.is_zero() || !f.is_polynomial()) return std::nullopt;
  const Term& lead = f.terms().front();  // polynomial terms are sorted by descending monomial
  std::vector<Term> quotient;
  const auto& terms = num.terms();
  std::size_t start = 0;
  while (start < terms.size()) {
    std::size_t stop = start + 1;
    while (stop < terms.size() && compare_character(terms[start], terms[stop]) == 0) ++stop;
    std::map<Monomial, Rational, GrlexGreater> rem;
    for (std::size_t i = start; i < stop; ++i) rem.emplace(terms[i].mono, terms[i].coeff);
    while (!rem.empty()) {
      auto it = rem.begin();
      if (!mono_divides(lead.mono, it->first)) return std::nullopt;
      const Rational q = it->second / lead.coeff;
      const Monomial qm = mono_div(it->first, lead.mono);
      for (const auto& ft : f.terms()) {
        const Monomial m = mono_mul(ft.mono, qm);
        auto [pos, inserted] = rem.emplace(m, Rational(0));
        pos->second -= q * ft.coeff;
        if (pos->second == 0) rem.erase(pos);
      }
      Term qt = terms[start];
      qt.coeff = q;
      qt.mono = qm;
      quotient.push_back(std::move(qt));
    }
    start = stop;
  }
  return Expression::from_terms(std::move(quotient));
}

// ---------------------------------------------------------------------------
// RatExpr

namespace {

struct SplitDen {
  Rational coeff;
  Monomial mono;
  LinearForm exp_arg;
  std::optional<Expression> factor;
};

SplitDen split_denominator(const Expression& den) {
  SplitDen s;
  s.mono = den.monomial_content();
  Expression rest = divide_monomial(den, s.mono);
  if (auto e = rest.common_exp(); e && !e->is_zero()) {
    s.exp_arg = *e;
    rest = rest.shifted({}, -*e);
  }
  s.coeff = rest.leading_term().coeff;
  rest *= Rational(1) / s.coeff;
  if (!(rest.as_constant() && *rest.as_constant() == 1)) s.factor = std::move(rest);
  return s;
}

void insert_factor(std::vector<DenFactor>& factors, const Expression& base, int power) {
  auto it = std::lower_bound(factors.begin(), factors.end(), base,
                             [](const DenFactor& f, const Expression& b) { return f.base.compare(b) < 0; });
  if (it != factors.end() && it->base == base) {
    it->power += power;
  } else {
    factors.insert(it, DenFactor{base, power});
  }
}

Expression factor_product(const std::vector<DenFactor>& factors) {
  Expression p(1);
  for (const auto& f : factors) p *= f.base.pow(static_cast<unsigned>(f.power));
  return p;
}

}  // namespace

RatExpr::RatExpr(Expression num) : num_(std::move(num)) {}

RatExpr RatExpr::quotient(const Expression& num, const Expression& den) {
  if (den.is_zero()) throw std::domain_error("RatExpr: division by the zero function");
  RatExpr r;
  SplitDen s = split_denominator(den);
  r.num_ = num.shifted({}, -s.exp_arg) * (Rational(1) / s.coeff);
  r.den_mono_ = std::move(s.mono);
  if (s.factor) r.den_factors_.push_back(DenFactor{std::move(*s.factor), 1});
  r.normalize();
  return r;
}

Expression RatExpr::den_expanded() const {
  return factor_product(den_factors_) * Expression::monomial(1, den_mono_);
}

void RatExpr::normalize() {
  if (num_.is_zero()) {
    den_mono_.clear();
    den_factors_.clear();
    return;
  }
  for (auto& f : den_factors_) {
    if (!f.base.is_polynomial()) continue;
    while (f.power > 0) {
      auto q = exact_divide(num_, f.base);
      if (!q) break;
      num_ = std::move(*q);
      --f.power;
    }
  }
  std::erase_if(den_factors_, [](const DenFactor& f) { return f.power == 0; });
  if (!den_mono_.empty()) {
    const Monomial g = mono_gcd(num_.monomial_content(), den_mono_);
    if (!g.empty()) {
      num_ = divide_monomial(num_, g);
      den_mono_ = mono_div(den_mono_, g);
    }
  }
}

std::optional<Rational> RatExpr::as_constant() const {
  if (num_.is_zero()) return Rational(0);
  if (has_trivial_den()) return num_.as_constant();
  if (num_.as_constant()) return std::nullopt;
  const Expression den = den_expanded();
  const Rational c = num_.leading_term().coeff / den.leading_term().coeff;
  if ((num_ - den * c).is_zero()) return c;
  return std::nullopt;
}

RatExpr RatExpr::operator-() const {
  RatExpr r = *this;
  r.num_ = -r.num_;
  return r;
}

RatExpr& RatExpr::operator+=(const RatExpr& o) {
  if (o.num_.is_zero()) return *this;
  if (num_.is_zero()) {
    *this = o;
    return *this;
  }
  const bool same_den = den_mono_ == o.den_mono_ && den_factors_.size() == o.den_factors_.size() &&
                        std::equal(den_factors_.begin(), den_factors_.end(), o.den_factors_.begin(),
                                   [](const DenFactor& a, const DenFactor& b) {
                                     return a.power == b.power && a.base == b.base;
                                   });
  if (same_den) {
    num_ += o.num_;
    normalize();
    return *this;
  }
  const Monomial lcm_mono = mono_lcm(den_mono_, o.den_mono_);
  std::vector<DenFactor> lcm_factors = den_factors_;
  for (const auto& f : o.den_factors_) {
    auto it = std::find_if(lcm_factors.begin(), lcm_factors.end(),
                           [&](const DenFactor& g) { return g.base == f.base; });
    if (it == lcm_factors.end()) insert_factor(lcm_factors, f.base, f.power);
    else it->power = std::max(it->power, f.power);
  }
  auto cofactor = [&](const RatExpr& r) {
    std::vector<DenFactor> missing;
    for (const auto& f : lcm_factors) {
      auto it = std::find_if(r.den_factors_.begin(), r.den_factors_.end(),
                             [&](const DenFactor& g) { return g.base == f.base; });
      const int have = it == r.den_factors_.end() ? 0 : it->power;
      if (f.power > have) missing.push_back(DenFactor{f.base, f.power - have});
    }
    return factor_product(missing) * Expression::monomial(1, mono_div(lcm_mono, r.den_mono_));
  };
  Expression num = num_ * cofactor(*this) + o.num_ * cofactor(o);
  num_ = std::move(num);
  den_mono_ = lcm_mono;
  den_factors_ = std::move(lcm_factors);
  normalize();
  return *this;
}

RatExpr& RatExpr::operator-=(const RatExpr& o) { return *this += -o; }

RatExpr& RatExpr::operator*=(const RatExpr& o) {
  if (num_.is_zero()) return *this;
  if (o.num_.is_zero()) {
    *this = RatExpr();
    return *this;
  }
  num_ *= o.num_;
  den_mono_ = mono_mul(den_mono_, o.den_mono_);
  for (const auto& f : o.den_factors_) insert_factor(den_factors_, f.base, f.power);
  normalize();
  return *this;
}

RatExpr RatExpr::inverse() const {
  if (num_.is_zero()) throw std::domain_error("RatExpr: inverse of the zero function");
  return quotient(den_expanded(), num_);
}

RatExpr& RatExpr::operator/=(const RatExpr& o) {
  if (o.num_.is_zero()) throw std::domain_error("RatExpr: division by the zero function");
  if (auto c = o.num_.as_constant()) {
    // o = c / D: multiply by D / c without expanding D into a new factor
    RatExpr scaled = *this;
    scaled.num_ *= Rational(1) / *c;
    if (!o.has_trivial_den()) scaled *= RatExpr(o.den_expanded());
    *this = std::move(scaled);
    return *this;
  }
  *this *= o.inverse();
  return *this;
}

RatExpr RatExpr::pow(int k) const {
  if (k < 0) return inverse().pow(-k);
  RatExpr r;
  r.num_ = num_.pow(static_cast<unsigned>(k));
  Monomial m = den_mono_;
  for (auto& e : m) e *= k;
  r.den_mono_ = std::move(m);
  if (k > 0) {
    r.den_factors_ = den_factors_;
    for (auto& f : r.den_factors_) f.power *= k;
  }
  r.normalize();
  return r;
}

RatExpr RatExpr::derivative(std::size_t var) const {
  if (has_trivial_den()) return RatExpr(num_.derivative(var));
  // D = x^m * prod f_i^{e_i};  Q = x_var^{[m_var>0]} * prod f_i
  // (N/D)' = (N' Q - N (m_var prod f + x_var sum e_i f_i' prod_{j!=i} f_j)) / (D Q)
  const int m_var = mono_exponent(den_mono_, var);
  Expression prod_f(1);
  for (const auto& f : den_factors_) prod_f *= f.base;
  Expression log_term;  // D'/D * Q
  for (std::size_t i = 0; i < den_factors_.size(); ++i) {
    Expression fi_prime = den_factors_[i].base.derivative(var);
    if (fi_prime.is_zero()) continue;
    Expression others(fi_prime * Rational(den_factors_[i].power));
    for (std::size_t j = 0; j < den_factors_.size(); ++j)
      if (j != i) others *= den_factors_[j].base;
    log_term += others;
  }
  Expression q = prod_f;
  if (m_var > 0) {
    const Expression x = Expression::variable(var);
    log_term = log_term * x + prod_f * Rational(m_var);
    q = q * x;
  }
  RatExpr r;
  r.num_ = num_.derivative(var) * q - num_ * log_term;
  r.den_mono_ = den_mono_;
  r.den_factors_ = den_factors_;
  for (auto& f : r.den_factors_) f.power += 1;
  if (m_var > 0) {
    Monomial x(var + 1, 0);
    x[var] = 1;
    r.den_mono_ = mono_mul(r.den_mono_, x);
  }
  r.normalize();
  return r;
}

bool RatExpr::identical(const RatExpr& o) const {
  if (!(num_ == o.num_) || den_mono_ != o.den_mono_ || den_factors_.size() != o.den_factors_.size())
    return false;
  for (std::size_t i = 0; i < den_factors_.size(); ++i)
    if (den_factors_[i].power != o.den_factors_[i].power || !(den_factors_[i].base == o.den_factors_[i].base))
      return false;
  return true;
}

bool equal(const RatExpr& a, const RatExpr& b) { return (a - b).is_zero(); }

std::size_t variable_span(const RatExpr& e) {
  std::size_t n = e.den_monomial().size();
  auto scan = [&n](const Expression& x) {
    for (const auto& t : x.terms()) {
      n = std::max({n, t.mono.size(), t.exp_arg.width(), t.trig_arg.width()});
    }
  };
  scan(e.num());
  for (const auto& f : e.den_factors()) scan(f.base);
  return n;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string name_of(std::span<const std::string> names, std::size_t i) {
  return i < names.size() ? names[i] : "x" + std::to_string(i + 1);
}

std::string join_signed(const std::vector<std::string>& parts) {
  if (parts.empty()) return "0";
  std::string s = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    if (parts[i].front() == '-') s += " - " + parts[i].substr(1);
    else s += " + " + parts[i];
  }
  return s;
}

std::string coeff_times(const Rational& c, const std::string& body) {
  if (body.empty()) return to_string(c);
  if (c == 1) return body;
  if (c == -1) return "-" + body;
  return to_string(c) + "*" + body;
}

std::string monomial_string(const Monomial& m, std::span<const std::string> names) {
  std::string s;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += name_of(names, i);
    if (m[i] != 1) s += "^" + std::to_string(m[i]);
  }
  return s;
}

}  // namespace

std::string to_string(const LinearForm& f, std::span<const std::string> names) {
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < f.width(); ++i)
    if (f.coeff(i) != 0) parts.push_back(coeff_times(f.coeff(i), name_of(names, i)));
  if (f.constant() != 0) parts.push_back(to_string(f.constant()));
  return join_signed(parts);
}

std::string to_string(const Expression& e, std::span<const std::string> names) {
  std::vector<std::string> parts;
  for (const auto& t : e.terms()) {
    std::string body = monomial_string(t.mono, names);
    auto append = [&body](const std::string& s) {
      if (!body.empty()) body += "*";
      body += s;
    };
    if (!t.exp_arg.is_zero()) append("exp(" + to_string(t.exp_arg, names) + ")");
    if (t.trig == Trig::sin) append("sin(" + to_string(t.trig_arg, names) + ")");
    if (t.trig == Trig::cos) append("cos(" + to_string(t.trig_arg, names) + ")");
    parts.push_back(coeff_times(t.coeff, body));
  }
  return join_signed(parts);
}

std::string to_string(const RatExpr& e, std::span<const std::string> names) {
  if (e.has_trivial_den()) return to_string(e.num(), names);
  std::string den = monomial_string(e.den_monomial(), names);
  for (const auto& f : e.den_factors()) {
    if (!den.empty()) den += "*";
    den += "(" + to_string(f.base, names) + ")";
    if (f.power != 1) den += "^" + std::to_string(f.power);
  }
  const bool single_factor = e.den_monomial().empty() && e.den_factors().size() == 1 && e.den_factors()[0].power == 1;
  return "(" + to_string(e.num(), names) + ")/" + (single_factor ? den : "(" + den + ")");
}

}  // namespace jetsym
