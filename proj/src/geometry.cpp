#include "jetsym/geometry.hpp"

#include <algorithm>
#include <numeric>

namespace jetsym {

// ---------------------------------------------------------------------------
// TensorField / ConnectionField

TensorField::TensorField(Chart c, std::vector<Variance> v) : chart(std::move(c)), variance(std::move(v)) {
  std::size_t count = 1;
  for (std::size_t i = 0; i < variance.size(); ++i) count *= chart.dim();
  components.assign(count, RatExpr());
}

std::size_t TensorField::offset(std::initializer_list<std::size_t> idx) const {
  if (idx.size() != rank()) throw std::out_of_range("TensorField: wrong number of indices");
  std::size_t off = 0;
  for (std::size_t i : idx) {
    if (i >= dim()) throw std::out_of_range("TensorField: index out of range");
    off = off * dim() + i;
  }
  return off;
}

std::vector<std::size_t> TensorField::indices(std::size_t flat) const {
  std::vector<std::size_t> idx(rank());
  for (std::size_t p = rank(); p-- > 0;) {
    idx[p] = flat % dim();
    flat /= dim();
  }
  return idx;
}

bool TensorField::is_zero() const {
  return std::all_of(components.begin(), components.end(), [](const RatExpr& e) { return e.is_zero(); });
}

ConnectionField::ConnectionField(Chart c) : chart(std::move(c)) {
  gamma.assign(dim() * dim() * dim(), RatExpr());
}

ConnectionField make_connection(const Chart& chart, std::vector<RatExpr> gamma) {
  chart.validate();
  ConnectionField conn(chart);
  if (gamma.size() != conn.gamma.size()) throw GeometryError("connection needs n^3 components");
  conn.gamma = std::move(gamma);
  const std::size_t n = conn.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        if (!equal(conn(i, j, k), conn(i, k, j)))
          throw GeometryError("connection has torsion: G^" + chart.coords[i] + "_" + chart.coords[j] +
                              chart.coords[k] + " is not symmetric");
  return conn;
}

// ---------------------------------------------------------------------------
// Linear algebra

namespace {

std::size_t weight(const RatExpr& e) {
  std::size_t w = e.num().size();
  for (const auto& f : e.den_factors()) w += f.base.size();
  return w;
}

// Row index of the lightest nonzero entry in column `col` at or below `from`.
std::optional<std::size_t> choose_pivot(const Matrix& a, std::size_t col, std::size_t from) {
  std::optional<std::size_t> best;
  for (std::size_t r = from; r < a.size(); ++r) {
    if (a[r][col].is_zero()) continue;
    if (!best || weight(a[r][col]) < weight(a[*best][col])) best = r;
  }
  return best;
}

}  // namespace

RatExpr determinant(const Matrix& m) {
  Matrix a = m;
  const std::size_t n = a.size();
  RatExpr det(1);
  for (std::size_t c = 0; c < n; ++c) {
    auto p = choose_pivot(a, c, c);
    if (!p) return RatExpr();
    if (*p != c) {
      std::swap(a[*p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    const RatExpr inv = a[c][c].inverse();
    for (std::size_t r = c + 1; r < n; ++r) {
      if (a[r][c].is_zero()) continue;
      const RatExpr f = a[r][c] * inv;
      for (std::size_t k = c + 1; k < n; ++k)
        if (!a[c][k].is_zero()) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

Matrix inverse(const Matrix& m) {
  const std::size_t n = m.size();
  Matrix a = m;
  Matrix inv(n, std::vector<RatExpr>(n));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = RatExpr(1);
  for (std::size_t c = 0; c < n; ++c) {
    auto p = choose_pivot(a, c, c);
    if (!p) throw GeometryError("matrix is degenerate");
    std::swap(a[*p], a[c]);
    std::swap(inv[*p], inv[c]);
    const RatExpr piv = a[c][c].inverse();
    for (std::size_t k = 0; k < n; ++k) {
      if (!a[c][k].is_zero()) a[c][k] *= piv;
      if (!inv[c][k].is_zero()) inv[c][k] *= piv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c].is_zero()) continue;
      const RatExpr f = a[r][c];
      for (std::size_t k = 0; k < n; ++k) {
        if (!a[c][k].is_zero()) a[r][k] -= f * a[c][k];
        if (!inv[c][k].is_zero()) inv[r][k] -= f * inv[c][k];
      }
    }
  }
  return inv;
}

// ---------------------------------------------------------------------------
// Points and signature

bool nonvanishing_at(const RatExpr& f, std::span<const Rational> point) {
  try {
    if (auto q = evaluate_exact(f, point)) return *q != 0;
    PrecisionScope scope(256);
    const Real v = evaluate_at(f, point, 256);
    return boost::multiprecision::abs(v) > boost::multiprecision::ldexp(Real(1), -200);
  } catch (const EvaluationError&) {
    return false;
  }
}

std::vector<Rational> generic_point(std::size_t n, const std::vector<RatExpr>& nonvanishing, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-40, 40);
  std::uniform_int_distribution<int> den(1, 40);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<Rational> p(n);
    for (auto& x : p) x = make_rational(num(rng), den(rng));
    if (std::all_of(nonvanishing.begin(), nonvanishing.end(), [&](const RatExpr& f) { return nonvanishing_at(f, p); }))
      return p;
  }
  throw GeometryError("no admissible evaluation point found");
}

std::pair<int, int> signature_at(const Matrix& g, std::span<const Rational> point, unsigned precision_bits) {
  PrecisionScope scope(precision_bits);
  const std::size_t n = g.size();
  std::vector<std::vector<Real>> a(n, std::vector<Real>(n));
  Real scale = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      a[i][j] = evaluate_at(g[i][j], point, precision_bits);
      scale = std::max(scale, Real(boost::multiprecision::abs(a[i][j])));
    }
  const Real tiny = scale * boost::multiprecision::ldexp(Real(1), -static_cast<int>(precision_bits) / 2);
  int plus = 0, minus = 0;
  std::vector<std::size_t> alive(n);
  std::iota(alive.begin(), alive.end(), 0);
  // Symmetric congruence elimination (Sylvester's law of inertia).
  while (!alive.empty()) {
    std::size_t best = alive.front();
    for (std::size_t i : alive)
      if (abs(a[i][i]) > abs(a[best][best])) best = i;
    if (abs(a[best][best]) <= tiny) {
      std::size_t bi = alive.front(), bj = alive.front();
      for (std::size_t i : alive)
        for (std::size_t j : alive)
          if (i != j && abs(a[i][j]) > abs(a[bi][bj])) bi = i, bj = j;
      if (bi == bj || abs(a[bi][bj]) <= tiny) throw GeometryError("metric is degenerate at the base point");
      // e_i <- e_i + s e_j makes the diagonal entry 2 s a_ij + a_jj nonzero
      const Real s = a[bi][bj] > 0 ? Real(1) : Real(-1);
      for (std::size_t k : alive) a[bi][k] += s * a[bj][k];
      for (std::size_t k : alive) a[k][bi] += s * a[k][bj];
      best = bi;
    }
    const Real piv = a[best][best];
    (piv > 0 ? plus : minus) += 1;
    std::erase(alive, best);
    for (std::size_t i : alive) {
      const Real f = a[i][best] / piv;
      for (std::size_t j : alive) a[i][j] -= f * a[best][j];
    }
  }
  return {plus, minus};
}

MetricField make_metric(Chart chart, Matrix g, std::vector<Rational> base_point, std::uint64_t seed) {
  chart.validate();
  const std::size_t n = chart.dim();
  if (g.size() != n) throw GeometryError("metric has the wrong number of rows");
  for (const auto& row : g)
    if (row.size() != n) throw GeometryError("metric has the wrong number of columns");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!equal(g[i][j], g[j][i])) throw GeometryError("metric is not symmetric");
  const RatExpr det = determinant(g);
  if (det.is_zero()) throw GeometryError("metric is degenerate (det g = 0)");

  MetricField m;
  m.chart = std::move(chart);
  m.g = std::move(g);
  std::vector<RatExpr> avoid = m.chart.excluded_locus;
  avoid.push_back(det);
  for (const auto& row : m.g)
    for (const auto& e : row)
      if (!e.has_trivial_den()) avoid.push_back(RatExpr(e.den_expanded()));
  m.chart.excluded_locus = std::move(avoid);
  std::mt19937_64 rng(seed);
  if (base_point.empty()) {
    base_point = generic_point(n, m.chart.excluded_locus, rng);
  } else {
    if (base_point.size() != n) throw GeometryError("base point has the wrong dimension");
    for (const auto& f : m.chart.excluded_locus)
      if (!nonvanishing_at(f, base_point)) throw GeometryError("base point lies on the excluded locus");
  }
  m.base_point = std::move(base_point);
  m.signature = signature_at(m.g, m.base_point);
  // Re-validate nearby: the signature is locally constant off the excluded locus.
  std::vector<Rational> nearby = m.base_point;
  for (int attempt = 0; attempt < 20; ++attempt) {
    for (std::size_t i = 0; i < n; ++i) nearby[i] = m.base_point[i] + make_rational(static_cast<long>((i + 1) * (attempt + 1)), 997);
    if (std::all_of(m.chart.excluded_locus.begin(), m.chart.excluded_locus.end(),
                    [&](const RatExpr& f) { return nonvanishing_at(f, nearby); }))
      break;
  }
  if (signature_at(m.g, nearby) != m.signature) throw GeometryError("signature is unstable near the base point");
  return m;
}

// ---------------------------------------------------------------------------
// Connection and curvature

ConnectionField levi_civita(const MetricField& g) {
  const std::size_t n = g.dim();
  const Matrix ginv = inverse(g.g);
  // dg[l][j][k] = d_k g_lj
  std::vector<std::vector<std::vector<RatExpr>>> dg(n, std::vector<std::vector<RatExpr>>(n, std::vector<RatExpr>(n)));
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) dg[l][j][k] = g.g[l][j].derivative(k);
  ConnectionField conn(g.chart);
  const RatExpr half(Rational(1, 2));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j; k < n; ++k) {
      // first kind: G_ljk = (d_j g_lk + d_k g_lj - d_l g_jk) / 2
      std::vector<RatExpr> first(n);
      for (std::size_t l = 0; l < n; ++l) first[l] = (dg[l][k][j] + dg[l][j][k] - dg[j][k][l]) * half;
      for (std::size_t i = 0; i < n; ++i) {
        RatExpr s;
        for (std::size_t l = 0; l < n; ++l)
          if (!ginv[i][l].is_zero() && !first[l].is_zero()) s += ginv[i][l] * first[l];
        conn(i, j, k) = s;
        conn(i, k, j) = s;
      }
    }
  return conn;
}

TensorField riemann(const ConnectionField& conn) {
  const std::size_t n = conn.dim();
  TensorField r(conn.chart, {Variance::up, Variance::down, Variance::down, Variance::down});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = k + 1; l < n; ++l) {
          RatExpr v = conn(i, l, j).derivative(k) - conn(i, k, j).derivative(l);
          for (std::size_t m = 0; m < n; ++m) {
            if (!conn(i, k, m).is_zero() && !conn(m, l, j).is_zero()) v += conn(i, k, m) * conn(m, l, j);
            if (!conn(i, l, m).is_zero() && !conn(m, k, j).is_zero()) v -= conn(i, l, m) * conn(m, k, j);
          }
          r.at({i, j, l, k}) = -v;
          r.at({i, j, k, l}) = std::move(v);
        }
  return r;
}

TensorField ricci(const TensorField& riem) {
  const std::size_t n = riem.dim();
  TensorField ric(riem.chart, {Variance::down, Variance::down});
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t l = 0; l < n; ++l) {
      RatExpr s;
      for (std::size_t k = 0; k < n; ++k) s += riem.at({k, j, k, l});
      ric.at({j, l}) = s;
    }
  return ric;
}

TensorField lowered_riemann(const MetricField& g, const TensorField& riem) {
  const std::size_t n = g.dim();
  TensorField low(g.chart, {Variance::down, Variance::down, Variance::down, Variance::down});
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d) {
          RatExpr s;
          for (std::size_t i = 0; i < n; ++i)
            if (!g.g[a][i].is_zero() && !riem.at({i, b, c, d}).is_zero()) s += g.g[a][i] * riem.at({i, b, c, d});
          low.at({a, b, c, d}) = s;
        }
  return low;
}

namespace {

RatExpr contract_scalar(const Matrix& ginv, const TensorField& ric) {
  const std::size_t n = ginv.size();
  RatExpr s;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t l = 0; l < n; ++l)
      if (!ginv[j][l].is_zero() && !ric.at({j, l}).is_zero()) s += ginv[j][l] * ric.at({j, l});
  return s;
}

}  // namespace

CurvatureSuite curvature_suite(const ConnectionField& conn, const MetricField* g, bool with_norm) {
  CurvatureSuite out;
  out.riemann = riemann(conn);
  out.ricci = ricci(out.riemann);
  if (!g) return out;
  const std::size_t n = g->dim();
  const Matrix ginv = inverse(g->g);
  out.scalar = contract_scalar(ginv, out.ricci);
  if (with_norm) {
    // |R|^2 = R_abcd R^abcd; raise with g^-1 one slot at a time.
    TensorField t = lowered_riemann(*g, out.riemann);
    TensorField up = t;
    for (std::size_t slot = 0; slot < 4; ++slot) {
      TensorField next = up;
      for (std::size_t flat = 0; flat < up.components.size(); ++flat) {
        auto idx = up.indices(flat);
        RatExpr s;
        for (std::size_t m = 0; m < n; ++m) {
          if (ginv[idx[slot]][m].is_zero()) continue;
          auto src = idx;
          src[slot] = m;
          const auto& v = up.components[((src[0] * n + src[1]) * n + src[2]) * n + src[3]];
          if (!v.is_zero()) s += ginv[idx[slot]][m] * v;
        }
        next.components[flat] = s;
      }
      up = std::move(next);
    }
    RatExpr norm;
    for (std::size_t flat = 0; flat < t.components.size(); ++flat)
      if (!t.components[flat].is_zero() && !up.components[flat].is_zero()) norm += t.components[flat] * up.components[flat];
    out.riem_norm_sq = norm;
  }
  return out;
}

ProjectiveWeyl projective_weyl(const ConnectionField& conn) {
  const std::size_t n = conn.dim();
  ProjectiveWeyl out;
  out.w = TensorField(conn.chart, {Variance::up, Variance::down, Variance::down, Variance::down});
  if (n == 2) {
    out.dimension_two = true;
    return out;
  }
  const TensorField r = riemann(conn);
  const TensorField ric = ricci(r);
  // P_ab = Sym/(n-1) + Alt/(n+1) of E_ab = Ric_ba
  std::vector<std::vector<RatExpr>> p(n, std::vector<RatExpr>(n));
  const RatExpr sym_c(Rational(1, static_cast<long>(2 * (n - 1))));
  const RatExpr alt_c(Rational(1, static_cast<long>(2 * (n + 1))));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const RatExpr& eab = ric.at({b, a});
      const RatExpr& eba = ric.at({a, b});
      p[a][b] = (eab + eba) * sym_c + (eab - eba) * alt_c;
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          RatExpr v = r.at({i, j, k, l});
          if (i == k) v -= p[l][j];
          if (i == l) v += p[k][j];
          if (i == j) v += p[k][l] - p[l][k];
          out.w.at({i, k, l, j}) = std::move(v);
        }
  return out;
}

TensorField conformal_weyl(const MetricField& g) {
  const std::size_t n = g.dim();
  if (n < 3) throw GeometryError("conformal Weyl tensor requires n >= 3");
  const ConnectionField conn = levi_civita(g);
  const CurvatureSuite cs = curvature_suite(conn, &g);
  const TensorField low = lowered_riemann(g, cs.riemann);
  const RatExpr c1(Rational(1, static_cast<long>(n - 2)));
  const RatExpr c2 = *cs.scalar * RatExpr(Rational(1, static_cast<long>((n - 1) * (n - 2))));
  const auto& G = g.g;
  auto ric = [&](std::size_t a, std::size_t b) -> const RatExpr& { return cs.ricci.at({a, b}); };
  TensorField w(g.chart, {Variance::down, Variance::down, Variance::down, Variance::down});
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d) {
          RatExpr v = low.at({a, b, c, d});
          v -= (ric(a, c) * G[b][d] - ric(a, d) * G[b][c] + ric(b, d) * G[a][c] - ric(b, c) * G[a][d]) * c1;
          v += (G[a][c] * G[b][d] - G[a][d] * G[b][c]) * c2;
          w.at({a, b, c, d}) = std::move(v);
        }
  return w;
}

TensorField cotton_tensor(const MetricField& g) {
  const std::size_t n = g.dim();
  if (n != 3) throw GeometryError("Cotton tensor is only provided for n = 3");
  const ConnectionField conn = levi_civita(g);
  const CurvatureSuite cs = curvature_suite(conn, &g);
  std::vector<std::vector<RatExpr>> p(n, std::vector<RatExpr>(n));
  const RatExpr quarter(Rational(1, 4));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) p[i][j] = cs.ricci.at({i, j}) - *cs.scalar * g.g[i][j] * quarter;
  auto nabla = [&](std::size_t i, std::size_t j, std::size_t k) {
    RatExpr v = p[i][j].derivative(k);
    for (std::size_t m = 0; m < n; ++m) {
      if (!conn(m, k, i).is_zero()) v -= conn(m, k, i) * p[m][j];
      if (!conn(m, k, j).is_zero()) v -= conn(m, k, j) * p[i][m];
    }
    return v;
  };
  TensorField c(g.chart, {Variance::down, Variance::down, Variance::down});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) c.at({i, j, k}) = nabla(i, j, k) - nabla(i, k, j);
  return c;
}

CurvatureFlags curvature_flags(const MetricField& g) {
  const std::size_t n = g.dim();
  const ConnectionField conn = levi_civita(g);
  const CurvatureSuite cs = curvature_suite(conn, &g);
  CurvatureFlags flags;
  flags.flat = cs.riemann.is_zero();
  const RatExpr c = *cs.scalar * RatExpr(Rational(1, static_cast<long>(n * (n - 1))));
  if (auto cc = c.as_constant()) {
    const TensorField low = lowered_riemann(g, cs.riemann);
    bool ok = true;
    for (std::size_t a = 0; a < n && ok; ++a)
      for (std::size_t b = 0; b < n && ok; ++b)
        for (std::size_t k = 0; k < n && ok; ++k)
          for (std::size_t l = 0; l < n && ok; ++l) {
            const RatExpr model = (g.g[a][k] * g.g[b][l] - g.g[a][l] * g.g[b][k]) * c;
            ok = equal(low.at({a, b, k, l}), model);
          }
    if (ok) flags.constant_curvature = *cc;
  }
  if (n == 2) flags.conformally_flat = true;
  else if (n == 3) flags.conformally_flat = cotton_tensor(g).is_zero();
  else flags.conformally_flat = conformal_weyl(g).is_zero();
  flags.projectively_flat = flags.constant_curvature.has_value();
  return flags;
}

}  // namespace jetsym
