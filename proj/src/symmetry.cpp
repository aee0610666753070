#include "jetsym/symmetry.hpp"

#include "jetsym/linalg.hpp"

#include <map>

namespace jetsym {

bool VectorFieldExpr::is_zero() const {
  return std::all_of(components.begin(), components.end(), [](const RatExpr& e) { return e.is_zero(); });
}

VectorFieldExpr make_field(const Chart& chart, std::vector<RatExpr> components) {
  if (components.size() != chart.dim()) throw GeometryError("vector field needs one component per coordinate");
  return VectorFieldExpr{chart, std::move(components)};
}

std::string_view to_string(FieldKind k) {
  switch (k) {
    case FieldKind::Killing: return "Killing";
    case FieldKind::Homothety: return "Homothety";
    case FieldKind::Conformal: return "Conformal";
    case FieldKind::AffineOnly: return "AffineOnly";
    case FieldKind::ProjectiveOnly: return "ProjectiveOnly";
    case FieldKind::NotProjective: return "NotProjective";
  }
  return "?";
}

std::optional<FieldKind> field_kind_from_string(std::string_view s) {
  for (auto k : {FieldKind::Killing, FieldKind::Homothety, FieldKind::Conformal, FieldKind::AffineOnly,
                 FieldKind::ProjectiveOnly, FieldKind::NotProjective})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

namespace {

void require_same_chart(const Chart& a, const Chart& b) {
  if (!same_coordinates(a, b)) throw GeometryError("chart mismatch");
}

bool add_product(RatExpr& acc, const RatExpr& a, const RatExpr& b) {
  if (a.is_zero() || b.is_zero()) return false;
  acc += a * b;
  return true;
}

// Trace extraction psi_j = (L_v G)^k_jk / (n+1), then verification of the full equation.
std::optional<std::vector<RatExpr>> projective_cofactor(const TensorField& lg) {
  const std::size_t n = lg.dim();
  std::vector<RatExpr> psi(n);
  const RatExpr scale(Rational(1, static_cast<long>(n + 1)));
  for (std::size_t j = 0; j < n; ++j) {
    RatExpr s;
    for (std::size_t k = 0; k < n; ++k) s += lg.at({k, j, k});
    psi[j] = s * scale;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j; k < n; ++k) {
        RatExpr r = lg.at({i, j, k});
        if (i == k) r -= psi[j];
        if (i == j) r -= psi[k];
        if (!r.is_zero()) return std::nullopt;
      }
  return psi;
}

// First nonzero entry of g (diagonal first), used to read off L_v g = f g.
std::pair<std::size_t, std::size_t> reference_entry(const MetricField& g) {
  const std::size_t n = g.dim();
  for (std::size_t i = 0; i < n; ++i)
    if (!g.g[i][i].is_zero()) return {i, i};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!g.g[i][j].is_zero()) return {i, j};
  throw GeometryError("metric is identically zero");
}

bool is_multiple(const TensorField& l, const MetricField& g, const RatExpr& f) {
  const std::size_t n = g.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (!(l.at({i, j}) - f * g.g[i][j]).is_zero()) return false;
  return true;
}

}  // namespace

RatExpr lie_function(const VectorFieldExpr& v, const RatExpr& f) {
  RatExpr s;
  for (std::size_t k = 0; k < v.dim(); ++k)
    if (!v.components[k].is_zero()) add_product(s, v.components[k], f.derivative(k));
  return s;
}

TensorField lie_metric(const VectorFieldExpr& v, const MetricField& g) {
  require_same_chart(v.chart, g.chart);
  const std::size_t n = g.dim();
  std::vector<std::vector<RatExpr>> dv(n, std::vector<RatExpr>(n));  // dv[k][i] = d_i v^k
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) dv[k][i] = v.components[k].derivative(i);
  TensorField l(g.chart, {Variance::down, Variance::down});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      RatExpr s = lie_function(v, g.g[i][j]);
      for (std::size_t k = 0; k < n; ++k) {
        add_product(s, g.g[k][j], dv[k][i]);
        add_product(s, g.g[i][k], dv[k][j]);
      }
      l.at({i, j}) = s;
      l.at({j, i}) = s;
    }
  return l;
}

TensorField lie_connection(const VectorFieldExpr& v, const ConnectionField& conn) {
  require_same_chart(v.chart, conn.chart);
  const std::size_t n = conn.dim();
  std::vector<std::vector<RatExpr>> dv(n, std::vector<RatExpr>(n));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) dv[k][i] = v.components[k].derivative(i);
  TensorField l(conn.chart, {Variance::up, Variance::down, Variance::down});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j; k < n; ++k) {
        RatExpr s = lie_function(v, conn(i, j, k));
        for (std::size_t m = 0; m < n; ++m) {
          add_product(s, -conn(m, j, k), dv[i][m]);
          add_product(s, conn(i, m, k), dv[m][j]);
          add_product(s, conn(i, j, m), dv[m][k]);
        }
        s += dv[i][j].derivative(k);
        l.at({i, j, k}) = s;
        l.at({i, k, j}) = s;
      }
  return l;
}

Classification classify_field(const VectorFieldExpr& v, const MetricField& g) {
  return classify_field(v, g, levi_civita(g));
}

Classification classify_field(const VectorFieldExpr& v, const MetricField& g, const ConnectionField& lc) {
  Classification c;
  const TensorField l = lie_metric(v, g);
  if (l.is_zero()) {
    c.kind = FieldKind::Killing;
    return c;
  }
  const auto [a, b] = reference_entry(g);
  const RatExpr f = l.at({a, b}) / g.g[a][b];
  if (is_multiple(l, g, f)) {
    if (auto lambda = f.as_constant(); lambda && *lambda != 0) {
      c.kind = FieldKind::Homothety;
      c.lambda = *lambda;
    } else {
      c.kind = FieldKind::Conformal;
      c.sigma = f;
    }
    return c;
  }
  Classification p = classify_field(v, lc);
  return p;
}

Classification classify_field(const VectorFieldExpr& v, const ConnectionField& conn) {
  Classification c;
  const TensorField lg = lie_connection(v, conn);
  if (lg.is_zero()) {
    c.kind = FieldKind::AffineOnly;
    return c;
  }
  if (auto psi = projective_cofactor(lg)) {
    c.kind = FieldKind::ProjectiveOnly;
    c.psi = std::move(*psi);
    return c;
  }
  c.kind = FieldKind::NotProjective;
  return c;
}

MobilityTensor make_mobility(TensorField a, const MetricField& g) {
  const std::size_t n = g.dim();
  if (a.rank() != 2 || a.dim() != n) throw GeometryError("mobility tensor must be a (1,1) tensor on the metric's chart");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      RatExpr lij, lji;
      for (std::size_t k = 0; k < n; ++k) {
        add_product(lij, g.g[i][k], a.at({k, j}));
        add_product(lji, g.g[j][k], a.at({k, i}));
      }
      if (!equal(lij, lji)) throw GeometryError("mobility tensor is not g-self-adjoint");
    }
  return MobilityTensor{std::move(a)};
}

MobilityTensor phi_map(const VectorFieldExpr& v, const MetricField& g) {
  const std::size_t n = g.dim();
  const TensorField l = lie_metric(v, g);
  const Matrix ginv = inverse(g.g);
  TensorField a(g.chart, {Variance::up, Variance::down});
  RatExpr trace;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      RatExpr s;
      for (std::size_t k = 0; k < n; ++k) add_product(s, ginv[i][k], l.at({k, j}));
      a.at({i, j}) = s;
      if (i == j) trace += s;
    }
  const RatExpr t = trace * RatExpr(Rational(1, static_cast<long>(n + 1)));
  for (std::size_t i = 0; i < n; ++i) a.at({i, i}) -= t;
  return make_mobility(std::move(a), g);
}

TensorField mobility_residual(const MobilityTensor& m, const MetricField& g) {
  return mobility_residual(m, g, levi_civita(g));
}

TensorField mobility_residual(const MobilityTensor& m, const MetricField& g, const ConnectionField& G) {
  const std::size_t n = g.dim();
  const TensorField& a = m.a;
  const Matrix ginv = inverse(g.g);
  // nabla_k a^i_j
  auto nabla_mixed = [&](std::size_t i, std::size_t j, std::size_t k) {
    RatExpr s = a.at({i, j}).derivative(k);
    for (std::size_t q = 0; q < n; ++q) {
      add_product(s, G(i, k, q), a.at({q, j}));
      add_product(s, -G(q, k, j), a.at({i, q}));
    }
    return s;
  };
  std::vector<std::vector<std::vector<RatExpr>>> da(n, std::vector<std::vector<RatExpr>>(n, std::vector<RatExpr>(n)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) da[i][j][k] = nabla_mixed(i, j, k);
  // a^{is}_{,s} = g^{sr} nabla_s a^i_r (the metric is parallel)
  std::vector<RatExpr> up(n), down(n);
  for (std::size_t i = 0; i < n; ++i) {
    RatExpr s;
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r) add_product(s, ginv[q][r], da[i][r][q]);
    up[i] = s;
  }
  for (std::size_t j = 0; j < n; ++j) {
    RatExpr s;
    for (std::size_t q = 0; q < n; ++q) s += da[q][j][q];
    down[j] = s;
  }
  TensorField r(g.chart, {Variance::up, Variance::down, Variance::down});
  const RatExpr np1(static_cast<long>(n + 1));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        RatExpr v = da[i][j][k] * np1;
        add_product(v, -up[i], g.g[j][k]);
        if (i == k) v -= down[j];
        r.at({i, j, k}) = v;
      }
  return r;
}

VectorFieldExpr bracket(const VectorFieldExpr& u, const VectorFieldExpr& w) {
  require_same_chart(u.chart, w.chart);
  std::vector<RatExpr> c(u.dim());
  for (std::size_t i = 0; i < u.dim(); ++i) c[i] = lie_function(u, w.components[i]) - lie_function(w, u.components[i]);
  return VectorFieldExpr{u.chart, std::move(c)};
}

// ---------------------------------------------------------------------------
// Algebra checks

namespace {

struct SignatureLess {
  bool operator()(const Term& a, const Term& b) const { return compare_signature(a, b) < 0; }
};

// Rows of a rational matrix whose kernel is the space of constant linear relations among
// the fields; nullopt when some component cannot be cleared of its denominator exactly.
std::optional<QMatrix> relation_rows(const std::vector<VectorFieldExpr>& fields) {
  if (fields.empty()) return QMatrix{};
  const std::size_t n = fields.front().dim();
  const std::size_t m = fields.size();
  QMatrix rows;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Expression> dens;
    for (const auto& f : fields) {
      if (f.components[i].has_trivial_den()) continue;
      Expression d = f.components[i].den_expanded();
      if (std::none_of(dens.begin(), dens.end(), [&](const Expression& e) { return e == d; })) dens.push_back(d);
    }
    Expression common(1);
    for (const auto& d : dens) common *= d;
    std::map<Term, std::vector<Rational>, SignatureLess> table;
    for (std::size_t a = 0; a < m; ++a) {
      const RatExpr cleared = fields[a].components[i] * RatExpr(common);
      if (!cleared.has_trivial_den()) return std::nullopt;
      for (const auto& t : cleared.num().terms()) {
        auto [it, inserted] = table.try_emplace(t, std::vector<Rational>(m, Rational(0)));
        it->second[a] = t.coeff;
      }
    }
    for (auto& [t, row] : table) rows.push_back(std::move(row));
  }
  return rows;
}

bool passes_mode(const VectorFieldExpr& v, GeometrySource geom, AlgebraMode mode) {
  if (mode == AlgebraMode::none) return true;
  if (std::holds_alternative<const MetricField*>(geom)) {
    const MetricField& g = *std::get<const MetricField*>(geom);
    if (mode == AlgebraMode::killing || mode == AlgebraMode::homothety) {
      const TensorField l = lie_metric(v, g);
      if (l.is_zero()) return true;
      if (mode == AlgebraMode::killing) return false;
      const auto [a, b] = reference_entry(g);
      const RatExpr f = l.at({a, b}) / g.g[a][b];
      return f.as_constant().has_value() && is_multiple(l, g, f);
    }
    const ConnectionField lc = levi_civita(g);
    return passes_mode(v, &lc, mode);
  }
  const ConnectionField& conn = *std::get<const ConnectionField*>(geom);
  if (mode == AlgebraMode::killing || mode == AlgebraMode::homothety)
    throw GeometryError("metric classes need a metric");
  const TensorField lg = lie_connection(v, conn);
  if (lg.is_zero()) return true;
  return mode == AlgebraMode::projective && projective_cofactor(lg).has_value();
}

}  // namespace

std::size_t numeric_span_dimension(const std::vector<VectorFieldExpr>& fields, int points, unsigned precision_bits,
                                   std::uint64_t seed) {
  if (fields.empty()) return 0;
  const std::size_t n = fields.front().dim();
  std::vector<RatExpr> avoid;
  for (const auto& f : fields)
    for (const auto& c : f.components)
      if (!c.has_trivial_den()) avoid.push_back(RatExpr(c.den_expanded()));
  for (const auto& f : fields.front().chart.excluded_locus) avoid.push_back(f);
  std::mt19937_64 rng(seed);
  PrecisionScope scope(precision_bits);
  std::vector<std::vector<Real>> rows;
  for (int p = 0; p < points; ++p) {
    const auto pt = generic_point(n, avoid, rng);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Real> row;
      for (const auto& f : fields) row.push_back(evaluate_at(f.components[i], pt, precision_bits));
      rows.push_back(std::move(row));
    }
  }
  // Gaussian elimination with partial pivoting and a relative threshold.
  Real scale = 0;
  for (const auto& r : rows)
    for (const auto& x : r) scale = std::max(scale, Real(abs(x)));
  const Real tiny = scale * boost::multiprecision::ldexp(Real(1), -static_cast<int>(precision_bits) / 2);
  std::size_t rank = 0;
  const std::size_t cols = fields.size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t best = rank;
    for (std::size_t r = rank; r < rows.size(); ++r)
      if (abs(rows[r][c]) > abs(rows[best][c])) best = r;
    if (abs(rows[best][c]) <= tiny) continue;
    std::swap(rows[best], rows[rank]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      const Real f = rows[r][c] / rows[rank][c];
      for (std::size_t k = c; k < cols; ++k) rows[r][k] -= f * rows[rank][k];
    }
    ++rank;
  }
  return rank;
}

StructureConstantsTable algebra_check(const std::vector<VectorFieldExpr>& fields, GeometrySource geom,
                                      AlgebraMode mode) {
  if (fields.empty()) throw GeometryError("algebra_check needs at least one field");
  for (std::size_t i = 0; i < fields.size(); ++i)
    if (!passes_mode(fields[i], geom, mode))
      throw ClassificationError("field " + std::to_string(i) + " fails the requested classification", i);

  StructureConstantsTable t;
  t.basis_size = fields.size();
  auto rows = relation_rows(fields);
  if (!rows) {
    t.independent_dim = numeric_span_dimension(fields);
    return t;
  }
  t.exact = true;
  QMatrix reduced = *rows;
  t.basis = rref(reduced);
  t.independent_dim = t.basis.size();

  std::vector<VectorFieldExpr> basis;
  for (auto i : t.basis) basis.push_back(fields[i]);
  const std::size_t m = basis.size();
  t.constants.assign(m, std::vector<std::vector<Rational>>(m, std::vector<Rational>(m, Rational(0))));
  t.closure_ok = true;
  for (std::size_t i = 0; i < m && t.closure_ok; ++i)
    for (std::size_t j = i + 1; j < m && t.closure_ok; ++j) {
      const VectorFieldExpr w = bracket(basis[i], basis[j]);
      std::vector<VectorFieldExpr> cols = basis;
      cols.push_back(w);
      auto r = relation_rows(cols);
      if (!r) {
        t.closure_ok = false;
        break;
      }
      QMatrix a;
      std::vector<Rational> rhs;
      for (auto& row : *r) {
        rhs.push_back(row.back());
        row.pop_back();
        a.push_back(std::move(row));
      }
      auto c = solve(a, rhs, m);
      if (!c) {
        t.closure_ok = false;
        break;
      }
      // exact confirmation of w = sum c_k e_k
      for (std::size_t comp = 0; comp < w.dim(); ++comp) {
        RatExpr s;
        for (std::size_t k = 0; k < m; ++k)
          if ((*c)[k] != 0) s += basis[k].components[comp] * RatExpr((*c)[k]);
        if (!equal(s, w.components[comp])) t.closure_ok = false;
      }
      for (std::size_t k = 0; k < m; ++k) {
        t.constants[i][j][k] = (*c)[k];
        t.constants[j][i][k] = -(*c)[k];
      }
    }
  if (!t.closure_ok) return t;
  t.antisymmetric = true;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        if (t.constants[i][j][k] != -t.constants[j][i][k]) t.antisymmetric = false;
  t.jacobi = true;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l) {
          Rational s(0);
          for (std::size_t q = 0; q < m; ++q)
            s += t.constants[i][j][q] * t.constants[q][k][l] + t.constants[j][k][q] * t.constants[q][i][l] +
                 t.constants[k][i][q] * t.constants[q][j][l];
          if (s != 0) t.jacobi = false;
        }
  return t;
}

bool is_sl2(const StructureConstantsTable& t) {
  if (!t.closure_ok || t.independent_dim != 3) return false;
  const auto& c = t.constants;
  // Killing form B_ij = tr(ad_i ad_j), (ad_i)_{km} = c^k_im
  QMatrix b(3, std::vector<Rational>(3, Rational(0)));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t m = 0; m < 3; ++m) b[i][j] += c[i][m][k] * c[j][k][m];
  if (rank(b) != 3) return false;
  // definite iff the leading principal minors have the patterns (+,+,+) or (-,+,-)
  const Rational d1 = b[0][0];
  const Rational d2 = b[0][0] * b[1][1] - b[0][1] * b[1][0];
  const Rational d3 = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
                      b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                      b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
  const bool positive = d1 > 0 && d2 > 0 && d3 > 0;
  const bool negative = d1 < 0 && d2 > 0 && d3 < 0;
  return !positive && !negative;
}

std::array<RatExpr, 4> geodesic_ode_2d(const MetricField& g) {
  if (g.dim() != 2) throw GeometryError("geodesic ODE extraction needs n = 2");
  const ConnectionField G = levi_civita(g);
  const RatExpr two(2);
  return {-G(1, 0, 0), G(0, 0, 0) - two * G(1, 0, 1), two * G(0, 0, 1) - G(1, 1, 1), G(0, 1, 1)};
}

}  // namespace jetsym
