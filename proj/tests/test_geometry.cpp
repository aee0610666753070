#include "jetsym/catalogue.hpp"
#include "jetsym/geometry.hpp"
#include "jetsym/parser.hpp"

#include <doctest.h>

#include <random>

using namespace jetsym;

namespace {

Chart chart_of(std::vector<std::string> coords) {
  Chart c;
  c.coords = std::move(coords);
  return c;
}

const std::vector<std::pair<std::string, int>>& metric_models() {
  static const std::vector<std::pair<std::string, int>> m = {
      {"flat", 3},           {"constant_curvature", 2}, {"constant_curvature", 3}, {"pp_wave_lorentz", 4},
      {"pp_wave_split", 4},  {"pp_wave_split", 5},      {"kruckovic1", 3},         {"kruckovic2", 3},
      {"kruckovic3", 3},     {"metric_2d", 2},          {"metric_2d_alt", 2},      {"sphere_times_flat", 3},
      {"sphere_times_flat", 4}, {"sphere_times_sphere", 4},
  };
  return m;
}

// Solves a small dense real system by Gaussian elimination with partial pivoting.
std::vector<Real> solve_real(std::vector<std::vector<Real>> a, std::vector<Real> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (abs(a[r][c]) > abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      Real f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<Real> x(n);
  for (std::size_t i = n; i-- > 0;) {
    Real s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

}  // namespace

TEST_CASE("determinant and inverse") {
  const Chart c = chart_of({"x", "y"});
  Matrix m{{parse_expr("x", c), parse_expr("1", c)}, {parse_expr("1", c), parse_expr("y", c)}};
  CHECK(to_string(determinant(m), c.coords) == "x*y - 1");
  const Matrix inv = inverse(m);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      RatExpr s = m[i][0] * inv[0][j] + m[i][1] * inv[1][j];
      CHECK(equal(s, RatExpr(i == j ? 1 : 0)));
    }
  Matrix sing{{parse_expr("x", c), parse_expr("x*y", c)}, {parse_expr("1", c), parse_expr("y", c)}};
  CHECK_THROWS_AS(inverse(sing), GeometryError);
}

TEST_CASE("make_metric validation") {
  const Chart c = chart_of({"x", "y"});
  CHECK_THROWS_AS(make_metric(c, {{RatExpr(1), RatExpr(0)}, {RatExpr::variable(0), RatExpr(1)}}), GeometryError);
  CHECK_THROWS_AS(make_metric(c, {{RatExpr(1), RatExpr(1)}, {RatExpr(1), RatExpr(1)}}), GeometryError);
  CHECK_THROWS_AS(make_metric(c, {{RatExpr(1)}}), GeometryError);
  const MetricField g = make_metric(c, {{RatExpr(1), RatExpr(0)}, {RatExpr(0), RatExpr(-1)}});
  CHECK(g.signature == std::pair{1, 1});
}

TEST_CASE("signature_at counts eigenvalue signs") {
  const std::vector<Rational> p{1, 2};
  // [[0, 1], [1, 0]] has eigenvalues +-1
  CHECK(signature_at({{RatExpr(0), RatExpr(1)}, {RatExpr(1), RatExpr(0)}}, p) == std::pair{1, 1});
  CHECK(signature_at({{RatExpr(2), RatExpr(1)}, {RatExpr(1), RatExpr(2)}}, p) == std::pair{2, 0});
  CHECK(signature_at({{RatExpr(-2), RatExpr(1)}, {RatExpr(1), RatExpr(-2)}}, p) == std::pair{0, 2});
}

TEST_CASE("connections must be torsion free") {
  const Chart c = chart_of({"x", "y"});
  std::vector<RatExpr> gamma(8, RatExpr(0));
  gamma[1] = RatExpr::variable(0);  // G^0_01 without G^0_10
  CHECK_THROWS_AS(make_connection(c, gamma), GeometryError);
}

TEST_CASE("Levi-Civita connection is metric compatible") {
  for (const auto& [name, n] : metric_models()) {
    INFO(name << " n=" << n);
    const Model m = get_model(name, {}, n);
    const auto& g = m.metric->g;
    const auto& G = *m.connection;
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          RatExpr d = g[i][j].derivative(k);
          for (int s = 0; s < n; ++s) d -= G(s, k, i) * g[s][j] + G(s, k, j) * g[i][s];
          CHECK(d.is_zero());
        }
  }
}

TEST_CASE("Christoffel symbols agree with the geodesic equations") {
  // Accelerations from the Euler-Lagrange equations of g_ij x'^i x'^j, with metric
  // derivatives taken by central differences, against -G^i_jk x'^j x'^k.
  for (const auto& [name, n] : metric_models()) {
    INFO(name << " n=" << n);
    const Model m = get_model(name, {}, n);
    const auto& g = m.metric->g;
    const std::vector<Rational> p = m.metric->base_point;
    const unsigned bits = 512;
    PrecisionScope scope(bits);
    const Rational h(1, 1000000000000000L);
    std::mt19937_64 rng(7);
    std::vector<Real> v(n);
    for (auto& vi : v) vi = to_real(Rational(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 3)));

    auto value = [&](int i, int j, std::vector<Rational> q) { return evaluate_at(g[i][j], q, bits); };
    auto partial = [&](int i, int j, int k) {
      auto a = p, b = p;
      a[k] += h;
      b[k] -= h;
      return Real((value(i, j, a) - value(i, j, b)) / (2 * to_real(h)));
    };
    std::vector<std::vector<Real>> gm(n, std::vector<Real>(n));
    std::vector<Real> rhs(n, Real(0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) gm[i][j] = value(i, j, p);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) rhs[i] += (partial(j, k, i) / 2 - partial(i, j, k)) * v[j] * v[k];
    const auto acc = solve_real(gm, rhs);
    for (int i = 0; i < n; ++i) {
      Real expect = 0;
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) expect -= evaluate_at((*m.connection)(i, j, k), p, bits) * v[j] * v[k];
      CHECK(abs(acc[i] - expect) < Real("1e-20") * (1 + abs(expect)));
    }
  }
}

TEST_CASE("pp-wave Christoffel symbols") {
  const Model m = get_model("pp_wave_lorentz", {}, 4);
  const auto& G = *m.connection;
  CHECK(to_string(G(0, 1, 2), m.metric->chart.coords) == "z");
  CHECK(to_string(G(0, 2, 1), m.metric->chart.coords) == "z");
  CHECK(to_string(G(2, 1, 1), m.metric->chart.coords) == "-z");
  int nonzero = 0;
  for (const auto& e : G.gamma) nonzero += !e.is_zero();
  CHECK(nonzero == 3);
}

namespace {

ConnectionField projective_change(const ConnectionField& c, const std::vector<RatExpr>& psi) {
  ConnectionField out = c;
  const std::size_t n = c.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        if (i == k) out(i, j, k) += psi[j];
        if (i == j) out(i, j, k) += psi[k];
      }
  return out;
}

}  // namespace

TEST_CASE("Riemann symmetries and first Bianchi identity") {
  std::vector<Model> models;
  for (const auto& [name, n] : metric_models()) models.push_back(get_model(name, {}, n));
  models.push_back(get_model("egorov_connection", {}, 3));
  models.push_back(get_model("egorov_connection", {}, 4));
  for (const auto& m : models) {
    INFO(m.descriptor.info.name << " n=" << m.descriptor.n);
    const TensorField r = riemann(*m.connection);
    const std::size_t n = r.dim();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          for (std::size_t l = 0; l < n; ++l) {
            CHECK((r.at({i, j, k, l}) + r.at({i, j, l, k})).is_zero());
            CHECK((r.at({i, j, k, l}) + r.at({i, k, l, j}) + r.at({i, l, j, k})).is_zero());
          }
  }
}

TEST_CASE("Egorov connection projective Weyl tensor") {
  const Model m = get_model("egorov_connection", {}, 3);
  const ProjectiveWeyl pw = projective_weyl(*m.connection);
  CHECK_FALSE(pw.dimension_two);
  const auto& w = pw.w;
  CHECK(equal(w.at({0, 1, 2, 1}), RatExpr(1)));
  CHECK(equal(w.at({0, 2, 1, 1}), RatExpr(-1)));
  int nonzero = 0;
  for (const auto& e : w.components) nonzero += !e.is_zero();
  CHECK(nonzero == 2);
}

TEST_CASE("projective Weyl tensor is projectively invariant") {
  const Chart c3 = chart_of({"x1", "x2", "x3"});
  const std::vector<RatExpr> psi{parse_expr("x2", c3), parse_expr("x1*x3 + 1", c3), parse_expr("exp(x1)", c3)};
  std::vector<ConnectionField> conns{*get_model("egorov_connection", {}, 3).connection,
                                     *get_model("kruckovic1", {}, 3).connection,
                                     *get_model("pp_wave_lorentz", {}, 4).connection,
                                     *get_model("constant_curvature", {}, 3).connection};
  for (const auto& conn : conns) {
    std::vector<RatExpr> p = psi;
    p.resize(conn.dim(), RatExpr::variable(0));
    Chart chart = conn.chart;
    const ConnectionField moved = projective_change(conn, p);
    const auto w0 = projective_weyl(conn).w;
    const auto w1 = projective_weyl(moved).w;
    for (std::size_t a = 0; a < w0.components.size(); ++a) CHECK(equal(w0.components[a], w1.components[a]));
  }
}

TEST_CASE("Beltrami: projective flatness matches constant curvature") {
  for (const auto& [name, n] : metric_models()) {
    if (n < 3) continue;
    INFO(name << " n=" << n);
    const Model m = get_model(name, {}, n);
    const CurvatureFlags f = curvature_flags(*m.metric);
    CHECK(projective_weyl(*m.connection).w.is_zero() == f.constant_curvature.has_value());
    CHECK(f.projectively_flat == f.constant_curvature.has_value());
  }
}

TEST_CASE("curvature flags match the catalogue") {
  std::vector<Model> models;
  for (const auto& [name, n] : metric_models()) models.push_back(get_model(name, {}, n));
  models.push_back(get_model("flat", {{"q", 2}}, 4));
  models.push_back(get_model("constant_curvature", {{"c", -1}, {"q", 1}}, 3));
  for (const auto& m : models) {
    INFO(m.descriptor.info.name << " n=" << m.descriptor.n);
    const CurvatureFlags f = curvature_flags(*m.metric);
    const ExpectedFlags& e = m.descriptor.flags;
    if (e.flat) CHECK(f.flat == *e.flat);
    if (e.conformally_flat) CHECK(f.conformally_flat == *e.conformally_flat);
    if (e.projectively_flat) CHECK(f.projectively_flat == *e.projectively_flat);
    if (e.constant_curvature) {
      REQUIRE(f.constant_curvature.has_value());
      CHECK(*f.constant_curvature == *e.constant_curvature);
    }
    if (e.ricci_flat) {
      const TensorField ric = ricci(riemann(*m.connection));
      CHECK(ric.is_zero() == *e.ricci_flat);
    }
  }
}

TEST_CASE("split pp-wave conformal Weyl pattern") {
  for (int n : {4, 5}) {
    const Model m = get_model("pp_wave_split", {}, n);
    const TensorField cw = conformal_weyl(*m.metric);
    const std::size_t y = 1, w = 3;
    for (std::size_t f = 0; f < cw.components.size(); ++f) {
      const auto idx = cw.indices(f);
      const bool first = (idx[0] == y && idx[1] == w) || (idx[0] == w && idx[1] == y);
      const bool second = (idx[2] == y && idx[3] == w) || (idx[2] == w && idx[3] == y);
      CHECK(cw.components[f].is_zero() == !(first && second));
    }
    const RatExpr v = cw.at({y, w, y, w});
    CHECK(v.as_constant().has_value());
    CHECK(equal(v, cw.at({w, y, w, y})));
    CHECK(equal(v, -cw.at({y, w, w, y})));
  }
}

TEST_CASE("Cotton tensor in dimension three") {
  // Plane waves 2dxdy + H dy^2 + dz^2 are conformally flat exactly when H_zzz = 0.
  CHECK(cotton_tensor(*get_model("pp_wave_lorentz", {}, 3).metric).is_zero());
  const Chart c = chart_of({"x", "y", "z"});
  Matrix g(3, std::vector<RatExpr>(3, RatExpr(0)));
  g[0][1] = g[1][0] = RatExpr(1);
  g[1][1] = parse_expr("z^3", c);
  g[2][2] = RatExpr(1);
  CHECK_FALSE(cotton_tensor(make_metric(c, g)).is_zero());
  CHECK(cotton_tensor(*get_model("kruckovic2", {}, 3).metric).is_zero());
  CHECK(cotton_tensor(*get_model("sphere_times_flat", {}, 3).metric).is_zero());
  CHECK(cotton_tensor(*get_model("constant_curvature", {}, 3).metric).is_zero());
  CHECK_THROWS_AS(conformal_weyl(*get_model("metric_2d").metric), GeometryError);
}

TEST_CASE("homotheties rescale the curvature norm") {
  // L_v g = lambda g implies v(|R|^2) = -2 lambda |R|^2.
  for (const char* name : {"metric_2d", "metric_2d_alt", "kruckovic1", "pp_wave_lorentz", "pp_wave_split"}) {
    const Model m = get_model(name);
    const auto suite = curvature_suite(*m.connection, &*m.metric, true);
    REQUIRE(suite.riem_norm_sq.has_value());
    for (const auto& gen : m.descriptor.generators) {
      if (gen.expected != FieldKind::Homothety) continue;
      INFO(name << ": " << gen.label);
      const RatExpr lhs = lie_function(gen.field, *suite.riem_norm_sq) + RatExpr(2 * *gen.lambda) * *suite.riem_norm_sq;
      CHECK(lhs.is_zero());
    }
  }
  const Model m = get_model("metric_2d");
  CHECK_FALSE(curvature_suite(*m.connection, &*m.metric, true).riem_norm_sq->is_zero());
}
