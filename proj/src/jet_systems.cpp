#include "jetsym/jet.hpp"

namespace jetsym {

std::string_view to_string(SystemKind k) {
  switch (k) {
    case SystemKind::killing: return "killing";
    case SystemKind::homothety: return "homothety";
    case SystemKind::conformal: return "conformal";
    case SystemKind::affine: return "affine";
    case SystemKind::projective: return "projective";
    case SystemKind::mobility: return "mobility";
  }
  return "?";
}

std::optional<SystemKind> system_kind_from_string(std::string_view s) {
  for (auto k : {SystemKind::killing, SystemKind::homothety, SystemKind::conformal, SystemKind::affine,
                 SystemKind::projective, SystemKind::mobility})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

int equation_level(const LinearPdeSystem& sys, const Equation& e) {
  int level = 0;
  for (const auto& t : e.terms) {
    int order = 0;
    for (int a : t.alpha) order += a;
    level = std::max(level, order + sys.unknowns[t.unknown].weight);
  }
  return level;
}

namespace {

// Accumulates the terms of one equation, dropping zero coefficients.
class EquationBuilder {
 public:
  explicit EquationBuilder(std::size_t n) : n_(n) {}

  void add(const RatExpr& c, std::size_t unknown, std::initializer_list<std::size_t> derivs = {}) {
    if (c.is_zero()) return;
    std::vector<int> alpha(n_, 0);
    for (auto d : derivs) ++alpha[d];
    for (auto& t : eq_.terms)
      if (t.unknown == unknown && t.alpha == alpha) {
        t.coeff += c;
        return;
      }
    eq_.terms.push_back({c, unknown, std::move(alpha)});
  }

  Equation finish(std::string label) {
    std::erase_if(eq_.terms, [](const JetTerm& t) { return t.coeff.is_zero(); });
    eq_.label = std::move(label);
    return std::move(eq_);
  }

 private:
  std::size_t n_;
  Equation eq_;
};

std::vector<RatExpr> metric_nonvanishing(const MetricField& g) {
  std::vector<RatExpr> out = g.chart.excluded_locus;
  out.push_back(determinant(g.g));
  return out;
}

void push(LinearPdeSystem& sys, EquationBuilder& b, std::string label) {
  Equation e = b.finish(std::move(label));
  if (!e.terms.empty()) sys.equations.push_back(std::move(e));
}

std::string idx(std::initializer_list<std::size_t> ids) {
  std::string s;
  for (auto i : ids) s += std::to_string(i);
  return s;
}

// (L_v g)_ij terms for unknown v^k = unknown k.
void lie_metric_terms(EquationBuilder& b, const MetricField& g, std::size_t i, std::size_t j) {
  const std::size_t n = g.dim();
  for (std::size_t k = 0; k < n; ++k) {
    b.add(g.g[i][j].derivative(k), k);
    b.add(g.g[k][j], k, {i});
    b.add(g.g[i][k], k, {j});
  }
}

// (L_v G)^i_jk terms.
void lie_connection_terms(EquationBuilder& b, const ConnectionField& G, std::size_t i, std::size_t j, std::size_t k) {
  const std::size_t n = G.dim();
  b.add(RatExpr(1), i, {j, k});
  for (std::size_t m = 0; m < n; ++m) {
    b.add(G(i, j, k).derivative(m), m);
    b.add(-G(m, j, k), i, {m});
    b.add(G(i, m, k), m, {j});
    b.add(G(i, j, m), m, {k});
  }
}

std::vector<Unknown> vector_unknowns(const Chart& c) {
  std::vector<Unknown> u;
  for (const auto& name : c.coords) u.push_back({"v^" + name, 0});
  return u;
}

LinearPdeSystem connection_system(SystemKind kind, const ConnectionField& G, std::vector<RatExpr> nonvanishing) {
  const std::size_t n = G.dim();
  LinearPdeSystem sys;
  sys.kind = kind;
  sys.chart = G.chart;
  sys.order = 2;
  sys.unknowns = vector_unknowns(G.chart);
  sys.nonvanishing = std::move(nonvanishing);
  if (kind == SystemKind::projective)
    for (const auto& name : G.chart.coords) sys.unknowns.push_back({"psi_" + name, 2});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j; k < n; ++k) {
        EquationBuilder b(n);
        lie_connection_terms(b, G, i, j, k);
        if (kind == SystemKind::projective) {
          if (i == j) b.add(RatExpr(-1), n + k);
          if (i == k) b.add(RatExpr(-1), n + j);
        }
        push(sys, b, "LG" + idx({i, j, k}));
      }
  return sys;
}

}  // namespace

LinearPdeSystem build_system(SystemKind kind, const ConnectionField& conn) {
  if (kind != SystemKind::affine && kind != SystemKind::projective)
    throw JetError(std::string("system '") + std::string(to_string(kind)) + "' needs a metric");
  return connection_system(kind, conn, conn.chart.excluded_locus);
}

LinearPdeSystem build_system(SystemKind kind, const MetricField& g) {
  const std::size_t n = g.dim();
  if (kind == SystemKind::affine || kind == SystemKind::projective)
    return connection_system(kind, levi_civita(g), metric_nonvanishing(g));

  LinearPdeSystem sys;
  sys.kind = kind;
  sys.chart = g.chart;
  sys.order = 1;
  sys.nonvanishing = metric_nonvanishing(g);

  if (kind == SystemKind::mobility) {
    // Unknowns a_ij (i <= j); equations (n+1) nabla_k a_ij - mu_i g_jk - mu_j g_ik with
    // mu_i = g^{sr} nabla_s a_ri.
    const ConnectionField G = levi_civita(g);
    const Matrix ginv = inverse(g.g);
    std::vector<std::vector<std::size_t>> uid(n, std::vector<std::size_t>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        uid[i][j] = uid[j][i] = sys.unknowns.size();
        sys.unknowns.push_back({"a_" + g.chart.coords[i] + g.chart.coords[j], 0});
      }
    // nabla_k a_ij as terms
    auto nabla = [&](EquationBuilder& b, const RatExpr& f, std::size_t k, std::size_t i, std::size_t j) {
      b.add(f, uid[i][j], {k});
      for (std::size_t s = 0; s < n; ++s) {
        b.add(-f * G(s, k, i), uid[s][j]);
        b.add(-f * G(s, k, j), uid[i][s]);
      }
    };
    auto mu = [&](EquationBuilder& b, const RatExpr& f, std::size_t i) {
      for (std::size_t s = 0; s < n; ++s)
        for (std::size_t r = 0; r < n; ++r)
          if (!ginv[s][r].is_zero()) nabla(b, f * ginv[s][r], s, r, i);
    };
    const RatExpr np1(static_cast<long>(n + 1));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          EquationBuilder b(n);
          nabla(b, np1, k, i, j);
          if (!g.g[j][k].is_zero()) mu(b, -g.g[j][k], i);
          if (!g.g[i][k].is_zero()) mu(b, -g.g[i][k], j);
          push(sys, b, "sin" + idx({i, j, k}));
        }
    return sys;
  }

  sys.unknowns = vector_unknowns(g.chart);
  if (kind == SystemKind::conformal && n == 2) throw JetError("the conformal system is not of finite type for n = 2");
  if (kind == SystemKind::homothety) sys.unknowns.push_back({"lambda", 0});
  if (kind == SystemKind::conformal) sys.unknowns.push_back({"sigma", 1});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      EquationBuilder b(n);
      lie_metric_terms(b, g, i, j);
      if (kind == SystemKind::homothety) b.add(-g.g[i][j], n);
      if (kind == SystemKind::conformal) b.add(RatExpr(-2) * g.g[i][j], n);
      push(sys, b, "Lg" + idx({i, j}));
    }
  if (kind == SystemKind::homothety)
    for (std::size_t k = 0; k < n; ++k) {
      EquationBuilder b(n);
      b.add(RatExpr(1), n, {k});
      push(sys, b, "dlambda" + idx({k}));
    }
  return sys;
}

}  // namespace jetsym
