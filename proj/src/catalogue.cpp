#include "jetsym/catalogue.hpp"

#include "jetsym/parser.hpp"

#include <functional>
#include <sstream>

namespace jetsym {

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::paper: return "paper";
    case Provenance::derived: return "derived";
    case Provenance::trivial: return "trivial";
  }
  return "?";
}

const ConnectionField& Model::conn() const {
  if (!connection) throw GeometryError("model has no connection");
  return *connection;
}

namespace {

using Params = std::map<std::string, Rational>;

Expected paper(long v) { return {v, Provenance::paper}; }
Expected derived(long v) { return {v, Provenance::derived}; }
Expected trivial(long v) { return {v, Provenance::trivial}; }

long binom(long n, long k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::string str(const Rational& q) { return "(" + q.get_str() + ")"; }

std::string label_of(const std::vector<std::string>& comps, const std::vector<std::string>& coords) {
  std::string out;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (comps[i] == "0") continue;
    if (!out.empty()) out += " + ";
    out += comps[i] == "1" ? "d_" + coords[i] : "(" + comps[i] + ")*d_" + coords[i];
  }
  return out.empty() ? "0" : out;
}

// Collects metric entries and generators written in the expression grammar.
class Builder {
 public:
  Builder(std::vector<std::string> coords, Params params) {
    chart_.coords = std::move(coords);
    chart_.params = std::move(params);
    chart_.validate();
    const std::size_t n = chart_.dim();
    g_.assign(n, std::vector<RatExpr>(n, RatExpr(0)));
  }

  const Chart& chart() const { return chart_; }
  std::size_t dim() const { return chart_.dim(); }
  const std::string& coord(std::size_t i) const { return chart_.coords[i]; }

  RatExpr parse(const std::string& text) const { return parse_expr(text, chart_); }

  void set(std::size_t i, std::size_t j, const std::string& text) {
    g_[i][j] = parse(text);
    g_[j][i] = g_[i][j];
  }

  // Generator from per-coordinate components; missing entries are zero.
  void field(std::map<std::size_t, std::string> comps, FieldKind kind, std::optional<Rational> lambda = {}) {
    std::vector<std::string> text(dim(), "0");
    for (auto& [i, s] : comps) text[i] = s;
    std::vector<RatExpr> parsed;
    parsed.reserve(dim());
    for (const auto& s : text) parsed.push_back(parse(s));
    gens_.push_back({label_of(text, chart_.coords), make_field(chart_, std::move(parsed)), kind, lambda});
  }

  Model metric_model(ModelDescriptor d) {
    Model m;
    m.metric = make_metric(chart_, g_);
    m.connection = levi_civita(*m.metric);
    d.generators = std::move(gens_);
    m.descriptor = std::move(d);
    return m;
  }

  Model connection_model(std::vector<RatExpr> gamma, ModelDescriptor d) {
    Model m;
    m.connection = make_connection(chart_, std::move(gamma));
    d.generators = std::move(gens_);
    m.descriptor = std::move(d);
    return m;
  }

 private:
  Chart chart_;
  Matrix g_;
  std::vector<GeneratorSpec> gens_;
};

std::vector<std::string> numbered(const std::string& stem, int from, int to) {
  std::vector<std::string> out;
  for (int i = from; i <= to; ++i) out.push_back(stem + std::to_string(i));
  return out;
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

// Rational square root, if there is one.
std::optional<Rational> rational_sqrt(const Rational& q) {
  if (q < 0) return std::nullopt;
  mpz_class a = q.get_num(), b = q.get_den(), ra, rb;
  mpz_sqrt(ra.get_mpz_t(), a.get_mpz_t());
  mpz_sqrt(rb.get_mpz_t(), b.get_mpz_t());
  if (ra * ra != a || rb * rb != b) return std::nullopt;
  return Rational(ra, rb);
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw CatalogueError(msg);
}

// Signs for a signature with q negative entries placed last.
std::vector<int> signs(int n, const Rational& q) {
  require(is_integer(q) && q >= 0 && q <= n, "q must be an integer in [0, n]");
  const int neg = static_cast<int>(q.get_num().get_si());
  std::vector<int> eps(n, 1);
  for (int i = n - neg; i < n; ++i) eps[i] = -1;
  return eps;
}

std::string sgn(int e) { return e > 0 ? "" : "-"; }

}  // namespace

namespace {

// Stereographic space form 4 sum eps_i dx_i^2 / (1 + c sum eps_i x_i^2)^2 on the given
// coordinates of b, together with its Killing fields.
void space_form(Builder& b, const std::vector<std::size_t>& idx, const std::vector<int>& eps, const Rational& c) {
  std::string quad;
  for (std::size_t a = 0; a < idx.size(); ++a)
    quad += (a ? " + " : "") + std::to_string(eps[a]) + "*" + b.coord(idx[a]) + "^2";
  const std::string conf = "(1 + " + str(c) + "*(" + quad + "))";
  for (std::size_t a = 0; a < idx.size(); ++a) b.set(idx[a], idx[a], std::to_string(4 * eps[a]) + "/" + conf + "^2");

  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t bb = a + 1; bb < idx.size(); ++bb) {
      const auto& xa = b.coord(idx[a]);
      const auto& xb = b.coord(idx[bb]);
      b.field({{idx[a], sgn(eps[bb]) + xb}, {idx[bb], (eps[a] > 0 ? "-" : "") + xa}}, FieldKind::Killing);
    }
  }
  for (std::size_t a = 0; a < idx.size(); ++a) {
    std::map<std::size_t, std::string> comps;
    const std::string k = str(2 * c * eps[a]) + "*" + b.coord(idx[a]);
    for (std::size_t bb = 0; bb < idx.size(); ++bb) {
      if (bb == a)
        comps[idx[bb]] = "1 - " + str(c) + "*(" + quad + ") + " + k + "*" + b.coord(idx[bb]);
      else
        comps[idx[bb]] = k + "*" + b.coord(idx[bb]);
    }
    b.field(std::move(comps), FieldKind::Killing);
  }
}

// eps_i u_i d_j + eps_j u_j d_i (i <= j): the non-Killing linear fields of a flat factor.
void flat_affine(Builder& b, const std::vector<std::size_t>& idx, const std::vector<int>& eps) {
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t bb = a; bb < idx.size(); ++bb) {
      const auto& xa = b.coord(idx[a]);
      const auto& xb = b.coord(idx[bb]);
      if (a == bb)
        b.field({{idx[a], xa}}, FieldKind::AffineOnly);
      else
        b.field({{idx[a], sgn(eps[bb]) + xb}, {idx[bb], sgn(eps[a]) + xa}}, FieldKind::AffineOnly);
    }
}

void flat_killing(Builder& b, const std::vector<std::size_t>& idx, const std::vector<int>& eps) {
  for (auto i : idx) b.field({{i, "1"}}, FieldKind::Killing);
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t bb = a + 1; bb < idx.size(); ++bb)
      b.field({{idx[a], sgn(eps[bb]) + b.coord(idx[bb])}, {idx[bb], (eps[a] > 0 ? "-" : "") + b.coord(idx[a])}},
              FieldKind::Killing);
}

std::vector<std::size_t> range_idx(std::size_t from, std::size_t to) {
  std::vector<std::size_t> out;
  for (std::size_t i = from; i < to; ++i) out.push_back(i);
  return out;
}

Model build_flat(int n, const Params& p) {
  const auto eps = signs(n, p.at("q"));
  Builder b(numbered("x", 1, n), p);
  const auto all = range_idx(0, n);
  for (int i = 0; i < n; ++i) b.set(i, i, std::to_string(eps[i]));
  flat_killing(b, all, eps);
  std::map<std::size_t, std::string> euler;
  for (int i = 0; i < n; ++i) euler[i] = b.coord(i);
  b.field(euler, FieldKind::Homothety, Rational(2));
  // Symmetric linear maps: off-diagonal ones and the traceless diagonal ones.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      b.field({{i, sgn(eps[j]) + b.coord(j)}, {j, sgn(eps[i]) + b.coord(i)}}, FieldKind::AffineOnly);
  for (int i = 0; i + 1 < n; ++i) b.field({{i, b.coord(i)}, {i + 1, "-" + b.coord(i + 1)}}, FieldKind::AffineOnly);
  for (int i = 0; i < n; ++i) {
    std::map<std::size_t, std::string> comps;
    for (int k = 0; k < n; ++k) comps[k] = b.coord(i) + "*" + b.coord(k);
    b.field(comps, FieldKind::ProjectiveOnly);
  }
  ModelDescriptor d;
  d.expected.isometry = trivial(n * (n + 1) / 2);
  d.expected.homothety = trivial(n * (n + 1) / 2 + 1);
  if (n >= 3) d.expected.conformal = trivial((n + 1) * (n + 2) / 2);
  d.expected.affine = paper(n * n + n);
  d.expected.projective = paper(n * n + 2 * n);
  d.expected.mobility = paper(binom(n + 2, 2));
  d.flags.flat = true;
  d.flags.projectively_flat = true;
  d.flags.ricci_flat = true;
  if (n >= 3) d.flags.conformally_flat = true;
  d.flags.constant_curvature = Rational(0);
  const int neg = static_cast<int>(p.at("q").get_num().get_si());
  d.expected_signature = {n - neg, neg};
  return b.metric_model(std::move(d));
}

Model build_constant_curvature(int n, const Params& p) {
  const Rational& c = p.at("c");
  require(c != 0, "c must be nonzero");
  const auto eps = signs(n, p.at("q"));
  Builder b(numbered("x", 1, n), p);
  space_form(b, range_idx(0, n), eps, c);
  ModelDescriptor d;
  const long iso = n * (n + 1) / 2;
  d.expected.isometry = paper(iso);
  d.expected.homothety = paper(iso);
  d.expected.affine = paper(iso);
  if (n >= 3) d.expected.conformal = trivial((n + 1) * (n + 2) / 2);
  d.expected.projective = trivial(n * n + 2 * n);
  d.expected.mobility = paper(binom(n + 2, 2));
  d.flags.flat = false;
  d.flags.projectively_flat = true;
  if (n >= 3) d.flags.conformally_flat = true;
  d.flags.ricci_flat = false;
  d.flags.constant_curvature = c;
  const int neg = static_cast<int>(p.at("q").get_num().get_si());
  d.expected_signature = {n - neg, neg};
  return b.metric_model(std::move(d));
}

Model build_egorov(int n, const Params& p) {
  Builder b(numbered("x", 1, n), p);
  std::vector<RatExpr> gamma(static_cast<std::size_t>(n) * n * n, RatExpr(0));
  auto at = [n](int i, int j, int k) { return static_cast<std::size_t>((i * n + j) * n + k); };
  gamma[at(0, 1, 2)] = RatExpr::variable(1);
  gamma[at(0, 2, 1)] = RatExpr::variable(1);
  ModelDescriptor d;
  d.expected.projective = paper(n * n - 2 * n + 5);
  d.flags.projectively_flat = false;
  return b.connection_model(std::move(gamma), std::move(d));
}

}  // namespace

namespace {

Model build_pp_lorentz(int n, const Params& p) {
  Builder b(concat({"x", "y", "z"}, numbered("u", 4, n)), p);
  b.set(0, 1, "1");
  b.set(1, 1, "z^2");
  b.set(2, 2, "1");
  for (int i = 3; i < n; ++i) b.set(i, i, "1");
  const auto us = range_idx(3, n);
  const std::vector<int> ones(us.size(), 1);

  b.field({{0, "1"}}, FieldKind::Killing);
  b.field({{1, "1"}}, FieldKind::Killing);
  b.field({{0, "-z*exp(y)"}, {2, "exp(y)"}}, FieldKind::Killing);
  b.field({{0, "z*exp(-y)"}, {2, "exp(-y)"}}, FieldKind::Killing);
  flat_killing(b, us, ones);
  for (auto i : us) b.field({{0, b.coord(i)}, {i, "-y"}}, FieldKind::Killing);
  std::map<std::size_t, std::string> h{{0, "2*x"}, {2, "z"}};
  for (auto i : us) h[i] = b.coord(i);
  b.field(h, FieldKind::Homothety, Rational(2));
  b.field({{0, "y"}}, FieldKind::AffineOnly);
  for (auto i : us) b.field({{0, b.coord(i)}}, FieldKind::AffineOnly);
  flat_affine(b, us, ones);

  ModelDescriptor d;
  const long iso = (n * n - 3 * n + 8) / 2;
  d.expected.isometry = paper(iso);
  d.expected.homothety = paper(iso + 1);
  d.expected.affine = paper(n * n - 3 * n + 6);
  d.expected.projective = paper(n * n - 3 * n + 6);
  d.flags.flat = false;
  d.flags.projectively_flat = false;
  d.expected_signature = {n - 1, 1};
  return b.metric_model(std::move(d));
}

Model build_pp_split(int n, const Params& p) {
  Builder b(concat({"x", "y", "z", "w"}, numbered("u", 5, n)), p);
  std::vector<int> eps;
  for (int i = 5; i <= n; ++i) {
    const Rational& e = p.at("eps" + std::to_string(i));
    require(e == 1 || e == -1, "eps" + std::to_string(i) + " must be 1 or -1");
    eps.push_back(e > 0 ? 1 : -1);
  }
  b.set(0, 3, "1/2");
  b.set(1, 2, "1/2");
  b.set(3, 3, "y^2");
  for (int i = 4; i < n; ++i) b.set(i, i, std::to_string(eps[i - 4]));
  const auto us = range_idx(4, n);

  using K = FieldKind;
  b.field({{0, "1"}}, K::Killing);
  b.field({{2, "1"}}, K::Killing);
  b.field({{3, "1"}}, K::Killing);
  b.field({{1, "1"}, {0, "-2*y*w"}, {2, "w^2"}}, K::Killing);
  b.field({{0, "y"}, {2, "-w"}}, K::Killing);
  b.field({{0, "z + y*w^2"}, {1, "-w"}, {2, "-1/3*w^3"}}, K::Killing);
  b.field({{2, "x"}, {3, "-y"}, {0, "2/3*y^3"}}, K::Killing);
  b.field({{0, "x"}, {1, "y"}, {2, "-z"}, {3, "-w"}}, K::Killing);
  // Listed among the homotheties; without the u-scaling it is only affine once n > 4.
  if (n == 4)
    b.field({{0, "2*x"}, {1, "y"}, {2, "z"}}, K::Homothety, Rational(2));
  else
    b.field({{0, "2*x"}, {1, "y"}, {2, "z"}}, K::AffineOnly);
  flat_killing(b, us, eps);
  for (std::size_t a = 0; a < us.size(); ++a) {
    const std::string u = b.coord(us[a]);
    const std::string k = std::to_string(2 * eps[a]) + "*" + u;
    b.field({{2, k}, {us[a], "-y"}}, K::Killing);
    b.field({{0, k}, {us[a], "-w"}}, K::Killing);
  }
  b.field({{2, "y"}}, K::AffineOnly);
  b.field({{0, "w"}}, K::AffineOnly);
  b.field({{0, "y"}, {2, "w"}}, K::AffineOnly);
  for (std::size_t a = 0; a < us.size(); ++a) {
    const std::string u = b.coord(us[a]);
    const std::string k = std::to_string(2 * eps[a]) + "*" + u;
    b.field({{2, k}, {us[a], "y"}}, K::AffineOnly);
    b.field({{0, k}, {us[a], "w"}}, K::AffineOnly);
  }
  flat_affine(b, us, eps);

  ModelDescriptor d;
  const long m = n - 4;
  d.expected.isometry = derived(8 + 3 * m + binom(m, 2));
  d.expected.homothety = derived(9 + 3 * m + binom(m, 2));
  d.expected.conformal = derived(9 + 3 * m + binom(m, 2));
  d.expected.affine = paper(n * n - 3 * n + 8);
  d.expected.projective = paper(n * n - 3 * n + 8);
  d.flags.flat = false;
  d.flags.ricci_flat = true;
  d.flags.conformally_flat = false;
  d.flags.projectively_flat = false;
  int neg = 2;
  for (int e : eps) neg += e < 0;
  d.expected_signature = {n - neg, neg};
  return b.metric_model(std::move(d));
}

}  // namespace

namespace {

// Extra coordinates u4..un of a trivially extended three-dimensional model.
void flat_extension(Builder& b, int n) {
  for (int i = 3; i < n; ++i) b.set(i, i, "1");
}

void kruckovic_expected(ModelDescriptor& d) {
  d.expected.isometry = paper(4);
  d.expected.homothety = paper(5);
  d.expected.mobility = paper(2);
  d.expected.projective = paper(6);
  d.expected.affine = paper(6);
  d.flags.projectively_flat = false;
  d.expected_signature = {2, 1};
}

Model build_kruckovic1(int n, const Params& p) {
  const Rational& c = p.at("c");
  require(c != 2, "c must differ from 2");
  Builder b(concat({"x", "y", "z"}, numbered("u", 4, n)), p);
  b.set(0, 0, "k");
  b.set(0, 1, "(2 - c)*exp(c*x)");
  b.set(2, 2, "exp(2*x)");
  flat_extension(b, n);

  using K = FieldKind;
  b.field({{1, "1"}}, K::Killing);
  b.field({{2, "1"}}, K::Killing);
  b.field({{1, "z"}, {2, "exp((c - 2)*x)"}}, K::Killing);
  b.field({{0, "1"}, {1, "-c*y"}, {2, "-z"}}, K::Killing);
  // The homothety also scales the flat factor of an extension.
  std::map<std::size_t, std::string> h{{1, c == 0 ? "2*y + k/2*x" : "2*y + k*exp(-c*x)/((c - 2)*c)"}, {2, "z"}};
  for (int i = 3; i < n; ++i) h[i] = b.coord(i);
  b.field(h, K::Homothety, Rational(2));
  if (c == 0)
    b.field({{1, "2*y"}, {2, "z"}}, K::AffineOnly);
  else
    b.field({{1, "exp(c*x)"}}, K::AffineOnly);
  // Extension: parallel fields d_y, d_u and the functions (2-c)e^{cx}/c (2x for c = 0)
  // and u_i whose gradients they are.
  const std::string phi = c == 0 ? "2*x" : "(2 - c)/c*exp(c*x)";
  const auto us = range_idx(3, n);
  const std::vector<int> ones(us.size(), 1);
  flat_killing(b, us, ones);
  for (auto i : us) {
    b.field({{i, phi}, {1, "-" + b.coord(i)}}, K::Killing);
    b.field({{1, b.coord(i)}}, K::AffineOnly);
  }
  flat_affine(b, us, ones);

  ModelDescriptor d;
  kruckovic_expected(d);
  // For c = 1 the warping function e^x has vanishing Hessian over a flat base.
  d.flags.flat = c == 1;
  d.flags.projectively_flat = c == 1;
  if (n > 3) {
    const long iso = 4 + 2 * (n - 3) + binom(n - 3, 2);
    d.expected.isometry = derived(iso);
    d.expected.homothety = derived(iso + 1);
    d.expected.affine = derived((n - 1) * (n - 2) + 4);
    d.expected.projective = derived((n - 1) * (n - 2) + 4);
    d.expected.mobility.reset();
    d.expected_signature = {n - 1, 1};
  }
  return b.metric_model(std::move(d));
}

Model build_kruckovic2(int, const Params& p) {
  Builder b({"x", "y", "z"}, p);
  b.set(0, 0, "k");
  b.set(0, 1, "exp(2*x)");
  b.set(2, 2, "-exp(2*x)");
  ModelDescriptor d;
  kruckovic_expected(d);
  return b.metric_model(std::move(d));
}

Model build_kruckovic3(int, const Params& p) {
  const Rational& omega = p.at("omega");
  require(omega > 0 && omega < 2, "omega must lie in (0, 2)");
  const auto root = rational_sqrt(4 - omega * omega);
  require(root.has_value(), "omega must make sqrt(4 - omega^2) rational");
  Params q = p;
  q["s"] = *root;
  // (4/omega^2) cos^2(omega x/2) = (2/omega^2)(1 + cos(omega x))
  q["a"] = Rational(2) / (omega * omega);
  Builder b({"x", "y", "z"}, q);
  b.set(0, 0, "k");
  b.set(0, 1, "exp(s*x)");
  b.set(2, 2, "-a*(1 + cos(omega*x))*exp(s*x)");
  ModelDescriptor d;
  kruckovic_expected(d);
  return b.metric_model(std::move(d));
}

Model build_metric_2d(int, const Params& p) {
  const Rational& eps = p.at("eps");
  require(eps == 1 || eps == -1, "eps must be 1 or -1");
  Builder b({"x", "y"}, p);
  b.set(0, 0, "x");
  b.set(1, 1, "-2*eps*x");
  b.field({{1, "1"}}, FieldKind::Killing);
  b.field({{0, "x"}, {1, "y"}}, FieldKind::Homothety, Rational(3));
  b.field({{0, "2*x*y"}, {1, "y^2"}}, FieldKind::ProjectiveOnly);
  ModelDescriptor d;
  d.expected.isometry = derived(1);
  d.expected.homothety = paper(2);
  d.expected.affine = paper(2);
  d.expected.projective = paper(3);
  d.flags.projectively_flat = false;
  d.flags.flat = false;
  d.expected_signature = eps > 0 ? std::pair{1, 1} : std::pair{2, 0};
  return b.metric_model(std::move(d));
}

Model build_metric_2d_alt(int, const Params& p) {
  const Rational& eps = p.at("eps");
  require(eps == 1 || eps == -1, "eps must be 1 or -1");
  Builder b({"x", "y"}, p);
  b.set(0, 0, "1/y^4");
  b.set(0, 1, "-x/y^5");
  b.set(1, 1, "x^2/y^6 - eps/y^8");
  b.field({{0, "x"}, {1, "-y"}}, FieldKind::Homothety, Rational(6));
  b.field({{1, "x"}}, FieldKind::ProjectiveOnly);
  b.field({{0, "y"}}, FieldKind::Killing);
  ModelDescriptor d;
  d.expected.isometry = derived(1);
  d.expected.homothety = paper(2);
  d.expected.affine = paper(2);
  d.expected.projective = paper(3);
  d.flags.projectively_flat = false;
  d.flags.flat = false;
  d.expected_signature = eps > 0 ? std::pair{1, 1} : std::pair{2, 0};
  return b.metric_model(std::move(d));
}

}  // namespace

namespace {

Model build_sphere_times_flat(int n, const Params& p) {
  const Rational& c = p.at("c");
  require(c != 0, "c must be nonzero");
  Builder b(concat({"x", "y"}, numbered("u", 3, n)), p);
  space_form(b, {0, 1}, {1, 1}, c);
  const auto us = range_idx(2, n);
  const std::vector<int> ones(us.size(), 1);
  for (auto i : us) b.set(i, i, "1");
  flat_killing(b, us, ones);
  flat_affine(b, us, ones);

  ModelDescriptor d;
  const long m = n - 2;
  d.expected.isometry = derived(3 + m * (m + 1) / 2);
  d.expected.homothety = derived(3 + m * (m + 1) / 2);
  d.expected.affine = paper(3 + m + m * m);
  d.expected.projective = paper(3 + m + m * m);
  d.flags.flat = false;
  d.flags.projectively_flat = false;
  d.flags.conformally_flat = n == 3 ? std::optional<bool>(true) : std::nullopt;
  d.expected_signature = {n, 0};
  return b.metric_model(std::move(d));
}

Model build_sphere_times_sphere(int n, const Params& p) {
  const Rational& c = p.at("c");
  const Rational& cbar = p.at("cbar");
  require(c != 0 || cbar != 0, "c and cbar must not both vanish");
  Builder b(concat({"x", "y"}, numbered("u", 3, n)), p);
  space_form(b, {0, 1}, {1, 1}, c);
  const auto us = range_idx(2, n);
  space_form(b, us, std::vector<int>(us.size(), 1), cbar);

  ModelDescriptor d;
  const long m = n - 2;
  if (c != 0 && cbar != 0) {
    d.expected.isometry = derived(3 + m * (m + 1) / 2);
    d.expected.homothety = derived(3 + m * (m + 1) / 2);
    d.expected.affine = derived(3 + m * (m + 1) / 2);
    d.expected.projective = derived(3 + m * (m + 1) / 2);
  }
  d.flags.flat = false;
  d.flags.projectively_flat = false;
  d.expected_signature = {n, 0};
  return b.metric_model(std::move(d));
}

struct Entry {
  ModelInfo info;
  std::function<std::vector<ParamSpec>(int)> schema;
  std::function<Model(int, const Params&)> build;
};

std::function<std::vector<ParamSpec>(int)> fixed(std::vector<ParamSpec> s) {
  return [s = std::move(s)](int) { return s; };
}

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = [] {
    std::vector<Entry> e;
    auto add = [&e](std::string name, ModelKind kind, std::string formula, int min_n, int max_n, int def_n,
                    std::function<std::vector<ParamSpec>(int)> schema, std::function<Model(int, const Params&)> build) {
      ModelInfo info{std::move(name), kind, std::move(formula), min_n, max_n, def_n, schema(def_n)};
      e.push_back({std::move(info), std::move(schema), std::move(build)});
    };
    const ParamSpec q{"q", 0, "integer 0 <= q <= n: number of negative entries"};
    add("flat", ModelKind::metric, "sum_i eps_i dx_i^2", 2, 0, 3, fixed({q}), build_flat);
    add("constant_curvature", ModelKind::metric, "4 sum_i eps_i dx_i^2 / (1 + c sum_i eps_i x_i^2)^2", 2, 0, 3,
        fixed({{"c", 1, "c != 0"}, q}), build_constant_curvature);
    add("egorov_connection", ModelKind::connection, "G^1_23 = G^1_32 = x2, all other components zero", 3, 0, 3,
        fixed({}), build_egorov);
    add("pp_wave_lorentz", ModelKind::metric, "2 dx dy + z^2 dy^2 + dz^2 + sum_{i>=4} du_i^2", 3, 0, 4, fixed({}),
        build_pp_lorentz);
    add("pp_wave_split", ModelKind::metric, "dx dw + dy dz + y^2 dw^2 + sum_{i>=5} eps_i du_i^2", 4, 0, 4,
        [](int n) {
          std::vector<ParamSpec> s;
          for (int i = 5; i <= n; ++i) s.push_back({"eps" + std::to_string(i), 1, "1 or -1"});
          return s;
        },
        build_pp_split);
    add("kruckovic1", ModelKind::metric, "k dx^2 + 2(2-c) e^{cx} dx dy + e^{2x} dz^2 (+ sum_{i>=4} du_i^2)", 3, 0, 3,
        fixed({{"k", 1, "any"}, {"c", 1, "c != 2"}}), build_kruckovic1);
    add("kruckovic2", ModelKind::metric, "k dx^2 + e^{2x} (2 dx dy - dz^2)", 3, 3, 3, fixed({{"k", 1, "any"}}),
        build_kruckovic2);
    add("kruckovic3", ModelKind::metric,
        "k dx^2 + e^{x sqrt(4-omega^2)} (2 dx dy - (4/omega^2) cos^2(omega x/2) dz^2)", 3, 3, 3,
        fixed({{"k", 1, "any"}, {"omega", Rational(6, 5), "0 < omega < 2, sqrt(4 - omega^2) rational"}}),
        build_kruckovic3);
    add("metric_2d", ModelKind::metric, "x dx^2 - 2 eps x dy^2", 2, 2, 2, fixed({{"eps", 1, "1 or -1"}}),
        build_metric_2d);
    add("metric_2d_alt", ModelKind::metric, "(dx/y^2 - x dy/y^3)^2 - eps dy^2/y^8", 2, 2, 2,
        fixed({{"eps", 1, "1 or -1"}}), build_metric_2d_alt);
    add("sphere_times_flat", ModelKind::metric, "S^2_c x R^{n-2}: 4(dx^2 + dy^2)/(1 + c(x^2 + y^2))^2 + sum du_i^2",
        3, 0, 4, fixed({{"c", 1, "c != 0"}}), build_sphere_times_flat);
    add("sphere_times_sphere", ModelKind::metric, "S^2_c x S^{n-2}_cbar, both factors stereographic", 4, 0, 4,
        fixed({{"c", 1, "c, cbar not both zero"}, {"cbar", 1, "c, cbar not both zero"}}), build_sphere_times_sphere);
    return e;
  }();
  return entries;
}

const Entry& find_entry(const std::string& name) {
  for (const auto& e : registry())
    if (e.info.name == name) return e;
  throw CatalogueError("unknown model '" + name + "'");
}

}  // namespace

const std::vector<ModelInfo>& list_models() {
  static const std::vector<ModelInfo> infos = [] {
    std::vector<ModelInfo> out;
    for (const auto& e : registry()) out.push_back(e.info);
    return out;
  }();
  return infos;
}

const ModelInfo& model_info(const std::string& name) { return find_entry(name).info; }

Model get_model(const std::string& name, const std::map<std::string, Rational>& params, int n) {
  const Entry& e = find_entry(name);
  if (n == 0) n = e.info.default_n;
  if (n < e.info.min_n || (e.info.max_n != 0 && n > e.info.max_n)) {
    std::ostringstream msg;
    msg << "model '" << name << "' needs n in [" << e.info.min_n << ", ";
    if (e.info.max_n) msg << e.info.max_n; else msg << "inf";
    msg << "], got " << n;
    throw CatalogueError(msg.str());
  }
  Params bound;
  for (const auto& spec : e.schema(n)) bound[spec.name] = spec.default_value;
  for (const auto& [k, v] : params) {
    if (!bound.count(k)) throw CatalogueError("model '" + name + "' has no parameter '" + k + "'");
    bound[k] = v;
  }
  Model m = e.build(n, bound);
  m.descriptor.info = e.info;
  m.descriptor.info.params = e.schema(n);
  m.descriptor.n = n;
  m.descriptor.params = bound;
  return m;
}

}  // namespace jetsym
