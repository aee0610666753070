// Acceptance suite: one PASS/FAIL line per criterion. Expected values are computed
// here from the closed formulas, not read back from the catalogue descriptors.
//
// usage: acceptance <path to the jetsym CLI> <path to paper.md>

#include "jetsym/app.hpp"
#include "jetsym/parser.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace jetsym;

namespace {

std::string g_cli, g_paper;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("FAILED " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

long dim(SystemKind k, const MetricField& g) { return solution_dimension(build_system(k, g)).stabilized_dim; }
long dim(SystemKind k, const ConnectionField& c) { return solution_dimension(build_system(k, c)).stabilized_dim; }
std::string str(long v) { return std::to_string(v); }
std::string expect(const char* what, long got, long want) {
  return std::string(what) + " = " + str(got) + " (want " + str(want) + ")";
}

long binom(long n, long k) {
  long r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Every listed generator has its stated class, and the list is independent and closed.
void check_generators(Outcome& o, const Model& m, const std::string& tag) {
  std::vector<VectorFieldExpr> fields;
  for (const auto& gen : m.descriptor.generators) {
    const Classification c = classify_field(gen.field, *m.metric, m.conn());
    o.require(c.kind == gen.expected, tag + " generator " + gen.label + " is " + std::string(to_string(c.kind)));
    fields.push_back(gen.field);
  }
  const auto t = algebra_check(fields, &*m.metric);
  o.require(t.independent_dim == fields.size(), tag + " generators independent");
  o.require(t.closure_ok, tag + " generators close");
}

Outcome flat_baselines() {
  Outcome o;
  for (long n : {2, 3, 4}) {
    const Model m = get_model("flat", {}, static_cast<int>(n));
    const long p = dim(SystemKind::projective, *m.metric), a = dim(SystemKind::affine, *m.metric),
               d = dim(SystemKind::mobility, *m.metric);
    o.require(p == n * n + 2 * n, expect("P", p, n * n + 2 * n));
    o.require(a == n * n + n, expect("A", a, n * n + n));
    o.require(d == binom(n + 2, 2), expect("D", d, binom(n + 2, 2)));
    o.note("n=" + str(n) + ": P=" + str(p) + " A=" + str(a) + " D=" + str(d));
  }
  return o;
}

Outcome egorov() {
  Outcome o;
  const Model m = get_model("egorov_connection", {}, 3);
  const ProjectiveWeyl w = projective_weyl(*m.connection);
  std::size_t nonzero = 0;
  for (const auto& c : w.w.components) nonzero += !c.is_zero();
  o.require(equal(w.w.at({0, 1, 2, 1}), RatExpr(1)), "W^1_232 = 1");
  o.require(equal(w.w.at({0, 2, 1, 1}), RatExpr(-1)), "W^1_322 = -1");
  o.require(nonzero == 2, "exactly two nonzero components");
  const long p = dim(SystemKind::projective, *m.connection);
  o.require(p == 9 - 6 + 5, expect("P", p, 8));
  o.note("W^1_232 = 1, W^1_322 = -1, " + str(static_cast<long>(nonzero)) + " nonzero; P=" + str(p));
  return o;
}

Outcome pp_wave_lorentz() {
  Outcome o;
  for (long n : {4, 5}) {
    const Model m = get_model("pp_wave_lorentz", {}, static_cast<int>(n));
    const SymmetryReport r = symmetry_profile(*m.metric, {}, {SystemKind::killing, SystemKind::homothety,
                                                              SystemKind::affine, SystemKind::projective});
    const long I = (n * n - 3 * n + 8) / 2, P = n * n - 3 * n + 6;
    o.require(r.dim_isometry == I, expect("I", r.dim_isometry, I));
    o.require(r.dim_homothety == I + 1, expect("H", r.dim_homothety, I + 1));
    o.require(r.dim_affine == P, expect("A", r.dim_affine, P));
    o.require(r.dim_projective == P, expect("P", r.dim_projective, P));
    check_generators(o, m, "n=" + str(n));
    long killing = 0, homothety = 0, affine = 0;
    for (const auto& g : m.descriptor.generators) {
      killing += g.expected == FieldKind::Killing;
      homothety += g.expected == FieldKind::Homothety;
      affine += g.expected == FieldKind::AffineOnly;
    }
    o.require(killing == I && homothety == 1 && affine == (n * n - 3 * n + 2) / 2, "listed class counts");
    o.note("n=" + str(n) + ": I=" + str(r.dim_isometry) + " H=" + str(r.dim_homothety) + " A=" + str(r.dim_affine) +
           " P=" + str(r.dim_projective) + ", " + str(static_cast<long>(m.descriptor.generators.size())) + " generators");
  }
  return o;
}

Outcome pp_wave_split() {
  Outcome o;
  for (long n : {4, 5}) {
    const Model m = get_model("pp_wave_split", {}, static_cast<int>(n));
    const long want = n * n - 3 * n + 8;
    const long p = dim(SystemKind::projective, *m.metric), a = dim(SystemKind::affine, *m.metric);
    o.require(p == want, expect("P", p, want));
    o.require(a == want, expect("A", a, want));
    o.require(ricci(riemann(m.conn())).is_zero(), "Ricci = 0");
    const TensorField cw = conformal_weyl(*m.metric);
    const std::size_t y = 1, w = 3;
    bool pattern = true;
    for (std::size_t f = 0; f < cw.components.size(); ++f) {
      const auto idx = cw.indices(f);
      const bool first = (idx[0] == y && idx[1] == w) || (idx[0] == w && idx[1] == y);
      const bool second = (idx[2] == y && idx[3] == w) || (idx[2] == w && idx[3] == y);
      pattern = pattern && cw.components[f].is_zero() == !(first && second);
    }
    o.require(pattern && !cw.is_zero(), "conformal Weyl supported on (dy^dw)(x)(dy^dw)");
    check_generators(o, m, "n=" + str(n));
    o.require(static_cast<long>(m.descriptor.generators.size()) == want, "generator count");
    o.note("n=" + str(n) + ": P=" + str(p) + " A=" + str(a) + ", " +
           str(static_cast<long>(m.descriptor.generators.size())) + " generators");
  }
  return o;
}

Outcome kruckovic1() {
  Outcome o;
  for (long c : {1, 0}) {
    const Model m = get_model("kruckovic1", {{"k", 1}, {"c", c}}, 3);
    const SymmetryReport r = symmetry_profile(*m.metric, {}, {SystemKind::killing, SystemKind::homothety,
                                                              SystemKind::projective, SystemKind::mobility});
    const std::string tag = "c=" + str(c) + " ";
    o.require(r.dim_isometry == 4, tag + expect("I", r.dim_isometry, 4));
    o.require(r.dim_homothety == 5, tag + expect("H", r.dim_homothety, 5));
    o.require(r.degree_of_mobility == 2, tag + expect("D", r.degree_of_mobility, 2));
    o.require(r.dim_projective == 6, tag + expect("P", r.dim_projective, 6));
    long k = 0, h = 0, a = 0;
    for (const auto& g : m.descriptor.generators) {
      const FieldKind kind = classify_field(g.field, *m.metric).kind;
      k += kind == FieldKind::Killing;
      h += kind == FieldKind::Homothety;
      a += kind == FieldKind::AffineOnly;
    }
    o.require(k == 4 && h == 1 && a == 1, tag + "fields classify as 4 + 1 + 1");
    o.note(tag + "I=" + str(r.dim_isometry) + " H=" + str(r.dim_homothety) + " D=" + str(r.degree_of_mobility) +
           " P=" + str(r.dim_projective) + " fields " + str(k) + "K+" + str(h) + "H+" + str(a) + "A" +
           (r.flags.flat ? " (metric is flat)" : ""));
  }
  return o;
}

Outcome two_dimensional() {
  Outcome o;
  for (int eps : {1, -1}) {
    const std::string tag = "eps=" + str(eps) + " ";
    const Model m = get_model("metric_2d", {{"eps", eps}});
    const Chart& c = m.metric->chart;
    const auto a = geodesic_ode_2d(*m.metric);
    // x y'' = eps y'^3 - y'/2
    const bool llt = a[0].is_zero() && a[2].is_zero() && equal(a[1], parse_expr("-1/(2*x)", c)) &&
                     equal(a[3], RatExpr(eps) / parse_expr("x", c));
    o.require(llt, tag + "metric_2d geodesics give x y'' = eps y'^3 - y'/2");

    const Model alt = get_model("metric_2d_alt", {{"eps", eps}});
    const Chart& ca = alt.metric->chart;
    const auto b = geodesic_ode_2d(*alt.metric);
    auto matches = [&](int s) {
      const RatExpr e(s);
      return equal(b[0], e * parse_expr("-y^3", ca)) && equal(b[1], e * parse_expr("3*x*y^2", ca)) &&
             equal(b[2], e * parse_expr("-3*x^2*y", ca)) && equal(b[3], e * parse_expr("x^3", ca));
    };
    o.require(matches(eps), tag + "metric_2d_alt geodesics give y'' = eps (x y' - y)^3");
    if (!matches(eps) && matches(-eps)) o.note(tag + "metric_2d_alt gives y'' = " + str(-eps) + " (x y' - y)^3");

    for (const Model* mm : {&m, &alt}) {
      std::vector<VectorFieldExpr> fields;
      for (const auto& g : mm->descriptor.generators) fields.push_back(g.field);
      const auto t = algebra_check(fields, &*mm->metric);
      const std::string name = mm->descriptor.info.name;
      o.require(t.independent_dim == 3 && t.closure_ok && is_sl2(t), tag + name + " generators span sl(2)");
      const long h = dim(SystemKind::homothety, *mm->metric);
      o.require(h == 2, tag + name + " " + expect("H", h, 2));
    }
  }
  return o;
}

Outcome riemannian_submax() {
  Outcome o;
  const Model m = get_model("sphere_times_flat", {{"c", 1}}, 4);
  const long p = dim(SystemKind::projective, *m.metric);
  o.require(p == 16 - 12 + 5, expect("P", p, 9));
  o.require(m.metric->signature.second == 0 || m.metric->signature.first == 0, "Riemannian signature");
  o.note("S^2_1 x R^2: P=" + str(p));
  return o;
}

Outcome affine_exceptions() {
  Outcome o;
  for (long n : {3, 4}) {
    const Model m = get_model("constant_curvature", {{"c", 1}}, static_cast<int>(n));
    const long a = dim(SystemKind::affine, *m.metric);
    const long want = n == 3 ? binom(n + 1, 2) : n * n - 3 * n + 6;
    o.require(a == want, "n=" + str(n) + " " + expect("A", a, want));
    o.require(a > n * n - 3 * n + 5, "n=" + str(n) + " exceeds n^2 - 3n + 5");
    o.note("S^" + str(n) + ": A=" + str(a));
  }
  return o;
}

struct ModelCase {
  std::string name;
  std::map<std::string, Rational> params;
  int n;
};

std::vector<ModelCase> all_metric_models() {
  std::vector<ModelCase> out;
  for (const auto& info : list_models())
    if (info.kind == ModelKind::metric) out.push_back({info.name, {}, info.default_n});
  const std::vector<ModelCase> extra = {
      {"pp_wave_lorentz", {}, 5},       {"pp_wave_split", {}, 5},        {"kruckovic1", {{"c", 0}}, 3},
      {"kruckovic1", {{"c", 3}}, 4},    {"metric_2d", {{"eps", -1}}, 2}, {"metric_2d_alt", {{"eps", -1}}, 2},
      {"sphere_times_flat", {}, 3},     {"sphere_times_sphere", {}, 5},  {"constant_curvature", {{"c", -1}, {"q", 1}}, 3},
  };
  out.insert(out.end(), extra.begin(), extra.end());
  return out;
}

Outcome estimates() {
  Outcome o;
  std::size_t checked = 0;
  for (const auto& c : all_metric_models()) {
    const Model m = get_model(c.name, c.params, c.n);
    const std::string tag = c.name + " n=" + str(c.n);
    try {
      const SymmetryReport r = symmetry_profile(*m.metric);
      o.require(r.est1, tag + " est1");
      o.require(r.est2, tag + " est2");
      if (c.name == "metric_2d" || c.name == "metric_2d_alt")
        o.require(r.dim_projective <= r.dim_isometry + r.degree_of_mobility - 1, tag + " P <= I + D - 1");
      ++checked;
    } catch (const InvariantViolation& e) {
      o.require(false, tag + ": " + e.what());
    }
  }
  o.note(str(static_cast<long>(checked)) + " models");
  return o;
}

bool is_constant_identity_multiple(const TensorField& a) {
  const std::size_t n = a.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && !a.at({i, j}).is_zero()) return false;
      if (i == j && !equal(a.at({i, i}), a.at({0, 0}))) return false;
    }
  return a.at({0, 0}).as_constant().has_value();
}

Outcome phi_map_suite() {
  Outcome o;
  std::size_t count = 0;
  for (const auto& c : all_metric_models()) {
    const Model m = get_model(c.name, c.params, c.n);
    for (const auto& gen : m.descriptor.generators) {
      const std::string tag = c.name + " n=" + str(c.n) + " " + gen.label;
      const MobilityTensor a = phi_map(gen.field, *m.metric);
      o.require(mobility_residual(a, *m.metric, m.conn()).is_zero(), tag + " residual");
      const FieldKind kind = classify_field(gen.field, *m.metric, m.conn()).kind;
      o.require(a.a.is_zero() == (kind == FieldKind::Killing), tag + " kernel");
      if (kind == FieldKind::Homothety) o.require(is_constant_identity_multiple(a.a), tag + " multiple of Id");
      ++count;
    }
  }
  o.note(str(static_cast<long>(count)) + " generators");
  return o;
}

std::string run_command(const std::string& cmd) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return out;
  char buf[4096];
  std::size_t k;
  while ((k = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, k);
  pclose(p);
  return out;
}

// The tabular block following the given marker line in the paper, without CRs.
std::string paper_table(const std::string& text, const std::string& row_marker) {
  const std::size_t row = text.find(row_marker);
  if (row == std::string::npos) return {};
  const std::size_t begin = text.rfind("\\begin{tabular}", row);
  const std::size_t end = text.find("\\end{tabular}", row);
  if (begin == std::string::npos || end == std::string::npos) return {};
  std::string block = text.substr(begin, end + std::string("\\end{tabular}").size() - begin);
  std::erase(block, '\r');
  return block + "\n";
}

Outcome gap_tables() {
  Outcome o;
  std::ifstream in(g_paper);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string paper = ss.str();
  for (const auto& [alg, marker] : {std::pair{"projective", "$\\Delta^\\mathfrak{p}_1$ &"},
                                    std::pair{"affine", "$\\Delta^\\mathfrak{a}_1$ &"}}) {
    const std::string want = paper_table(paper, marker);
    o.require(!want.empty(), std::string(alg) + " table found in the paper");
    const std::string got = run_command(g_cli + " gap-table --algebra " + alg + " --n-max 9 --table");
    o.require(got == want, std::string(alg) + " table byte-identical");
  }
  return o;
}

struct Criterion {
  int id;
  const char* title;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <jetsym CLI> <paper.md>\n";
    return 1;
  }
  g_cli = argv[1];
  g_paper = argv[2];

  const std::vector<Criterion> criteria = {
      {1, "flat baselines n=2,3,4", 180, flat_baselines},
      {2, "Egorov connection Weyl components and P=8", 60, egorov},
      {3, "Lorentzian pp-wave n=4,5", 300, pp_wave_lorentz},
      {4, "split pp-wave n=4,5", 300, pp_wave_split},
      {5, "Kruckovic g1 at c=1 and c=0", 120, kruckovic1},
      {6, "2D submaximal metrics", 60, two_dimensional},
      {7, "Riemannian submaximal S^2 x R^2", 300, riemannian_submax},
      {8, "affine submaximal exceptions S^3, S^4", 300, affine_exceptions},
      {9, "estimates on every catalogue model", 600, estimates},
      {10, "phi-map suite", 120, phi_map_suite},
      {11, "gap tables n=2..9", 1, gap_tables},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.limit_seconds) o.require(false, "time limit " + std::to_string(c.limit_seconds) + " s");
    failures += !o.pass;
    std::ostringstream line;
    line << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " [";
    line.precision(2);
    line << std::fixed << secs << " s]";
    for (std::size_t i = 0; i < o.notes.size(); ++i) line << (i ? "; " : " ") << o.notes[i];
    std::cout << line.str() << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
