#include "jetsym/verify.hpp"

namespace jetsym {

namespace {

std::string str(long v) { return std::to_string(v); }

void add(VerificationReport& r, std::string item, bool ok, std::string detail) {
  r.items.push_back({std::move(item), ok, std::move(detail)});
}

void check_dim(VerificationReport& r, const char* what, const std::optional<Expected>& want, long got) {
  if (!want || got < 0) return;
  add(r, what, want->value == got,
      "expected " + str(want->value) + " [" + std::string(to_string(want->provenance)) + "], jet counter " + str(got));
}

void check_generators(VerificationReport& r, const Model& m) {
  for (const auto& gen : r.descriptor.generators) {
    try {
      const Classification cl = m.metric ? classify_field(gen.field, *m.metric, m.conn())
                                         : classify_field(gen.field, *m.connection);
      bool ok = cl.kind == gen.expected;
      std::string detail = "expected " + std::string(to_string(gen.expected)) + ", got " + std::string(to_string(cl.kind));
      if (gen.lambda) {
        ok = ok && cl.lambda && *cl.lambda == *gen.lambda;
        detail += ", lambda " + (cl.lambda ? cl.lambda->get_str() : std::string("none")) + " (expected " +
                  gen.lambda->get_str() + ")";
      }
      add(r, "generator " + gen.label, ok, detail);
    } catch (const std::exception& e) {
      add(r, "generator " + gen.label, false, e.what());
    }
  }
  if (r.descriptor.generators.empty()) return;

  std::vector<VectorFieldExpr> fields;
  for (const auto& gen : r.descriptor.generators) fields.push_back(gen.field);
  try {
    const GeometrySource geom = m.metric ? GeometrySource(&*m.metric) : GeometrySource(&*m.connection);
    const StructureConstantsTable t = algebra_check(fields, geom, AlgebraMode::projective);
    add(r, "generators independent", t.independent_dim == fields.size(),
        str(static_cast<long>(t.independent_dim)) + " of " + str(static_cast<long>(fields.size())));
    add(r, "algebra closes", t.closure_ok && t.antisymmetric && t.jacobi,
        std::string("closure ") + (t.closure_ok ? "yes" : "no") + ", Jacobi " + (t.jacobi ? "yes" : "no"));
    r.algebra = t;
  } catch (const std::exception& e) {
    add(r, "algebra closes", false, e.what());
  }
}

// Listed generators of each class bound the counted dimensions from below.
void check_lower_bounds(VerificationReport& r) {
  long killing = 0, homothety = 0, affine = 0, all = 0;
  for (const auto& gen : r.descriptor.generators) {
    ++all;
    if (gen.expected == FieldKind::Killing) ++killing;
    if (gen.expected == FieldKind::Homothety) ++homothety;
    if (gen.expected == FieldKind::AffineOnly) ++affine;
  }
  if (all == 0) return;
  auto bound = [&](SystemKind k, long listed) {
    const auto it = r.dims.find(k);
    if (it == r.dims.end()) return;
    const long got = it->second.stabilized_dim;
    add(r, "listed " + std::string(to_string(k)) + " fields", listed <= got,
        str(listed) + " listed, dimension " + str(got));
  };
  bound(SystemKind::killing, killing);
  bound(SystemKind::homothety, killing + homothety);
  bound(SystemKind::affine, killing + homothety + affine);
  bound(SystemKind::projective, all);
}

void check_flags(VerificationReport& r, const Model& m) {
  const ExpectedFlags& e = r.descriptor.flags;
  const CurvatureFlags f = curvature_flags(*m.metric);
  auto flag = [&](const char* name, const std::optional<bool>& want, bool got) {
    if (want) add(r, std::string("flag ") + name, *want == got, std::string(got ? "true" : "false"));
  };
  flag("flat", e.flat, f.flat);
  flag("conformally_flat", e.conformally_flat, f.conformally_flat);
  flag("projectively_flat", e.projectively_flat, f.projectively_flat);
  if (e.ricci_flat) flag("ricci_flat", e.ricci_flat, ricci(riemann(m.conn())).is_zero());
  if (e.constant_curvature)
    add(r, "flag constant_curvature", f.constant_curvature == e.constant_curvature,
        f.constant_curvature ? f.constant_curvature->get_str() : std::string("not constant"));
  if (r.descriptor.expected_signature) {
    auto got = m.metric->signature;
    const auto want = *r.descriptor.expected_signature;
    if (got != want) std::swap(got.first, got.second);
    add(r, "signature", got == want,
        "(" + str(m.metric->signature.first) + "," + str(m.metric->signature.second) + ")");
  }
}

}  // namespace

bool VerificationReport::ok() const { return first_failure() == nullptr; }

const VerifyItem* VerificationReport::first_failure() const {
  for (const auto& i : items)
    if (!i.ok) return &i;
  return nullptr;
}

VerificationReport verify_model(const std::string& name, const std::map<std::string, Rational>& params, int n,
                                const JetOptions& opts) {
  const Model m = get_model(name, params, n);
  VerificationReport r;
  r.descriptor = m.descriptor;
  check_generators(r, m);

  const ExpectedDims& e = r.descriptor.expected;
  try {
    if (m.metric) {
      SymmetryReport p = symmetry_profile(*m.metric, opts);
      r.dims = p.details;
      check_dim(r, "dim_isometry", e.isometry, p.dim_isometry);
      check_dim(r, "dim_homothety", e.homothety, p.dim_homothety);
      check_dim(r, "dim_conformal", e.conformal, p.dim_conformal.value_or(-1));
      check_dim(r, "dim_affine", e.affine, p.dim_affine);
      check_dim(r, "dim_projective", e.projective, p.dim_projective);
      check_dim(r, "degree_of_mobility", e.mobility, p.degree_of_mobility);
      add(r, "estimates", p.est1 && p.est2, "P <= I + D and P <= H + D - 1");
      r.profile = std::move(p);
    } else {
      for (auto k : {SystemKind::affine, SystemKind::projective})
        r.dims.emplace(k, solution_dimension(build_system(k, *m.connection), opts));
      check_dim(r, "dim_affine", e.affine, r.dims.at(SystemKind::affine).stabilized_dim);
      check_dim(r, "dim_projective", e.projective, r.dims.at(SystemKind::projective).stabilized_dim);
    }
    for (const auto& [k, rep] : r.dims)
      add(r, "confident " + std::string(to_string(k)), rep.confident,
          std::to_string(rep.runs.size()) + " runs at " + std::to_string(rep.points.size()) + " points");
  } catch (const std::exception& ex) {
    add(r, "dimensions", false, ex.what());
  }
  check_lower_bounds(r);
  if (m.metric) check_flags(r, m);
  return r;
}

}  // namespace jetsym
