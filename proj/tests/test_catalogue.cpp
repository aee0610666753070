#include "jetsym/catalogue.hpp"

#include <doctest.h>

using namespace jetsym;

namespace {

struct Case {
  std::string name;
  std::map<std::string, Rational> params;
  int n;
};

const std::vector<Case>& cases() {
  static const std::vector<Case> c = {
      {"flat", {}, 2},
      {"flat", {}, 3},
      {"flat", {{"q", 1}}, 3},
      {"flat", {}, 4},
      {"constant_curvature", {}, 2},
      {"constant_curvature", {{"q", 1}}, 2},
      {"constant_curvature", {}, 3},
      {"constant_curvature", {{"c", -1}, {"q", 1}}, 3},
      {"pp_wave_lorentz", {}, 3},
      {"pp_wave_lorentz", {}, 4},
      {"pp_wave_lorentz", {}, 5},
      {"pp_wave_split", {}, 4},
      {"pp_wave_split", {{"eps5", 1}}, 5},
      {"pp_wave_split", {{"eps5", -1}}, 5},
      {"kruckovic1", {}, 3},
      {"kruckovic1", {{"c", 0}}, 3},
      {"kruckovic1", {{"k", 3}, {"c", -1}}, 3},
      {"kruckovic1", {}, 4},
      {"kruckovic1", {{"c", 0}}, 4},
      {"kruckovic2", {}, 3},
      {"kruckovic3", {}, 3},
      {"metric_2d", {}, 2},
      {"metric_2d", {{"eps", -1}}, 2},
      {"metric_2d_alt", {}, 2},
      {"metric_2d_alt", {{"eps", -1}}, 2},
      {"sphere_times_flat", {}, 3},
      {"sphere_times_flat", {}, 4},
      {"sphere_times_sphere", {}, 4},
  };
  return c;
}

std::string describe(const Case& c) { return c.name + " n=" + std::to_string(c.n); }

}  // namespace

TEST_CASE("registry lists every model with a formula") {
  const auto& models = list_models();
  for (const char* name : {"flat", "constant_curvature", "egorov_connection", "pp_wave_lorentz", "pp_wave_split",
                           "kruckovic1", "kruckovic2", "kruckovic3", "metric_2d", "metric_2d_alt",
                           "sphere_times_flat", "sphere_times_sphere"}) {
    CHECK(std::any_of(models.begin(), models.end(), [&](const ModelInfo& m) { return m.name == name; }));
  }
  for (const auto& m : models) CHECK_FALSE(m.formula.empty());
}

TEST_CASE("get_model rejects bad input") {
  CHECK_THROWS_AS(get_model("nope"), CatalogueError);
  CHECK_THROWS_AS(get_model("kruckovic1", {{"c", 2}}), CatalogueError);
  CHECK_THROWS_AS(get_model("kruckovic3", {{"omega", 1}}), CatalogueError);
  CHECK_THROWS_AS(get_model("pp_wave_split", {}, 3), CatalogueError);
  CHECK_THROWS_AS(get_model("metric_2d", {{"zeta", 1}}), CatalogueError);
  CHECK_THROWS_AS(get_model("sphere_times_sphere", {{"c", 0}, {"cbar", 0}}), CatalogueError);
  CHECK_THROWS_AS(get_model("constant_curvature", {{"c", 0}}), CatalogueError);
}

TEST_CASE("pp-wave metric entries and generator count") {
  const Model m = get_model("pp_wave_lorentz", {}, 4);
  const auto& g = m.metric->g;
  CHECK(equal(g[0][1], RatExpr(1)));
  CHECK(to_string(g[1][1], m.metric->chart.coords) == "z^2");
  CHECK(equal(g[2][2], RatExpr(1)));
  CHECK(equal(g[3][3], RatExpr(1)));
  CHECK(m.descriptor.generators.size() == 10);
}

TEST_CASE("kruckovic3 exponent is rational") {
  const Model m = get_model("kruckovic3");
  CHECK(to_string(m.metric->g[0][1], m.metric->chart.coords) == "exp(8/5*x)");
}

TEST_CASE("signatures match the descriptors") {
  for (const auto& c : cases()) {
    const Model m = get_model(c.name, c.params, c.n);
    INFO(describe(c));
    REQUIRE(m.descriptor.expected_signature.has_value());
    auto want = *m.descriptor.expected_signature;
    auto got = m.metric->signature;
    if (got != want) std::swap(got.first, got.second);
    CHECK(got == want);
  }
}

TEST_CASE("generators classify as listed") {
  for (const auto& c : cases()) {
    const Model m = get_model(c.name, c.params, c.n);
    for (const auto& gen : m.descriptor.generators) {
      INFO(describe(c) << ": " << gen.label);
      const Classification cl = classify_field(gen.field, *m.metric, *m.connection);
      CHECK(to_string(cl.kind) == to_string(gen.expected));
      if (gen.lambda) {
        REQUIRE(cl.lambda.has_value());
        CHECK(*cl.lambda == *gen.lambda);
      }
    }
  }
}

TEST_CASE("generator lists are independent and closed") {
  for (const auto& c : cases()) {
    const Model m = get_model(c.name, c.params, c.n);
    INFO(describe(c));
    std::vector<VectorFieldExpr> fields;
    for (const auto& gen : m.descriptor.generators) fields.push_back(gen.field);
    if (fields.empty()) continue;
    const auto t = algebra_check(fields, &*m.metric, AlgebraMode::projective);
    CHECK(t.independent_dim == fields.size());
    CHECK(t.closure_ok);
    CHECK(t.antisymmetric);
    CHECK(t.jacobi);
    // Where the projective dimension is known, the list realizes it.
    if (m.descriptor.expected.projective && m.descriptor.info.name != "sphere_times_sphere" &&
        m.descriptor.info.name != "constant_curvature")
      CHECK(static_cast<long>(fields.size()) == m.descriptor.expected.projective->value);
  }
}
