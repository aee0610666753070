#include "jetsym/app.hpp"
#include "jetsym/parser.hpp"

#include <doctest.h>

#include <fstream>

using namespace jetsym;

namespace {

const char* kPlane = R"({"coords": ["x", "y"], "metric": [["1", "0"], ["0", "1"]],
  "fields": [{"name": "rotation", "components": ["-y", "x"]}, {"name": "dilation", "components": ["x", "y"]}]})";

std::string temp_file(const std::string& name, const std::string& text) {
  const std::string path = "/tmp/jetsym_test_" + name + ".json";
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("input files") {
  const InputGeometry g = parse_input(kPlane);
  REQUIRE(g.metric.has_value());
  CHECK(g.fields.size() == 2);
  CHECK(g.fields[1].name == "dilation");

  const InputGeometry p = parse_input(R"({"coords": ["r", "t"], "params": {"c": "3/2"},
      "metric": [["1", "0"], ["0", "c*r^2"]]})");
  CHECK(to_string(p.metric->g[1][1], p.metric->chart.coords) == "3/2*r^2");

  const InputGeometry e = parse_input(R"({"coords": ["x1", "x2", "x3"],
      "connection": [{"upper": "x1", "lower": ["x2", "x3"], "value": "x2"}]})");
  REQUIRE(e.connection.has_value());
  CHECK(equal((*e.connection)(0, 2, 1), RatExpr::variable(1)));
  CHECK((*e.connection)(0, 1, 1).is_zero());
}

TEST_CASE("input errors name the offending entry") {
  auto message = [](const std::string& text) {
    try {
      parse_input(text);
    } catch (const InputError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("{\"coords\": [\"x\"") .find("line 1") != std::string::npos);
  const std::string bad = message(R"({"coords": ["x", "y"], "metric": [["1", "0"], ["0", "x +* 2"]]})");
  CHECK(bad.find("metric[1][1]") != std::string::npos);
  CHECK(bad.find("column") != std::string::npos);
  CHECK(message(R"({"coords": ["x", "y"], "metric": [["1", "1"], ["1", "1"]]})").find("degenerate") != std::string::npos);
  CHECK(message(R"({"coords": ["x", "y"], "metric": [["1", "0"], ["0", "z"]]})").find("metric[1][1]") != std::string::npos);
  CHECK(message(R"({"coords": ["x", "y"]})").find("exactly one") != std::string::npos);
  CHECK(message(R"({"coords": ["x", "x"], "metric": [["1", "0"], ["0", "1"]]})") != "no error");
  CHECK(message(R"({"coords": ["x", "y"], "params": {"c": "one"}, "metric": [["1", "0"], ["0", "1"]]})")
            .find("params.c") != std::string::npos);
}

TEST_CASE("metric files round-trip") {
  for (const auto& [name, n] : std::vector<std::pair<std::string, int>>{
           {"pp_wave_lorentz", 4}, {"kruckovic3", 3}, {"constant_curvature", 3}, {"metric_2d_alt", 2}}) {
    const Model m = get_model(name, {}, n);
    std::vector<NamedField> fields;
    for (const auto& g : m.descriptor.generators) fields.push_back({g.label, g.field});
    const InputGeometry back = parse_input(write_input(*m.metric, fields));
    REQUIRE(back.metric.has_value());
    for (std::size_t i = 0; i < m.metric->dim(); ++i)
      for (std::size_t j = 0; j < m.metric->dim(); ++j)
        CHECK_MESSAGE(back.metric->g[i][j].identical(m.metric->g[i][j]), name);
    REQUIRE(back.fields.size() == fields.size());
    for (std::size_t f = 0; f < fields.size(); ++f)
      for (std::size_t i = 0; i < m.metric->dim(); ++i) CHECK(back.fields[f].field.components[i].identical(fields[f].field.components[i]));
  }
}

TEST_CASE("analysis of a file") {
  AnalysisRequest req;
  req.file = temp_file("plane", kPlane);
  const auto rep = run_analysis(req);
  CHECK(rep["schema"] == 1);
  CHECK(rep["dim_projective"] == 8);
  CHECK(rep["dim_affine"] == 6);
  CHECK(rep["dim_isometry"] == 3);
  CHECK(rep["degree_of_mobility"] == 6);
  CHECK(rep["flags"]["flat"] == true);
  CHECK_FALSE(rep.contains("dim_conformal"));
  CHECK(rep["estimates"]["est1"] == true);
  CHECK(rep["generators"][0]["kind"] == "Killing");
  CHECK(rep["generators"][1]["kind"] == "Homothety");
  CHECK(rep["generators"][1]["lambda"] == "2");
  CHECK(rep["jets"]["projective"]["d_sequence"].size() >= 1);
}

TEST_CASE("analysis of catalogue models") {
  AnalysisRequest req;
  req.model = "egorov_connection";
  const auto eg = run_analysis(req);
  CHECK(eg["metric"] == false);
  CHECK(eg["dim_projective"] == 8);

  AnalysisRequest pp;
  pp.model = "pp_wave_lorentz";
  pp.n = 5;
  pp.kinds = {SystemKind::projective};
  const auto rep = run_analysis(pp);
  CHECK(rep["dim_projective"] == 16);
  CHECK_FALSE(rep.contains("dim_affine"));
  CHECK(rep["generators"].size() == 16);
}

TEST_CASE("analysis reports are deterministic") {
  AnalysisRequest req;
  req.model = "kruckovic2";
  req.seed = 5;
  CHECK(run_analysis(req).dump() == run_analysis(req).dump());
  AnalysisRequest other = req;
  other.seed = 6;
  CHECK(run_analysis(other)["jets"]["killing"]["points"] != run_analysis(req)["jets"]["killing"]["points"]);
}

TEST_CASE("analysis request errors") {
  AnalysisRequest none;
  CHECK_THROWS_AS(run_analysis(none), InputError);
  AnalysisRequest both;
  both.model = "flat";
  both.file = "x.json";
  CHECK_THROWS_AS(run_analysis(both), InputError);
  AnalysisRequest conf;
  conf.model = "metric_2d";
  conf.kinds = {SystemKind::conformal};
  CHECK_THROWS_AS(run_analysis(conf), InputError);
  AnalysisRequest conn;
  conn.model = "egorov_connection";
  conn.kinds = {SystemKind::killing};
  CHECK_THROWS_AS(run_analysis(conn), InputError);
  AnalysisRequest missing;
  missing.file = "/nonexistent/file.json";
  CHECK_THROWS_AS(run_analysis(missing), InputError);
  AnalysisRequest unknown;
  unknown.model = "no_such_model";
  CHECK_THROWS_AS(run_analysis(unknown), CatalogueError);
  AnalysisRequest short_run;
  short_run.model = "metric_2d";
  short_run.max_order = 1;
  CHECK_THROWS_AS(run_analysis(short_run), JetError);
}

TEST_CASE("gap table rows") {
  const auto p = gap_table(9, GapAlgebra::projective);
  REQUIRE(p.size() == 8);
  for (const auto& r : p) {
    CHECK(r.delta1 == r.max_dim - r.submax_general);
    CHECK(r.delta2 == r.submax_general - r.submax_metric);
    CHECK(r.submax_metric == r.n * r.n - 3 * r.n + r.sigma);
    CHECK(r.general.has_value() == (r.n >= 4));
  }
  CHECK(p[0].sigma == 5);
  CHECK(p[1].sigma == 6);
  CHECK(p[2].sigma == 8);
  const auto a = gap_table(9, GapAlgebra::affine);
  CHECK(a[1].riemannian == 6);  // S^3: (n+1 choose 2) exceeds n^2 - 3n + 5
  CHECK(a[2].riemannian == 10);
  CHECK_THROWS_AS(gap_table(1, GapAlgebra::affine), InputError);
}

TEST_CASE("gap table metric entries agree with the jet counter") {
  for (auto alg : {GapAlgebra::projective, GapAlgebra::affine})
    for (const auto& r : gap_table(5, alg, true)) {
      CHECK_MESSAGE(r.consistent, r.n);
      CHECK(r.checked.size() == (r.n >= 4 ? 3u : 2u));
    }
}

TEST_CASE("verification reports") {
  const VerificationReport r = verify_model("pp_wave_split", {{"eps5", 1}}, 5);
  CHECK(r.ok());
  CHECK(r.dims.at(SystemKind::projective).stabilized_dim == 18);
  CHECK(r.dims.at(SystemKind::affine).stabilized_dim == 18);
  const auto j = verification_json(r);
  CHECK(j["ok"] == true);
  CHECK(j["dims"]["dim_projective"] == 18);

  const VerificationReport s = verify_model("metric_2d");
  CHECK(s.ok());
  REQUIRE(s.algebra.has_value());
  CHECK(verification_json(s)["algebra"]["sl2"] == true);

  const VerificationReport t = verify_model("sphere_times_flat", {{"c", 1}}, 4);
  CHECK(t.ok());
  CHECK(t.dims.at(SystemKind::projective).stabilized_dim == 9);

  // the flat member of the g1 family cannot have the recorded dimensions
  const VerificationReport flat = verify_model("kruckovic1");
  CHECK_FALSE(flat.ok());
  REQUIRE(flat.first_failure() != nullptr);
  CHECK(flat.first_failure()->item == "dim_isometry");
}

TEST_CASE("models listing") {
  const auto j = models_json();
  CHECK(j["models"].size() == list_models().size());
  bool found = false;
  for (const auto& m : j["models"])
    if (m["name"] == "egorov_connection") found = m["kind"] == "connection";
  CHECK(found);
}
