#include "jetsym/app.hpp"

#include "jetsym/parser.hpp"

#include <fstream>
#include <sstream>

namespace jetsym {

using nlohmann::json;

namespace {

std::string expr_text(const json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw InputError(where + ": expected an expression string");
}

RatExpr parse_at(const json& v, const Chart& chart, const std::string& where) {
  const std::string text = expr_text(v, where);
  try {
    return parse_expr(text, chart);
  } catch (const ParseError& e) {
    throw InputError(where + ": " + e.what() + " (line 1, column " + std::to_string(e.position() + 1) + ")");
  } catch (const std::exception& e) {
    throw InputError(where + ": " + e.what());
  }
}

Rational parse_rational(const json& v, const std::string& where) {
  try {
    if (v.is_number_integer()) return Rational(static_cast<long>(v.get<long long>()));
    if (v.is_string()) {
      Rational q(v.get<std::string>());
      q.canonicalize();
      return q;
    }
  } catch (const std::invalid_argument&) {
  }
  throw InputError(where + ": expected a rational number such as \"3/4\"");
}

const json& require(const json& obj, const char* key) {
  if (!obj.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  return obj.at(key);
}

std::size_t coord_index(const Chart& c, const json& v, const std::string& where) {
  if (!v.is_string()) throw InputError(where + ": expected a coordinate name");
  const auto i = c.index_of(v.get<std::string>());
  if (!i) throw InputError(where + ": unknown coordinate '" + v.get<std::string>() + "'");
  return *i;
}

}  // namespace

InputGeometry parse_input(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("input must be a JSON object");
  if (doc.contains("schema") && doc.at("schema") != kSchemaVersion)
    throw InputError("unsupported schema version " + doc.at("schema").dump());

  Chart chart;
  const json& coords = require(doc, "coords");
  if (!coords.is_array()) throw InputError("coords: expected an array of names");
  for (const auto& c : coords) {
    if (!c.is_string()) throw InputError("coords: expected an array of names");
    chart.coords.push_back(c.get<std::string>());
  }
  if (doc.contains("params")) {
    if (!doc.at("params").is_object()) throw InputError("params: expected an object");
    for (const auto& [k, v] : doc.at("params").items()) chart.params[k] = parse_rational(v, "params." + k);
  }
  try {
    chart.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("coords: ") + e.what());
  }
  const std::size_t n = chart.dim();

  InputGeometry out;
  const bool has_metric = doc.contains("metric"), has_conn = doc.contains("connection");
  if (has_metric == has_conn) throw InputError("exactly one of 'metric' and 'connection' is required");
  try {
    if (has_metric) {
      const json& m = doc.at("metric");
      if (!m.is_array() || m.size() != n) throw InputError("metric: expected " + std::to_string(n) + " rows");
      Matrix g(n);
      for (std::size_t i = 0; i < n; ++i) {
        if (!m[i].is_array() || m[i].size() != n)
          throw InputError("metric[" + std::to_string(i) + "]: expected " + std::to_string(n) + " entries");
        for (std::size_t j = 0; j < n; ++j)
          g[i].push_back(parse_at(m[i][j], chart, "metric[" + std::to_string(i) + "][" + std::to_string(j) + "]"));
      }
      out.metric = make_metric(chart, std::move(g));
      chart = out.metric->chart;
    } else {
      const json& entries = doc.at("connection");
      if (!entries.is_array()) throw InputError("connection: expected an array of components");
      std::vector<RatExpr> gamma(n * n * n, RatExpr(0));
      std::vector<bool> seen(gamma.size(), false);
      for (std::size_t e = 0; e < entries.size(); ++e) {
        const std::string where = "connection[" + std::to_string(e) + "]";
        const json& c = entries[e];
        if (!c.is_object()) throw InputError(where + ": expected an object");
        const std::size_t i = coord_index(chart, require(c, "upper"), where + ".upper");
        const json& lower = require(c, "lower");
        if (!lower.is_array() || lower.size() != 2) throw InputError(where + ".lower: expected two coordinates");
        const std::size_t j = coord_index(chart, lower[0], where + ".lower"), k = coord_index(chart, lower[1], where + ".lower");
        const RatExpr v = parse_at(require(c, "value"), chart, where + ".value");
        for (auto idx : {(i * n + j) * n + k, (i * n + k) * n + j}) {
          if (seen[idx] && !equal(gamma[idx], v)) throw InputError(where + ": conflicting component");
          gamma[idx] = v;
          seen[idx] = true;
        }
      }
      for (const auto& v : gamma)
        if (!v.has_trivial_den()) chart.excluded_locus.push_back(RatExpr(v.den_expanded()));
      out.connection = make_connection(chart, std::move(gamma));
    }
  } catch (const GeometryError& e) {
    throw InputError(e.what());
  }

  if (doc.contains("fields")) {
    const json& fs = doc.at("fields");
    if (!fs.is_array()) throw InputError("fields: expected an array");
    for (std::size_t f = 0; f < fs.size(); ++f) {
      const std::string where = "fields[" + std::to_string(f) + "]";
      const json& comps = require(fs[f], "components");
      if (!comps.is_array() || comps.size() != n) throw InputError(where + ": expected " + std::to_string(n) + " components");
      std::vector<RatExpr> v;
      for (std::size_t i = 0; i < n; ++i) v.push_back(parse_at(comps[i], chart, where + ".components[" + std::to_string(i) + "]"));
      std::string name = fs[f].contains("name") ? fs[f].at("name").get<std::string>() : "field " + std::to_string(f);
      out.fields.push_back({std::move(name), make_field(chart, std::move(v))});
    }
  }
  return out;
}

InputGeometry read_input_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_input(ss.str());
}

std::string write_input(const MetricField& g, const std::vector<NamedField>& fields) {
  const auto& names = g.chart.coords;
  json doc;
  doc["schema"] = kSchemaVersion;
  doc["coords"] = names;
  json metric = json::array();
  for (const auto& row : g.g) {
    json r = json::array();
    for (const auto& e : row) r.push_back(to_string(e, names));
    metric.push_back(r);
  }
  doc["metric"] = metric;
  if (!fields.empty()) {
    json fs = json::array();
    for (const auto& f : fields) {
      json comps = json::array();
      for (const auto& c : f.field.components) comps.push_back(to_string(c, names));
      fs.push_back({{"name", f.name}, {"components", comps}});
    }
    doc["fields"] = fs;
  }
  return doc.dump(2);
}

namespace {

json rational_list(const std::vector<Rational>& v) {
  json a = json::array();
  for (const auto& q : v) a.push_back(q.get_str());
  return a;
}

json params_json(const std::map<std::string, Rational>& p) {
  json o = json::object();
  for (const auto& [k, v] : p) o[k] = v.get_str();
  return o;
}

json flags_json(const CurvatureFlags& f) {
  json o{{"flat", f.flat}, {"conformally_flat", f.conformally_flat}, {"projectively_flat", f.projectively_flat}};
  o["constant_curvature"] = f.constant_curvature ? json(f.constant_curvature->get_str()) : json(nullptr);
  return o;
}

json classification_json(const std::string& name, const Classification& c, const std::vector<std::string>& coords) {
  json o{{"name", name}, {"kind", std::string(to_string(c.kind))}};
  if (c.lambda) o["lambda"] = c.lambda->get_str();
  if (c.sigma) o["sigma"] = to_string(*c.sigma, coords);
  if (c.psi) {
    json p = json::array();
    for (const auto& e : *c.psi) p.push_back(to_string(e, coords));
    o["psi"] = p;
  }
  return o;
}

const char* dim_key(SystemKind k) {
  switch (k) {
    case SystemKind::killing: return "dim_isometry";
    case SystemKind::homothety: return "dim_homothety";
    case SystemKind::conformal: return "dim_conformal";
    case SystemKind::affine: return "dim_affine";
    case SystemKind::projective: return "dim_projective";
    case SystemKind::mobility: return "degree_of_mobility";
  }
  return "";
}

}  // namespace

JetOptions AnalysisRequest::jet_options() const {
  JetOptions o;
  o.max_order = max_order;
  o.precision_bits = precision_bits;
  o.seed = seed;
  o.fixed_points = points;
  return o;
}

json jet_report_json(const JetRankReport& r) {
  json runs = json::array();
  for (const auto& run : r.runs)
    runs.push_back({{"point", rational_list(run.point)},
                    {"modulus", run.modulus},
                    {"dimension", run.dimension},
                    {"closure_level", run.closure_level}});
  json pts = json::array();
  for (const auto& p : r.points) pts.push_back(rational_list(p));
  return {{"d_sequence", r.d_sequence}, {"stabilized_dim", r.stabilized_dim}, {"orders_used", r.orders_used},
          {"points", pts},          {"precision_bits", r.precision_bits},   {"confident", r.confident},
          {"exact", r.exact},       {"runs", runs}};
}

json run_analysis(const AnalysisRequest& req) {
  if (req.file.has_value() == req.model.has_value()) throw InputError("give exactly one source: a file or a model");
  const JetOptions opts = req.jet_options();

  InputGeometry geo;
  json out;
  out["schema"] = kSchemaVersion;
  std::vector<FieldKind> expected;
  if (req.model) {
    Model m = get_model(*req.model, req.params, req.n);
    out["source"] = "catalogue:" + *req.model;
    out["params"] = params_json(m.descriptor.params);
    geo.metric = m.metric;
    geo.connection = m.metric ? std::nullopt : m.connection;
    for (const auto& gen : m.descriptor.generators) {
      geo.fields.push_back({gen.label, gen.field});
      expected.push_back(gen.expected);
    }
  } else {
    geo = read_input_file(*req.file);
    out["source"] = *req.file;
    if (!req.params.empty()) throw InputError("--param applies to catalogue models only");
  }
  const Chart& chart = geo.metric ? geo.metric->chart : geo.connection->chart;
  const std::size_t n = chart.dim();
  out["n"] = n;
  out["coords"] = chart.coords;
  out["metric"] = geo.metric.has_value();
  for (const auto& p : req.points)
    if (p.size() != n) throw InputError("--point needs " + std::to_string(n) + " coordinates");

  std::vector<SystemKind> kinds = req.kinds;
  if (geo.metric) {
    for (auto k : kinds)
      if (k == SystemKind::conformal && n == 2) throw InputError("the conformal algebra is infinite-dimensional for n = 2");
    const SymmetryReport rep = symmetry_profile(*geo.metric, opts, kinds);
    out["signature"] = {geo.metric->signature.first, geo.metric->signature.second};
    out["flags"] = flags_json(rep.flags);
    json jets = json::object();
    for (const auto& [k, r] : rep.details) {
      out[dim_key(k)] = r.stabilized_dim;
      jets[std::string(to_string(k))] = jet_report_json(r);
    }
    out["jets"] = jets;
    if (rep.dim_projective >= 0 && rep.degree_of_mobility >= 0) {
      json est = json::object();
      if (rep.dim_isometry >= 0) est["est1"] = rep.est1;
      if (rep.dim_homothety >= 0) est["est2"] = rep.est2;
      out["estimates"] = est;
    }
    out["confident"] = rep.confident;
  } else {
    if (kinds.empty()) kinds = {SystemKind::affine, SystemKind::projective};
    json jets = json::object();
    bool confident = true;
    for (auto k : kinds) {
      if (k != SystemKind::affine && k != SystemKind::projective)
        throw InputError("a connection supports only the affine and projective kinds");
      const JetRankReport r = solution_dimension(build_system(k, *geo.connection), opts);
      out[dim_key(k)] = r.stabilized_dim;
      jets[std::string(to_string(k))] = jet_report_json(r);
      confident = confident && r.confident;
    }
    if (out.contains("dim_affine") && out.contains("dim_projective") &&
        out["dim_affine"].get<long>() > out["dim_projective"].get<long>())
      throw InvariantViolation("affine dimension exceeds the projective one");
    out["jets"] = jets;
    out["confident"] = confident;
  }

  if (!geo.fields.empty()) {
    json gens = json::array();
    for (std::size_t i = 0; i < geo.fields.size(); ++i) {
      const auto& f = geo.fields[i];
      const Classification c = geo.metric ? classify_field(f.field, *geo.metric) : classify_field(f.field, *geo.connection);
      json o = classification_json(f.name, c, chart.coords);
      if (i < expected.size()) o["expected"] = std::string(to_string(expected[i]));
      gens.push_back(o);
    }
    out["generators"] = gens;
  }
  out["options"] = {{"max_order", req.max_order}, {"precision_bits", req.precision_bits}, {"seed", req.seed}};
  return out;
}

json models_json() {
  json a = json::array();
  for (const auto& m : list_models()) {
    json ps = json::array();
    for (const auto& p : m.params)
      ps.push_back({{"name", p.name}, {"default", p.default_value.get_str()}, {"constraint", p.constraint}});
    a.push_back({{"name", m.name},
                 {"kind", m.kind == ModelKind::metric ? "metric" : "connection"},
                 {"formula", m.formula},
                 {"min_n", m.min_n},
                 {"max_n", m.max_n == 0 ? json(nullptr) : json(m.max_n)},
                 {"default_n", m.default_n},
                 {"params", ps}});
  }
  return {{"schema", kSchemaVersion}, {"models", a}};
}

json verification_json(const VerificationReport& r) {
  json items = json::array();
  for (const auto& i : r.items) items.push_back({{"item", i.item}, {"ok", i.ok}, {"detail", i.detail}});
  json dims = json::object();
  for (const auto& [k, rep] : r.dims) dims[dim_key(k)] = rep.stabilized_dim;
  json out{{"schema", kSchemaVersion},
           {"model", r.descriptor.info.name},
           {"n", r.descriptor.n},
           {"params", params_json(r.descriptor.params)},
           {"ok", r.ok()},
           {"items", items},
           {"dims", dims}};
  if (r.algebra) {
    out["algebra"] = {{"independent_dim", r.algebra->independent_dim},
                      {"closure", r.algebra->closure_ok},
                      {"jacobi", r.algebra->jacobi},
                      {"sl2", r.algebra->independent_dim == 3 && is_sl2(*r.algebra)}};
  }
  return out;
}

namespace {

struct Realization {
  const char* signature;
  std::string model;
  std::map<std::string, Rational> params;
};

// Catalogue models attaining the metric submaximal dimensions for small n.
std::vector<Realization> realizations(int n, GapAlgebra algebra) {
  std::vector<Realization> out;
  if (algebra == GapAlgebra::projective) {
    if (n == 2) {
      out.push_back({"riemannian", "metric_2d", {{"eps", -1}}});
      out.push_back({"lorentzian", "metric_2d", {{"eps", 1}}});
    } else {
      out.push_back({"riemannian", "sphere_times_flat", {}});
      out.push_back({"lorentzian", "pp_wave_lorentz", {}});
    }
  } else {
    out.push_back({"riemannian", n <= 4 ? "constant_curvature" : "sphere_times_flat", {}});
    if (n == 2)
      out.push_back({"lorentzian", "constant_curvature", {{"q", 1}}});
    else
      out.push_back({"lorentzian", "pp_wave_lorentz", {}});
  }
  if (n >= 4) out.push_back({"general", "pp_wave_split", {}});
  return out;
}

const char* signature_class(std::pair<int, int> s) {
  const int m = std::min(s.first, s.second);
  return m == 0 ? "riemannian" : m == 1 ? "lorentzian" : "general";
}

}  // namespace

std::vector<GapRow> gap_table(int n_max, GapAlgebra algebra, bool cross_check, const JetOptions& opts) {
  if (n_max < 2) throw InputError("n_max must be at least 2");
  std::vector<GapRow> rows;
  for (int n = 2; n <= n_max; ++n) {
    GapRow r;
    r.n = n;
    const long nn = static_cast<long>(n) * n, base = nn - 3L * n;
    const long d2 = n == 2, d3 = n == 3, d4 = n == 4;
    if (algebra == GapAlgebra::projective) {
      r.max_dim = nn + 2L * n;
      r.submax_general = n == 2 ? 3 : nn - 2L * n + 5;
      r.riemannian = base + 5;
    } else {
      r.max_dim = nn + n;
      r.submax_general = nn;
      r.riemannian = base + 5 + d3 + d4;
    }
    r.lorentzian = base + 6 - d2;
    if (n >= 4) r.general = base + 8;
    r.submax_metric = std::max({*r.riemannian, *r.lorentzian, r.general.value_or(0)});
    r.sigma = r.submax_metric - base;
    r.delta1 = r.max_dim - r.submax_general;
    r.delta2 = r.submax_general - r.submax_metric;

    if (cross_check && n <= 5) {
      const SystemKind kind = algebra == GapAlgebra::projective ? SystemKind::projective : SystemKind::affine;
      for (const auto& re : realizations(n, algebra)) {
        const Model m = get_model(re.model, re.params, n);
        const long got = solution_dimension(build_system(kind, *m.metric), opts).stabilized_dim;
        const std::string key = std::string(re.signature) + ":" + re.model;
        r.checked[key] = got;
        const long want = std::string(re.signature) == "riemannian"   ? *r.riemannian
                          : std::string(re.signature) == "lorentzian" ? *r.lorentzian
                                                                      : *r.general;
        const bool sig_ok = std::string(signature_class(m.metric->signature)) == re.signature;
        const bool flat = curvature_flags(*m.metric).flat;
        if (got != want || !sig_ok || flat) r.consistent = false;
      }
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string format_gap_table(const std::vector<GapRow>& rows, GapAlgebra algebra) {
  const std::string sym = algebra == GapAlgebra::projective ? "p" : "a";
  std::string spec = "c|";
  for (std::size_t i = 0; i <= rows.size(); ++i) spec += "|c";
  std::ostringstream os;
  os << "\\begin{tabular}{" << spec << "}\n";
  os << "$n$";
  for (const auto& r : rows) os << " & " << r.n;
  os << " & \\dots\\\\\n\\hline\n";
  os << "$\\Delta^\\mathfrak{" << sym << "}_1$";
  for (const auto& r : rows) os << " & " << r.delta1;
  os << " & \\dots \\\\\n\\hline\n";
  os << "$\\Delta^\\mathfrak{" << sym << "}_2$";
  for (const auto& r : rows) os << " & " << r.delta2;
  os << " & \\dots\n\\end{tabular}\n";
  return os.str();
}

json gap_table_json(const std::vector<GapRow>& rows, GapAlgebra algebra) {
  json a = json::array();
  for (const auto& r : rows) {
    json by_sig{{"riemannian", *r.riemannian}, {"lorentzian", *r.lorentzian}};
    by_sig["general"] = r.general ? json(*r.general) : json(nullptr);
    json o{{"n", r.n},
           {"max_dim", r.max_dim},
           {"submax_general", r.submax_general},
           {"submax_metric_by_signature", by_sig},
           {"submax_metric", r.submax_metric},
           {"sigma", r.sigma},
           {"delta1", r.delta1},
           {"delta2", r.delta2}};
    if (!r.checked.empty()) {
      o["jet_checked"] = r.checked;
      o["consistent"] = r.consistent;
    }
    a.push_back(o);
  }
  return {{"schema", kSchemaVersion},
          {"algebra", algebra == GapAlgebra::projective ? "projective" : "affine"},
          {"rows", a}};
}

}  // namespace jetsym
