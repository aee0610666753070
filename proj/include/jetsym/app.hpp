#pragma once

// Front-end plumbing shared by the command-line tool and the acceptance suite: input
// files, analysis reports, verification reports and the gap tables.

#include "jetsym/verify.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace jetsym {

constexpr int kSchemaVersion = 1;

/// Bad input: unreadable file, malformed JSON, expression parse errors, degenerate metric.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NamedField {
  std::string name;
  VectorFieldExpr field;
};

/// Parsed input file. Format (schema 1):
///   {"coords": ["x", "y"], "params": {"c": "1/2"}, "metric": [["1", "0"], ["0", "x^2"]],
///    "connection": [{"upper": "x", "lower": ["y", "y"], "value": "x"}],
///    "fields": [{"name": "translation", "components": ["0", "1"]}]}
/// Exactly one of metric and connection is required; connection entries are
/// symmetrized in the lower indices and unlisted components vanish.
struct InputGeometry {
  std::optional<MetricField> metric;
  std::optional<ConnectionField> connection;
  std::vector<NamedField> fields;
};

InputGeometry parse_input(const std::string& text);
InputGeometry read_input_file(const std::string& path);
/// Inverse of parse_input for metric inputs.
std::string write_input(const MetricField& g, const std::vector<NamedField>& fields = {});

struct AnalysisRequest {
  std::optional<std::string> file;
  std::optional<std::string> model;  // catalogue name
  int n = 0;
  std::map<std::string, Rational> params;
  std::vector<std::vector<Rational>> points;
  std::vector<SystemKind> kinds;  // empty: every kind
  int max_order = 6;
  unsigned precision_bits = 256;
  std::uint64_t seed = 0;

  JetOptions jet_options() const;
};

/// Throws InputError, JetError, InvariantViolation or CatalogueError.
nlohmann::json run_analysis(const AnalysisRequest& req);

nlohmann::json models_json();
nlohmann::json verification_json(const VerificationReport& r);
nlohmann::json jet_report_json(const JetRankReport& r);

enum class GapAlgebra : std::uint8_t { projective, affine };

struct GapRow {
  int n = 0;
  long max_dim = 0;
  long submax_general = 0;
  /// Metric submaximal dimension per signature; general signature needs n >= 4.
  std::optional<long> riemannian, lorentzian, general;
  long submax_metric = 0;  // over all signatures
  long sigma = 0;          // submax_metric = n^2 - 3n + sigma
  long delta1 = 0;
  long delta2 = 0;
  /// Jet-counter values on the catalogue models realizing the metric entries (n <= 5).
  std::map<std::string, long> checked;
  bool consistent = true;
};

/// Rows for n = 2..n_max from the closed formulas; with `cross_check` the metric
/// entries for n <= 5 are recomputed on catalogue models.
std::vector<GapRow> gap_table(int n_max, GapAlgebra algebra, bool cross_check = false, const JetOptions& opts = {});
/// LaTeX tabular in the layout of the published tables.
std::string format_gap_table(const std::vector<GapRow>& rows, GapAlgebra algebra);
nlohmann::json gap_table_json(const std::vector<GapRow>& rows, GapAlgebra algebra);

}  // namespace jetsym
