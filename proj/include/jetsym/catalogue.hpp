#pragma once

// Registry of the explicit models: metrics and connections together with their
// expected symmetry dimensions and generator lists.

#include "jetsym/symmetry.hpp"

#include <map>
#include <string>
#include <vector>

namespace jetsym {

enum class Provenance : std::uint8_t { paper, derived, trivial };
std::string_view to_string(Provenance p);

struct Expected {
  long value = 0;
  Provenance provenance = Provenance::derived;
};

struct ExpectedDims {
  std::optional<Expected> isometry, homothety, conformal, affine, projective, mobility;
};

struct ExpectedFlags {
  std::optional<bool> flat, conformally_flat, projectively_flat, ricci_flat;
  std::optional<Rational> constant_curvature;
};

struct GeneratorSpec {
  std::string label;  // the field as printed in the source formula
  VectorFieldExpr field;
  FieldKind expected;
  std::optional<Rational> lambda;  // for homotheties
};

enum class ModelKind : std::uint8_t { metric, connection };

struct ParamSpec {
  std::string name;
  Rational default_value;
  std::string constraint;
};

struct ModelInfo {
  std::string name;
  ModelKind kind = ModelKind::metric;
  std::string formula;
  int min_n = 2;
  int max_n = 0;  // 0: unbounded
  int default_n = 2;
  std::vector<ParamSpec> params;  // for dimension-dependent families the schema at default_n
};

struct ModelDescriptor {
  ModelInfo info;
  int n = 0;
  std::map<std::string, Rational> params;
  ExpectedDims expected;
  ExpectedFlags flags;
  std::vector<GeneratorSpec> generators;
  std::optional<std::pair<int, int>> expected_signature;  // up to overall sign
};

struct Model {
  std::optional<MetricField> metric;
  std::optional<ConnectionField> connection;
  ModelDescriptor descriptor;

  const ConnectionField& conn() const;  // the given connection or the Levi-Civita one
};

class CatalogueError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

const std::vector<ModelInfo>& list_models();
const ModelInfo& model_info(const std::string& name);

/// Builds a model; params missing from the map take their defaults. n = 0 selects the
/// model's default dimension. Throws CatalogueError on unknown names, bad dimensions or
/// violated parameter constraints.
Model get_model(const std::string& name, const std::map<std::string, Rational>& params = {}, int n = 0);

}  // namespace jetsym
