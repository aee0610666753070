#pragma once

// Linear finite-type PDE systems for the symmetry algebras and the degree of mobility,
// and their solution-space dimensions at generic points by jet prolongation.

#include "jetsym/geometry.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace jetsym {

enum class SystemKind : std::uint8_t { killing, homothety, conformal, affine, projective, mobility };
std::string_view to_string(SystemKind k);
std::optional<SystemKind> system_kind_from_string(std::string_view s);

struct Unknown {
  std::string name;
  /// Level offset: the jet d^alpha u sits at level |alpha| + weight, so that every term
  /// of an equation of order s has level <= s.
  int weight = 0;
};

struct JetTerm {
  RatExpr coeff;
  std::size_t unknown = 0;
  std::vector<int> alpha;  // derivative multi-index, length n
};

struct Equation {
  std::vector<JetTerm> terms;
  std::string label;
};

struct LinearPdeSystem {
  SystemKind kind = SystemKind::killing;
  Chart chart;
  std::vector<Unknown> unknowns;
  std::vector<Equation> equations;
  int order = 1;
  /// Functions that must not vanish at evaluation points.
  std::vector<RatExpr> nonvanishing;

  std::size_t dim() const { return chart.dim(); }
};

class JetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Metric systems: every kind. Throws JetError for conformal with n = 2.
LinearPdeSystem build_system(SystemKind kind, const MetricField& g);
/// Connection systems: affine and projective only.
LinearPdeSystem build_system(SystemKind kind, const ConnectionField& conn);

/// Level of an equation: the largest level among its terms.
int equation_level(const LinearPdeSystem& sys, const Equation& e);

struct ProlongedMatrix {
  /// Column labels "u[alpha]" for every jet of level <= order + k.
  std::vector<std::string> columns;
  /// Rows: d^beta E for every equation E and every |beta| <= k (levels up to order + k).
  std::vector<std::vector<Rational>> rows;
  /// 0 when the entries are the exact values; otherwise the prime they were reduced by.
  std::uint64_t modulus = 0;
  std::size_t rank = 0;
  std::size_t nullity = 0;
};

/// Full (non-incremental) prolongation matrix at a point. Exact over Q when no
/// coefficient contains exp/sin/cos; otherwise reduced modulo 2^31 - 1 with the
/// transcendental values replaced by generic residues drawn from `seed`.
ProlongedMatrix prolong_to_order(const LinearPdeSystem& sys, int k, const std::vector<Rational>& point,
                                 std::uint64_t seed = 0);

struct JetOptions {
  int points = 2;
  int max_order = 6;  // prolongation steps beyond the system order
  unsigned precision_bits = 256;
  std::uint64_t seed = 0;
  std::vector<std::vector<Rational>> fixed_points;  // used before random points
  bool parallel = true;
};

struct PointRun {
  std::vector<Rational> point;
  std::uint64_t modulus = 0;  // 0: exact arithmetic
  std::vector<long> d_sequence;
  long dimension = -1;        // -1: no closure within max_order
  int closure_level = -1;
};

struct JetRankReport {
  std::vector<long> d_sequence;  // d_k for k = 1, 2, ... at the point realizing the minimum
  long stabilized_dim = -1;
  int orders_used = 0;
  std::vector<std::vector<Rational>> points;
  unsigned precision_bits = 0;
  bool confident = false;
  bool exact = false;
  std::vector<PointRun> runs;
};

/// Throws JetError when no run closes within max_order or every point is unusable.
JetRankReport solution_dimension(const LinearPdeSystem& sys, const JetOptions& opts = {});

struct SymmetryReport {
  long dim_isometry = -1;
  long dim_homothety = -1;
  std::optional<long> dim_conformal;
  long dim_affine = -1;
  long dim_projective = -1;
  long degree_of_mobility = -1;
  CurvatureFlags flags;
  std::map<SystemKind, JetRankReport> details;
  bool est1 = false;  // P <= I + D
  bool est2 = false;  // P <= H + D - 1
  bool confident = false;
};

class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every dimension of a metric. Throws InvariantViolation if the ordering
/// I <= H <= I + 1, H <= C, A <= P or the estimates fail.
SymmetryReport symmetry_profile(const MetricField& g, const JetOptions& opts = {},
                                const std::vector<SystemKind>& kinds = {});

}  // namespace jetsym
