#pragma once

// Coordinate metrics, connections and curvature.
//
// Conventions: R^i_jkl = d_k G^i_lj - d_l G^i_kj + G^i_km G^m_lj - G^i_lm G^m_kj, so that
// R(d_k, d_l) d_j = R^i_jkl d_i, and Ric_jl = R^k_jkl.

#include "jetsym/chart.hpp"
#include "jetsym/eval.hpp"
#include "jetsym/expr.hpp"

#include <initializer_list>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace jetsym {

using Matrix = std::vector<std::vector<RatExpr>>;

class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Variance : std::uint8_t { up, down };

struct TensorField {
  Chart chart;
  std::vector<Variance> variance;
  std::vector<RatExpr> components;  // row-major over the index tuple

  TensorField() = default;
  TensorField(Chart c, std::vector<Variance> v);

  std::size_t dim() const { return chart.dim(); }
  std::size_t rank() const { return variance.size(); }
  std::size_t offset(std::initializer_list<std::size_t> idx) const;
  RatExpr& at(std::initializer_list<std::size_t> idx) { return components[offset(idx)]; }
  const RatExpr& at(std::initializer_list<std::size_t> idx) const { return components[offset(idx)]; }
  /// Index tuple of a flat offset.
  std::vector<std::size_t> indices(std::size_t flat) const;
  bool is_zero() const;
};

struct MetricField {
  Chart chart;
  Matrix g;
  std::pair<int, int> signature{0, 0};  // (plus, minus) at base_point
  std::vector<Rational> base_point;

  std::size_t dim() const { return chart.dim(); }
};

struct ConnectionField {
  Chart chart;
  std::vector<RatExpr> gamma;  // G^i_jk at (i*n + j)*n + k

  ConnectionField() = default;
  explicit ConnectionField(Chart c);
  std::size_t dim() const { return chart.dim(); }
  RatExpr& operator()(std::size_t i, std::size_t j, std::size_t k) { return gamma[(i * dim() + j) * dim() + k]; }
  const RatExpr& operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return gamma[(i * dim() + j) * dim() + k];
  }
};

/// Builds a connection from the given components; throws GeometryError unless torsion-free.
ConnectionField make_connection(const Chart& chart, std::vector<RatExpr> gamma);

struct CurvatureFlags {
  bool flat = false;
  std::optional<Rational> constant_curvature;
  bool conformally_flat = false;
  bool projectively_flat = false;
};

// ---- linear algebra over RatExpr
RatExpr determinant(const Matrix& m);
/// Throws GeometryError if the matrix is singular as a function.
Matrix inverse(const Matrix& m);

// ---- points
/// Random rational point (numerators/denominators of height <= 40) at which none of
/// the given functions vanishes.
std::vector<Rational> generic_point(std::size_t n, const std::vector<RatExpr>& nonvanishing, std::mt19937_64& rng);
bool nonvanishing_at(const RatExpr& f, std::span<const Rational> point);

// ---- metrics
/// Validates symmetry and non-degeneracy and records the signature at the base point
/// (chosen generically from `seed` when empty), re-checked at a perturbed point.
MetricField make_metric(Chart chart, Matrix g, std::vector<Rational> base_point = {}, std::uint64_t seed = 0);
/// Number of positive and negative eigenvalues of the metric at a point.
std::pair<int, int> signature_at(const Matrix& g, std::span<const Rational> point, unsigned precision_bits = 256);

ConnectionField levi_civita(const MetricField& g);

struct CurvatureSuite {
  TensorField riemann;  // R^i_jkl
  TensorField ricci;    // Ric_jl
  std::optional<RatExpr> scalar;
  std::optional<RatExpr> riem_norm_sq;
};

TensorField riemann(const ConnectionField& conn);
TensorField ricci(const TensorField& riemann);
CurvatureSuite curvature_suite(const ConnectionField& conn, const MetricField* g = nullptr, bool with_norm = false);

struct ProjectiveWeyl {
  /// Components W^i_{klj} stored as at({i, k, l, j}): antisymmetric in the first lower
  /// pair, the last lower index is the one R acts on.
  TensorField w;
  bool dimension_two = false;  // n = 2: returned as zero
};
ProjectiveWeyl projective_weyl(const ConnectionField& conn);

/// Fully lowered conformal Weyl tensor C_abcd (n >= 3; throws GeometryError for n = 2).
TensorField conformal_weyl(const MetricField& g);
/// Cotton tensor C_ijk = nabla_k P_ij - nabla_j P_ik of the Schouten tensor (n = 3 only).
TensorField cotton_tensor(const MetricField& g);

/// Riemann tensor with the first index lowered: R_abcd = g_ai R^i_bcd.
TensorField lowered_riemann(const MetricField& g, const TensorField& riemann);

CurvatureFlags curvature_flags(const MetricField& g);

}  // namespace jetsym
