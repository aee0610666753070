#pragma once

#include "jetsym/geometry.hpp"

#include <array>
#include <string>
#include <string_view>
#include <variant>

namespace jetsym {

struct VectorFieldExpr {
  Chart chart;
  std::vector<RatExpr> components;

  std::size_t dim() const { return chart.dim(); }
  bool is_zero() const;
};

/// Throws GeometryError if the component count differs from the chart dimension.
VectorFieldExpr make_field(const Chart& chart, std::vector<RatExpr> components);

enum class FieldKind : std::uint8_t { Killing, Homothety, Conformal, AffineOnly, ProjectiveOnly, NotProjective };
std::string_view to_string(FieldKind k);
std::optional<FieldKind> field_kind_from_string(std::string_view s);

struct Classification {
  FieldKind kind = FieldKind::NotProjective;
  std::optional<Rational> lambda;            // Homothety: L_v g = lambda g
  std::optional<RatExpr> sigma;              // Conformal: L_v g = sigma g
  std::optional<std::vector<RatExpr>> psi;   // ProjectiveOnly: L_v G = psi (x) delta + delta (x) psi
};

/// (L_v g)_ij = v^k d_k g_ij + g_kj d_i v^k + g_ik d_j v^k
TensorField lie_metric(const VectorFieldExpr& v, const MetricField& g);
/// (L_v G)^i_jk, stored as at({i, j, k}).
TensorField lie_connection(const VectorFieldExpr& v, const ConnectionField& conn);
/// v(f) = v^k d_k f
RatExpr lie_function(const VectorFieldExpr& v, const RatExpr& f);

Classification classify_field(const VectorFieldExpr& v, const MetricField& g);
Classification classify_field(const VectorFieldExpr& v, const MetricField& g, const ConnectionField& lc);
/// Connection-only ladder: AffineOnly (meaning affine), ProjectiveOnly or NotProjective.
Classification classify_field(const VectorFieldExpr& v, const ConnectionField& conn);

struct MobilityTensor {
  TensorField a;  // a^i_j stored as at({i, j})
};
/// Throws GeometryError unless g_ik a^k_j is symmetric.
MobilityTensor make_mobility(TensorField a, const MetricField& g);

/// a = g^-1 L_v g - Trace(g^-1 L_v g) / (n+1) Id
MobilityTensor phi_map(const VectorFieldExpr& v, const MetricField& g);
/// (n+1) a^i_{j,k} - a^{is}_{,s} g_jk - a^s_{j,s} delta^i_k, stored as at({i, j, k}).
TensorField mobility_residual(const MobilityTensor& a, const MetricField& g);
TensorField mobility_residual(const MobilityTensor& a, const MetricField& g, const ConnectionField& lc);

/// [u, w]^i = u^k d_k w^i - w^k d_k u^i
VectorFieldExpr bracket(const VectorFieldExpr& u, const VectorFieldExpr& w);

enum class AlgebraMode : std::uint8_t { none, killing, homothety, affine, projective };

struct StructureConstantsTable {
  std::size_t basis_size = 0;                 // number of fields supplied
  std::vector<std::size_t> basis;             // indices of an independent subset
  std::size_t independent_dim = 0;
  bool closure_ok = false;
  bool exact = false;                         // independence decided symbolically
  /// c[i][j][k]: [e_i, e_j] = sum_k c^k_ij e_k over the independent subset.
  std::vector<std::vector<std::vector<Rational>>> constants;
  bool antisymmetric = false;
  bool jacobi = false;
};

class ClassificationError : public std::runtime_error {
 public:
  ClassificationError(const std::string& msg, std::size_t index) : std::runtime_error(msg), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

using GeometrySource = std::variant<const MetricField*, const ConnectionField*>;

/// Span dimension, bracket closure with rational structure constants, antisymmetry and
/// Jacobi. With a mode other than `none`, every field must pass that classification.
StructureConstantsTable algebra_check(const std::vector<VectorFieldExpr>& fields, GeometrySource geom,
                                      AlgebraMode mode = AlgebraMode::projective);

/// Numeric rank of the fields' component values at `points` random generic points.
std::size_t numeric_span_dimension(const std::vector<VectorFieldExpr>& fields, int points = 3,
                                   unsigned precision_bits = 256, std::uint64_t seed = 1);

/// Three-dimensional simple algebra with indefinite Killing form.
bool is_sl2(const StructureConstantsTable& t);

/// Unparameterized geodesics y(x) of a 2D metric satisfy
/// y'' = A3 (y')^3 + A2 (y')^2 + A1 y' + A0; returns {A0, A1, A2, A3}.
std::array<RatExpr, 4> geodesic_ode_2d(const MetricField& g);

}  // namespace jetsym
