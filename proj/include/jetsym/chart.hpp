#pragma once

#include "jetsym/expr.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace jetsym {

/// Coordinate system plus the rational parameter bindings used while parsing.
struct Chart {
  std::vector<std::string> coords;
  std::map<std::string, Rational> params;
  /// Functions that must not vanish at sample points (denominators, det g, ...).
  std::vector<RatExpr> excluded_locus;

  std::size_t dim() const { return coords.size(); }
  std::optional<std::size_t> index_of(std::string_view name) const;
  /// Throws std::invalid_argument unless n >= 2 and names are distinct identifiers.
  void validate() const;
};

bool same_coordinates(const Chart& a, const Chart& b);

}  // namespace jetsym
