#pragma once

#include "jetsym/rational.hpp"

#include <optional>
#include <vector>

namespace jetsym {

using QMatrix = std::vector<std::vector<Rational>>;

/// Reduced row echelon form in place; returns the pivot columns.
std::vector<std::size_t> rref(QMatrix& m);
std::size_t rank(QMatrix m);
/// Basis of the right kernel {x : m x = 0} for a matrix with `cols` columns.
std::vector<std::vector<Rational>> kernel(QMatrix m, std::size_t cols);
/// Some solution of m x = b, if one exists.
std::optional<std::vector<Rational>> solve(QMatrix m, const std::vector<Rational>& b, std::size_t cols);

}  // namespace jetsym
