#pragma once

#include "jetsym/chart.hpp"
#include "jetsym/expr.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace jetsym {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : std::runtime_error(message + " at position " + std::to_string(position)), position_(position) {}
  /// Zero-based byte offset into the parsed text.
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Parses text in the expression grammar. Identifiers must be coordinates or
/// parameters of the chart; parameters are replaced by their values.
RatExpr parse_expr(std::string_view text, const Chart& chart);

/// Parses an affine-linear form such as "2*x - y/3 + 1".
LinearForm parse_linear(std::string_view text, const Chart& chart);

}  // namespace jetsym
