#include "jetsym/chart.hpp"

#include <cctype>
#include <set>
#include <stdexcept>

namespace jetsym {

std::optional<std::size_t> Chart::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (coords[i] == name) return i;
  return std::nullopt;
}

void Chart::validate() const {
  if (coords.size() < 2) throw std::invalid_argument("chart needs at least two coordinates");
  static const std::set<std::string> reserved{"exp", "sin", "cos", "sinh", "cosh"};
  std::set<std::string> seen;
  for (const auto& c : coords) {
    if (c.empty() || !(std::isalpha(static_cast<unsigned char>(c[0])) || c[0] == '_'))
      throw std::invalid_argument("invalid coordinate name '" + c + "'");
    for (char ch : c)
      if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'))
        throw std::invalid_argument("invalid coordinate name '" + c + "'");
    if (reserved.count(c)) throw std::invalid_argument("coordinate name '" + c + "' is reserved");
    if (!seen.insert(c).second) throw std::invalid_argument("duplicate coordinate '" + c + "'");
    if (params.count(c)) throw std::invalid_argument("'" + c + "' is both a coordinate and a parameter");
  }
}

bool same_coordinates(const Chart& a, const Chart& b) { return a.coords == b.coords; }

}  // namespace jetsym
