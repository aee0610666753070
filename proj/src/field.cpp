#include "field.hpp"

namespace jetsym::detail {

namespace {

void enumerate(std::size_t n, int degree, std::vector<int>& cur, std::size_t var, int left,
               std::vector<std::vector<int>>& out) {
  if (var + 1 == n) {
    cur[var] = left;
    out.push_back(cur);
    return;
  }
  for (int e = left; e >= 0; --e) {
    cur[var] = e;
    enumerate(n, degree, cur, var + 1, left - e, out);
  }
  cur[var] = 0;
}

}  // namespace

MultiIndexTable::MultiIndexTable(std::size_t n, int D) : n_(n), D_(D) {
  std::vector<int> cur(n, 0);
  for (int d = 0; d <= D; ++d) {
    start_.push_back(list_.size());
    enumerate(n, d, cur, 0, d, list_);
  }
  start_.push_back(list_.size());
  for (std::size_t i = 0; i < list_.size(); ++i) {
    index_.emplace(list_[i], i);
    int s = 0;
    for (int e : list_[i]) s += e;
    orders_.push_back(s);
  }
  splits_.resize(list_.size());
  std::vector<int> rest(n);
  for (std::size_t g = 0; g < list_.size(); ++g)
    for (std::size_t r = 0; r < list_.size() && orders_[g] + orders_[r] <= D; ++r) {
      for (std::size_t k = 0; k < n; ++k) rest[k] = list_[g][k] + list_[r][k];
      splits_[index_.at(rest)].emplace_back(static_cast<std::uint32_t>(g), static_cast<std::uint32_t>(r));
    }
}

long MultiIndexTable::id_of(const std::vector<int>& alpha) const {
  auto it = index_.find(alpha);
  return it == index_.end() ? -1 : static_cast<long>(it->second);
}

const std::vector<std::pair<std::uint32_t, std::uint32_t>>& MultiIndexTable::splits(std::size_t delta) const {
  return splits_[delta];
}

}  // namespace jetsym::detail
