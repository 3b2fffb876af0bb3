#include "tailcalc/group.hpp"

#include <sstream>

#include "tailcalc/errors.hpp"

namespace tailcalc {

Group Group::cyclic(std::vector<int> moduli) {
  if (moduli.empty()) throw InvalidArgument("cyclic group needs at least one axis");
  for (int n : moduli)
    if (n < 1) throw InvalidArgument("cyclic modulus must be positive");
  Group g;
  g.kind_ = GroupKind::Cyclic;
  g.moduli_ = std::move(moduli);
  g.extent_ = g.moduli_;
  g.size_ = 1;
  for (int n : g.extent_) g.size_ *= static_cast<std::size_t>(n);
  g.zeroIndex_ = 0;
  g.buildTables();
  return g;
}

Group Group::window(std::vector<std::pair<int, int>> bounds) {
  if (bounds.empty()) throw InvalidArgument("window group needs at least one axis");
  Group g;
  g.kind_ = GroupKind::Window;
  g.bounds_ = std::move(bounds);
  g.size_ = 1;
  for (auto [lo, hi] : g.bounds_) {
    if (hi < lo) throw InvalidArgument("window bounds must satisfy lo <= hi");
    g.extent_.push_back(hi - lo + 1);
    g.size_ *= static_cast<std::size_t>(hi - lo + 1);
  }
  std::vector<int> origin(g.bounds_.size(), 0);
  auto z = g.indexOf(origin);
  if (!z) throw InvalidArgument("window must contain the origin");
  g.zeroIndex_ = *z;
  g.buildTables();
  return g;
}

std::vector<int> Group::coords(std::size_t index) const {
  std::vector<int> c(extent_.size());
  for (int axis = dim() - 1; axis >= 0; --axis) {
    int e = extent_[axis];
    int r = static_cast<int>(index % static_cast<std::size_t>(e));
    index /= static_cast<std::size_t>(e);
    c[axis] = (kind_ == GroupKind::Cyclic) ? r : bounds_[axis].first + r;
  }
  return c;
}

std::optional<std::size_t> Group::indexOf(const std::vector<int>& c) const {
  if (c.size() != extent_.size()) throw DimensionMismatch("coordinate arity");
  std::size_t idx = 0;
  for (int axis = 0; axis < dim(); ++axis) {
    int v = c[axis];
    if (kind_ == GroupKind::Cyclic) {
      int n = moduli_[axis];
      v %= n;
      if (v < 0) v += n;
    } else {
      if (v < bounds_[axis].first || v > bounds_[axis].second) return std::nullopt;
      v -= bounds_[axis].first;
    }
    idx = idx * static_cast<std::size_t>(extent_[axis]) + static_cast<std::size_t>(v);
  }
  return idx;
}

void Group::buildTables() {
  addTable_.assign(size_ * size_, -1);
  negTable_.assign(size_, -1);
  for (std::size_t a = 0; a < size_; ++a) {
    auto ca = coords(a);
    std::vector<int> nc(ca.size());
    for (std::size_t k = 0; k < ca.size(); ++k) nc[k] = -ca[k];
    if (auto i = indexOf(nc)) negTable_[a] = static_cast<long>(*i);
    for (std::size_t b = 0; b < size_; ++b) {
      auto cb = coords(b);
      std::vector<int> sum(ca.size());
      for (std::size_t k = 0; k < ca.size(); ++k) sum[k] = ca[k] + cb[k];
      if (auto i = indexOf(sum)) addTable_[a * size_ + b] = static_cast<long>(*i);
    }
  }
}

std::optional<std::size_t> Group::sub(std::size_t a, std::size_t b) const {
  auto nb = neg(b);
  if (!nb) return std::nullopt;
  return add(a, *nb);
}

std::string Group::elementLabel(std::size_t index) const {
  auto c = coords(index);
  if (c.size() == 1) return std::to_string(c[0]);
  std::ostringstream os;
  os << "(";
  for (std::size_t k = 0; k < c.size(); ++k) os << (k ? "," : "") << c[k];
  os << ")";
  return os.str();
}

bool Group::operator==(const Group& other) const {
  return kind_ == other.kind_ && moduli_ == other.moduli_ && bounds_ == other.bounds_;
}

}  // namespace tailcalc
