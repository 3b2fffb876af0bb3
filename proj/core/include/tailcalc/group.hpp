#ifndef TAILCALC_GROUP_HPP
#define TAILCALC_GROUP_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tailcalc {

enum class GroupKind { Cyclic, Window };

// A finite Abelian index set: either a product of cyclic groups
// Z_{n1} x ... x Z_{nd}, or a finite box window of Z^d. Elements are
// addressed by a flat index in row-major coordinate order, and Haar measure
// is counting measure. Cyclic addition wraps per axis; window addition can
// leave the box, in which case add() reports "outside" and field reads fall
// back to a zero-norm padding value.
class Group {
 public:
  static Group cyclic(std::vector<int> moduli);
  // bounds are inclusive [lo, hi] per axis
  static Group window(std::vector<std::pair<int, int>> bounds);

  GroupKind kind() const { return kind_; }
  bool isCyclic() const { return kind_ == GroupKind::Cyclic; }
  int dim() const { return static_cast<int>(extent_.size()); }
  std::size_t size() const { return size_; }

  std::vector<int> coords(std::size_t index) const;
  // index of a coordinate tuple; nullopt if outside the window box
  std::optional<std::size_t> indexOf(const std::vector<int>& c) const;

  // a + b; nullopt when the sum leaves a window box
  std::optional<std::size_t> add(std::size_t a, std::size_t b) const {
    return fromTable(addTable_[a * size_ + b]);
  }
  // -a
  std::optional<std::size_t> neg(std::size_t a) const {
    return fromTable(negTable_[a]);
  }
  // a - b
  std::optional<std::size_t> sub(std::size_t a, std::size_t b) const;

  std::size_t zero() const { return zeroIndex_; }
  std::string elementLabel(std::size_t index) const;

  bool operator==(const Group& other) const;
  bool operator!=(const Group& other) const { return !(*this == other); }

  const std::vector<int>& cyclicModuli() const { return moduli_; }
  const std::vector<std::pair<int, int>>& windowBounds() const { return bounds_; }

 private:
  Group() = default;
  void buildTables();
  std::optional<std::size_t> fromTable(long v) const {
    if (v < 0) return std::nullopt;
    return static_cast<std::size_t>(v);
  }

  GroupKind kind_ = GroupKind::Cyclic;
  std::vector<int> moduli_;                     // cyclic only
  std::vector<std::pair<int, int>> bounds_;     // window only
  std::vector<int> extent_;                     // points per axis
  std::size_t size_ = 0;
  std::size_t zeroIndex_ = 0;
  std::vector<long> addTable_;  // -1 marks "outside the window"
  std::vector<long> negTable_;
};

using GroupPtr = std::shared_ptr<const Group>;

inline GroupPtr makeCyclic(std::vector<int> moduli) {
  return std::make_shared<const Group>(Group::cyclic(std::move(moduli)));
}
inline GroupPtr makeWindow(std::vector<std::pair<int, int>> bounds) {
  return std::make_shared<const Group>(Group::window(std::move(bounds)));
}

}  // namespace tailcalc

#endif  // TAILCALC_GROUP_HPP
