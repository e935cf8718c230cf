#pragma once

#include <cstddef>
#include <string>

#include "frameinv/errors.hpp"

namespace frameinv {

/// The symmetric index set {-k, ..., k}, stored contiguously starting at -k.
class IndexSet {
 public:
  IndexSet() = default;
  explicit IndexSet(int half_width) : half_width_(half_width) {
    detail::require(half_width >= 0, "IndexSet: half width must be nonnegative, got " +
                                         std::to_string(half_width));
  }

  int half_width() const noexcept { return half_width_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(2 * half_width_ + 1); }
  int first() const noexcept { return -half_width_; }
  int last() const noexcept { return half_width_; }
  bool contains(int j) const noexcept { return j >= -half_width_ && j <= half_width_; }
  bool covers(const IndexSet& other) const noexcept { return other.half_width_ <= half_width_; }

  std::size_t position(int j) const {
    detail::require(contains(j), "IndexSet: index " + std::to_string(j) + " outside {-" +
                                     std::to_string(half_width_) + ".." +
                                     std::to_string(half_width_) + "}");
    return static_cast<std::size_t>(j + half_width_);
  }
  int index(std::size_t pos) const noexcept { return static_cast<int>(pos) - half_width_; }

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  int half_width_ = 0;
};

}  // namespace frameinv
