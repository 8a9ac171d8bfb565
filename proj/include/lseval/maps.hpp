#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lseval/error.hpp"

namespace lseval {

/// Dense row-major single-channel map. Pixel (col, row) sits at image
/// coordinate (x = col, y = row).
class ScalarMap {
 public:
  ScalarMap() = default;
  ScalarMap(int width, int height, float fill = 0.0f);
  ScalarMap(int width, int height, std::vector<float> values);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  float& at(int col, int row) { return values_[index(col, row)]; }
  float at(int col, int row) const { return values_[index(col, row)]; }
  std::size_t index(int col, int row) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(col);
  }

  const std::vector<float>& values() const { return values_; }
  std::vector<float>& values() { return values_; }

  friend bool operator==(const ScalarMap&, const ScalarMap&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> values_;
};

/// Per-pixel displacements to a segment's start and end, in pixels, with a
/// validity mask marking the supervised (or predicted) support.
struct DisplacementField {
  DisplacementField() = default;
  DisplacementField(int width, int height);

  int width = 0;
  int height = 0;
  std::vector<float> dxs, dys, dxe, dye;
  std::vector<std::uint8_t> valid;

  std::size_t index(int col, int row) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(col);
  }

  friend bool operator==(const DisplacementField&, const DisplacementField&) = default;
};

template <typename A, typename B>
void require_same_dims(const A& a, const B& b, const char* what) {
  int aw, ah, bw, bh;
  if constexpr (requires { a.width(); }) {
    aw = a.width(), ah = a.height();
  } else {
    aw = a.width, ah = a.height;
  }
  if constexpr (requires { b.width(); }) {
    bw = b.width(), bh = b.height();
  } else {
    bw = b.width, bh = b.height;
  }
  if (aw != bw || ah != bh) {
    throw DimensionMismatch(std::string(what) + ": " + std::to_string(aw) + "x" +
                            std::to_string(ah) + " vs " + std::to_string(bw) + "x" +
                            std::to_string(bh));
  }
}

}  // namespace lseval
