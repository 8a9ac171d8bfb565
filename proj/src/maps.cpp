#include "lseval/maps.hpp"

namespace lseval {

namespace {

std::size_t checked_area(int width, int height) {
  if (width <= 0 || height <= 0) {
    throw Error("map dimensions must be positive, got " + std::to_string(width) + "x" +
                std::to_string(height));
  }
  return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
}

}  // namespace

ScalarMap::ScalarMap(int width, int height, float fill)
    : width_(width), height_(height), values_(checked_area(width, height), fill) {}

ScalarMap::ScalarMap(int width, int height, std::vector<float> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (values_.size() != checked_area(width, height)) {
    throw DimensionMismatch("map of " + std::to_string(width) + "x" + std::to_string(height) +
                            " given " + std::to_string(values_.size()) + " values");
  }
}

DisplacementField::DisplacementField(int w, int h) : width(w), height(h) {
  const std::size_t n = checked_area(w, h);
  dxs.assign(n, 0.0f);
  dys.assign(n, 0.0f);
  dxe.assign(n, 0.0f);
  dye.assign(n, 0.0f);
  valid.assign(n, 0);
}

}  // namespace lseval
