#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lseval/geometry.hpp"

namespace lseval {

struct Pixel {
  int col = 0;
  int row = 0;
  friend constexpr bool operator==(const Pixel&, const Pixel&) = default;
};

/// Nearest pixel to a continuous coordinate, clamped into the grid.
Pixel nearest_pixel(Point2 p, int width, int height);

/// Bresenham line between two pixels, both endpoints included.
std::vector<Pixel> bresenham(Pixel a, Pixel b);

/// Binary occupancy grid, row-major.
struct BinaryRaster {
  BinaryRaster(int w, int h) : width(w), height(h), cells(static_cast<std::size_t>(w) * h, 0) {}

  int width;
  int height;
  std::vector<std::uint8_t> cells;

  void set(Pixel p) { cells[static_cast<std::size_t>(p.row) * width + p.col] = 1; }
  bool get(int col, int row) const {
    return cells[static_cast<std::size_t>(row) * width + col] != 0;
  }
  std::size_t count() const;
};

/// Draws the segment's rounded endpoints with Bresenham.
void draw_segment(BinaryRaster& raster, const LineSegment& seg);

/// Squared Euclidean distance from every cell to the nearest set cell
/// (separable lower-envelope transform, parallel over rows and columns).
/// Cells of a raster with no set cell get +infinity.
std::vector<double> squared_distance_transform(const BinaryRaster& raster);

}  // namespace lseval
