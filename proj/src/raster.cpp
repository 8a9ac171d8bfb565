#include "lseval/raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace lseval {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1-D squared distance transform of a sampled function (Felzenszwalb &
// Huttenlocher lower envelope of parabolas). `f` and `out` have length n;
// `v` and `z` are scratch of length n and n + 1.
void dt_1d(const double* f, double* out, int n, std::vector<int>& v, std::vector<double>& z) {
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] == kInf) {
      continue;
    }
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -kInf;
      z[1] = kInf;
      continue;
    }
    double s;
    for (;;) {
      const int p = v[k];
      s = ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p));
      if (k > 0 && s <= z[k]) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  if (k < 0) {
    std::fill(out, out + n, kInf);
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) {
      ++j;
    }
    const double d = q - v[j];
    out[q] = d * d + f[v[j]];
  }
}

}  // namespace

Pixel nearest_pixel(Point2 p, int width, int height) {
  const auto round = [](double v, int hi) {
    return std::clamp(static_cast<int>(std::floor(v + 0.5)), 0, hi - 1);
  };
  return {round(p.x, width), round(p.y, height)};
}

std::vector<Pixel> bresenham(Pixel a, Pixel b) {
  std::vector<Pixel> out;
  const int dx = std::abs(b.col - a.col), sx = a.col < b.col ? 1 : -1;
  const int dy = -std::abs(b.row - a.row), sy = a.row < b.row ? 1 : -1;
  out.reserve(static_cast<std::size_t>(std::max(dx, -dy)) + 1);
  int err = dx + dy;
  Pixel p = a;
  for (;;) {
    out.push_back(p);
    if (p == b) {
      break;
    }
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      p.col += sx;
    }
    if (e2 <= dx) {
      err += dx;
      p.row += sy;
    }
  }
  return out;
}

std::size_t BinaryRaster::count() const {
  return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), std::uint8_t{1}));
}

void draw_segment(BinaryRaster& raster, const LineSegment& seg) {
  const Pixel a = nearest_pixel(seg.start(), raster.width, raster.height);
  const Pixel b = nearest_pixel(seg.end(), raster.width, raster.height);
  for (const Pixel& p : bresenham(a, b)) {
    raster.set(p);
  }
}

std::vector<double> squared_distance_transform(const BinaryRaster& raster) {
  const int w = raster.width, h = raster.height;
  std::vector<double> grid(static_cast<std::size_t>(w) * h);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = raster.cells[i] ? 0.0 : kInf;
  }

#pragma omp parallel
  {
    const int n = std::max(w, h);
    std::vector<double> f(n), out(n), z(n + 1);
    std::vector<int> v(n);

#pragma omp for schedule(static)
    for (int c = 0; c < w; ++c) {
      for (int r = 0; r < h; ++r) f[r] = grid[static_cast<std::size_t>(r) * w + c];
      dt_1d(f.data(), out.data(), h, v, z);
      for (int r = 0; r < h; ++r) grid[static_cast<std::size_t>(r) * w + c] = out[r];
    }

#pragma omp for schedule(static)
    for (int r = 0; r < h; ++r) {
      double* row = grid.data() + static_cast<std::size_t>(r) * w;
      std::copy(row, row + w, f.begin());
      dt_1d(f.data(), row, w, v, z);
    }
  }
  return grid;
}

}  // namespace lseval
