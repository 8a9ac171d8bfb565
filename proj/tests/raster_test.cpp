#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lseval/raster.hpp"
#include "lseval/reference.hpp"

namespace lseval {
namespace {

TEST(Bresenham, AxisAlignedAndDiagonal) {
  const auto h = bresenham({0, 0}, {4, 0});
  ASSERT_EQ(h.size(), 5u);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(h[i], (Pixel{i, 0}));

  const auto d = bresenham({0, 0}, {3, 3});
  ASSERT_EQ(d.size(), 4u);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(d[i], (Pixel{i, i}));
}

TEST(Bresenham, EightConnectedAndEndpointsIncluded) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> c(-30, 30);
  for (int k = 0; k < 500; ++k) {
    const Pixel a{c(rng), c(rng)}, b{c(rng), c(rng)};
    const auto line = bresenham(a, b);
    EXPECT_EQ(line.front(), a);
    EXPECT_EQ(line.back(), b);
    EXPECT_EQ(line.size(), static_cast<std::size_t>(
                               std::max(std::abs(a.col - b.col), std::abs(a.row - b.row)) + 1));
    for (std::size_t i = 1; i < line.size(); ++i) {
      EXPECT_LE(std::abs(line[i].col - line[i - 1].col), 1);
      EXPECT_LE(std::abs(line[i].row - line[i - 1].row), 1);
    }
  }
}

TEST(NearestPixel, RoundsAndClamps) {
  EXPECT_EQ(nearest_pixel({2.5, 3.49}, 10, 10), (Pixel{3, 3}));
  EXPECT_EQ(nearest_pixel({10.0, -0.4}, 10, 10), (Pixel{9, 0}));
}

TEST(DistanceTransform, EmptyRasterIsInfinite) {
  for (double d : squared_distance_transform(BinaryRaster(7, 5))) EXPECT_TRUE(std::isinf(d));
}

TEST(DistanceTransform, MatchesBruteForce) {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const int w = 5 + trial % 23, h = 3 + (trial * 7) % 29;
    BinaryRaster r(w, h);
    std::bernoulli_distribution on(trial % 4 == 0 ? 0.005 : 0.08);
    for (auto& c : r.cells) c = on(rng);
    const auto fast = squared_distance_transform(r);
    const auto ref = reference::squared_distance_transform(r);
    ASSERT_EQ(fast.size(), ref.size());
    for (std::size_t i = 0; i < fast.size(); ++i) EXPECT_EQ(fast[i], ref[i]) << "trial " << trial;
  }
}

}  // namespace
}  // namespace lseval
