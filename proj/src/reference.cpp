#include "lseval/reference.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

namespace lseval::reference {

std::vector<Peak> nms_peaks(const ScalarMap& map, int window, double threshold, int max_detections) {
  const int radius = window / 2;
  struct Candidate {
    float score;
    int row, col;
  };
  std::vector<Candidate> found;
  for (int row = 0; row < map.height(); ++row) {
    for (int col = 0; col < map.width(); ++col) {
      const float v = map.at(col, row);
      if (v < threshold) continue;
      bool keep = true;
      for (int r = row - radius; r <= row + radius && keep; ++r) {
        for (int c = col - radius; c <= col + radius && keep; ++c) {
          if (r < 0 || c < 0 || r >= map.height() || c >= map.width()) continue;
          if (r == row && c == col) continue;
          const float u = map.at(c, r);
          if (u > v) keep = false;
          if (u == v && std::tie(r, c) < std::tie(row, col)) keep = false;
        }
      }
      if (keep) found.push_back({v, row, col});
    }
  }
  std::sort(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(b.score, a.row, a.col) < std::tie(a.score, b.row, b.col);
  });
  std::vector<Peak> out;
  for (const auto& c : found) {
    if (static_cast<int>(out.size()) == max_detections) break;
    out.push_back({{double(c.col), double(c.row)}, c.score});
  }
  return out;
}

std::vector<double> squared_distance_transform(const BinaryRaster& raster) {
  std::vector<Pixel> set;
  for (int r = 0; r < raster.height; ++r) {
    for (int c = 0; c < raster.width; ++c) {
      if (raster.get(c, r)) set.push_back({c, r});
    }
  }
  std::vector<double> out(raster.cells.size(), std::numeric_limits<double>::infinity());
  for (int r = 0; r < raster.height; ++r) {
    for (int c = 0; c < raster.width; ++c) {
      double& best = out[static_cast<std::size_t>(r) * raster.width + c];
      for (const Pixel& p : set) {
        const double dx = p.col - c, dy = p.row - r;
        best = std::min(best, dx * dx + dy * dy);
      }
    }
  }
  return out;
}

namespace {

std::size_t search(std::size_t d, const std::vector<std::vector<bool>>& ok, std::vector<bool>& used) {
  if (d == ok.size()) return 0;
  std::size_t best = search(d + 1, ok, used);
  for (std::size_t g = 0; g < used.size(); ++g) {
    if (!used[g] && ok[d][g]) {
      used[g] = true;
      best = std::max(best, 1 + search(d + 1, ok, used));
      used[g] = false;
    }
  }
  return best;
}

}  // namespace

std::size_t max_true_positives(const std::vector<LineSegment>& dets,
                               const std::vector<LineSegment>& gts,
                               const MatchCriterion& criterion) {
  std::vector<std::vector<bool>> ok(dets.size(), std::vector<bool>(gts.size()));
  for (std::size_t d = 0; d < dets.size(); ++d) {
    for (std::size_t g = 0; g < gts.size(); ++g) {
      ok[d][g] = criterion.quality(dets[d], gts[g]).has_value();
    }
  }
  std::vector<bool> used(gts.size(), false);
  return search(0, ok, used);
}

}  // namespace lseval::reference
