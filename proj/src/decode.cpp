#include "lseval/decode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lseval {

namespace {

// A neighbor earlier in (row, col) order must be strictly smaller; a later one
// may tie.
bool is_window_max(const ScalarMap& map, int col, int row, int radius) {
  const float v = map.at(col, row);
  const int r0 = std::max(0, row - radius), r1 = std::min(map.height() - 1, row + radius);
  const int c0 = std::max(0, col - radius), c1 = std::min(map.width() - 1, col + radius);
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c) {
      const float u = map.at(c, r);
      const bool earlier = r < row || (r == row && c < col);
      if (u > v || (earlier && u == v)) {
        return false;
      }
    }
  }
  return true;
}

DecodeResult peaks_to_segments(const std::vector<Peak>& peaks, const DisplacementField& disp) {
  DecodeResult result;
  result.segments.reserve(peaks.size());
  for (const Peak& peak : peaks) {
    const auto col = static_cast<int>(peak.position.x);
    const auto row = static_cast<int>(peak.position.y);
    const std::size_t i = disp.index(col, row);
    if (!disp.valid[i]) {
      ++result.skipped_invalid;
      continue;
    }
    const TriPoint tp{peak.position,
                      {disp.dxs[i], disp.dys[i]},
                      {disp.dxe[i], disp.dye[i]},
                      std::clamp(peak.score, 0.0, 1.0)};
    if (tp.disp_start == tp.disp_end || !is_finite(tp.disp_start) || !is_finite(tp.disp_end)) {
      ++result.skipped_degenerate;
      continue;
    }
    result.segments.push_back(tp_to_segment(tp));
  }
  return result;
}

}  // namespace

void DecodeConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error("alpha must lie in [0, 1], got " + std::to_string(alpha));
  }
  if (!std::isfinite(confidence_threshold)) {
    throw Error("confidence threshold must be finite");
  }
  if (nms_window < 3 || nms_window % 2 == 0) {
    throw Error("NMS window must be odd and >= 3, got " + std::to_string(nms_window));
  }
  if (max_detections < 1) {
    throw Error("max_detections must be positive");
  }
}

ScalarMap point_filter(const ScalarMap& root_given_line, const ScalarMap& line, double alpha) {
  require_same_dims(root_given_line, line, "point_filter");
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error("alpha must lie in [0, 1], got " + std::to_string(alpha));
  }
  ScalarMap out(root_given_line.width(), root_given_line.height());
  const auto& r = root_given_line.values();
  const auto& l = line.values();
  auto& o = out.values();
  const auto n = static_cast<std::ptrdiff_t>(o.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    o[i] = static_cast<float>(static_cast<double>(r[i]) *
                              std::pow(static_cast<double>(l[i]), alpha));
  }
  return out;
}

std::vector<Peak> nms_peaks(const ScalarMap& map, int window, double threshold,
                            int max_detections) {
  if (window < 3 || window % 2 == 0) {
    throw Error("NMS window must be odd and >= 3, got " + std::to_string(window));
  }
  if (map.empty() || max_detections <= 0) {
    return {};
  }
  const int radius = window / 2;
  std::vector<std::vector<Peak>> per_row(static_cast<std::size_t>(map.height()));
#pragma omp parallel for schedule(dynamic, 8)
  for (int row = 0; row < map.height(); ++row) {
    for (int col = 0; col < map.width(); ++col) {
      const float v = map.at(col, row);
      if (v >= threshold && is_window_max(map, col, row, radius)) {
        per_row[static_cast<std::size_t>(row)].push_back(
            {{static_cast<double>(col), static_cast<double>(row)}, v});
      }
    }
  }
  std::vector<Peak> peaks;
  for (auto& row : per_row) {
    peaks.insert(peaks.end(), row.begin(), row.end());
  }
  // Rows were concatenated in order, so a stable sort keeps (row, col) order
  // among equal scores.
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const Peak& a, const Peak& b) { return a.score > b.score; });
  if (peaks.size() > static_cast<std::size_t>(max_detections)) {
    peaks.resize(static_cast<std::size_t>(max_detections));
  }
  return peaks;
}

DecodeResult decode(const ScalarMap& root_given_line, const ScalarMap& line,
                    const DisplacementField& disp, const DecodeConfig& cfg) {
  cfg.validate();
  require_same_dims(root_given_line, line, "decode (line map)");
  require_same_dims(root_given_line, disp, "decode (displacement field)");
  const ScalarMap filtered = point_filter(root_given_line, line, cfg.alpha);
  return peaks_to_segments(
      nms_peaks(filtered, cfg.nms_window, cfg.confidence_threshold, cfg.max_detections), disp);
}

DecodeResult decode(const ScalarMap& root, const DisplacementField& disp,
                    const DecodeConfig& cfg) {
  cfg.validate();
  require_same_dims(root, disp, "decode (displacement field)");
  return peaks_to_segments(
      nms_peaks(root, cfg.nms_window, cfg.confidence_threshold, cfg.max_detections), disp);
}

}  // namespace lseval
