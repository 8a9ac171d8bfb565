#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lseval/metrics.hpp"

namespace lseval {

/// Which metrics a run computes.
struct MetricSelection {
  bool fh = true;
  bool sap = true;
  bool lap = true;
};

struct ApResult {
  std::string name;        ///< "sAP5", "LAP", ...
  double threshold = 0.0;  ///< epsilon for sAP, LMS cutoff for LAP
  double ap_percent = 0.0;
  std::size_t true_positives = 0;
  PRCurve curve;
};

struct ImageBreakdown {
  std::string image_id;
  std::size_t n_gt = 0;
  std::size_t n_det = 0;
  /// True positives per AP metric, parallel to MetricReport::ap.
  std::vector<std::size_t> true_positives;
};

struct MetricReport {
  MetricConfig config;
  MetricSelection selection;
  std::size_t n_images = 0;
  std::size_t n_gt = 0;
  std::size_t n_det = 0;

  // Pixel metric: best F over the confidence sweep, and the sweep itself.
  double fh = 0.0;
  double fh_threshold = 0.0;
  std::vector<PixelScore> pixel_sweep;

  std::vector<ApResult> ap;  ///< sAP at each epsilon, then LAP
  std::vector<ImageBreakdown> images;

  const ApResult* find(const std::string& name) const;
};

/// Runs the selected metrics. Images are processed in parallel on `jobs`
/// threads; every field of the result is independent of `jobs`.
MetricReport evaluate(const std::vector<Detection>& dets, const AnnotationSet& gts,
                      const MetricConfig& cfg, const MetricSelection& selection = {},
                      int jobs = 1);

}  // namespace lseval
