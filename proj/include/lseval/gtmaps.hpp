#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lseval/geometry.hpp"
#include "lseval/maps.hpp"
#include "lseval/raster.hpp"

namespace lseval {

/// Ground-truth segments of one image, in that image's pixel coordinates.
struct Annotation {
  std::string image_id;
  int width = 0;
  int height = 0;
  std::vector<LineSegment> segments;

  /// Throws Error if the size is not positive or an endpoint leaves
  /// [0, width] x [0, height].
  void validate() const;
};

struct LossWeights {
  double lambda_root = 50.0;
  double lambda_disp = 1.0;
  double lambda_line = 20.0;
};

/// Supervision targets (or predictions of the same shape) for one image.
struct GtBundle {
  ScalarMap root;
  DisplacementField disp;
  ScalarMap line;
};

struct LossTerms {
  double root = 0.0;
  double disp = 0.0;
  double line = 0.0;
  double total = 0.0;
};

/// Side of the square window around each root pixel that receives Gaussian
/// confidence and displacement targets.
inline constexpr int kRootWindow = 5;

/// Annotation segment mapped to an out_w x out_h grid (per-axis scaling).
LineSegment scale_to_output(const LineSegment& seg, const Annotation& ann, int out_w, int out_h);

/// Pixel that carries the root of a (scaled) segment.
Pixel root_pixel(const LineSegment& scaled, int out_w, int out_h);

ScalarMap build_root_map(const Annotation& ann, int out_w, int out_h, double sigma = 1.0);
DisplacementField build_disp_field(const Annotation& ann, int out_w, int out_h);
ScalarMap build_line_map(const Annotation& ann, int out_w, int out_h);
GtBundle build_gt_bundle(const Annotation& ann, int out_w, int out_h, double sigma = 1.0);

/// #negatives / #positives of a target map (positives are values > 0);
/// 1 when either class is absent.
double class_balance_weight(const ScalarMap& target);

/// Mean weighted binary cross-entropy; predictions are clamped into
/// [1e-6, 1 - 1e-6]. Positive targets (t > 0) carry `pos_weight`.
double weighted_bce(const ScalarMap& pred, const ScalarMap& target, double pos_weight);

/// Smooth-L1 averaged over the target's valid pixels and all four channels;
/// 0 when nothing is valid.
double masked_smooth_l1(const DisplacementField& pred, const DisplacementField& target);

double combine_losses(double root, double disp, double line, const LossWeights& w = {});

/// Weighted sum of the three supervision terms. Each BCE term uses the
/// class-balance weight of its own target unless one is given.
LossTerms total_loss(const GtBundle& pred, const GtBundle& gt, const LossWeights& w = {},
                     std::optional<double> pos_weight = std::nullopt);

}  // namespace lseval
