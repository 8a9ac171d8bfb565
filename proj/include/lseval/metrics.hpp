#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lseval/geometry.hpp"
#include "lseval/gtmaps.hpp"

namespace lseval {

/// Evaluation constants. By default segments are rescaled to a 128x128 frame,
/// LMS uses a virtual focal length of 24 with angle/length thresholds of 10
/// degrees and 0.5, sAP uses SSE thresholds 5/10/15, and a pixel matches
/// within 1% of the frame diagonal.
struct MetricConfig {
  int eval_size = 128;
  double virtual_focal = 24.0;
  double eta_theta = 10.0;  ///< degrees
  double eta_l = 0.5;
  std::vector<double> sap_thresholds{5.0, 10.0, 15.0};
  double lms_tp_threshold = 0.5;
  double pixel_tolerance_ratio = 0.01;
  /// Confidence cutoffs swept for the pixel F-score.
  std::vector<double> fscore_thresholds = default_fscore_thresholds();

  static std::vector<double> default_fscore_thresholds();

  /// Throws Error if a field is out of range.
  void validate() const;

  /// Pixel tolerance in eval-frame pixels.
  double pixel_tolerance() const;
};

struct Detection {
  std::string image_id;
  LineSegment segment;
};

/// Annotations keyed (and therefore ordered) by image id.
using AnnotationSet = std::map<std::string, Annotation>;

struct PRPoint {
  double recall = 0.0;
  double precision = 0.0;
  double threshold = 0.0;
};

struct PRCurve {
  std::vector<PRPoint> points;
  double ap = 0.0;  ///< fraction in [0, 1]
};

LineSegment rescale_to_eval(const LineSegment& seg, int img_w, int img_h, const MetricConfig& cfg);

/// Endpoint sum of squared errors, minimized over the two endpoint pairings.
double sse(const LineSegment& pred, const LineSegment& gt);

/// Angle in degrees, folded into [0, 90], between the normals of the planes
/// spanned by the optical center and each segment after centering both on
/// the ground-truth midpoint and lifting onto the normalized image plane.
double normal_angle_deg(const LineSegment& pred, const LineSegment& gt, const MetricConfig& cfg);

double score_theta(const LineSegment& pred, const LineSegment& gt, const MetricConfig& cfg);

/// Overlap ratios of `pred` projected onto `gt`.
struct OverlapRatios {
  double eta1 = 0.0;  ///< overlap / gt length
  double eta2 = 0.0;  ///< overlap / projected pred length
};
OverlapRatios overlap_ratios(const LineSegment& pred, const LineSegment& gt);

double score_l(const LineSegment& pred, const LineSegment& gt, const MetricConfig& cfg);

/// Line matching score of two segments already in eval coordinates.
double lms_eval(const LineSegment& pred, const LineSegment& gt, const MetricConfig& cfg);

/// Line matching score of two segments in the coordinates of an
/// img_w x img_h image.
double lms(const LineSegment& pred, const LineSegment& gt, int img_w, int img_h,
           const MetricConfig& cfg);

/// True-positive predicate over eval-frame segments. `quality` returns
/// nullopt when the pair does not match and otherwise a score where larger is
/// better; a detection consumes the unmatched ground truth of best quality.
struct MatchCriterion {
  std::string name;
  std::function<std::optional<double>(const LineSegment& pred, const LineSegment& gt)> quality;
};

/// LMS above the configured cutoff; quality is the LMS.
MatchCriterion lms_criterion(const MetricConfig& cfg);
/// SSE strictly below `epsilon`; quality is -SSE.
MatchCriterion sap_criterion(double epsilon);

/// Validates image ids; throws UnknownImage on the first detection whose image
/// has no annotation.
void check_image_ids(const std::vector<Detection>& dets, const AnnotationSet& gts);

/// Greedy one-to-one matching in global confidence order (ties by image id,
/// then input index). Returns one flag per detection, in input order.
std::vector<std::uint8_t> match_detections(const std::vector<Detection>& dets,
                                           const AnnotationSet& gts,
                                           const MatchCriterion& criterion,
                                           const MetricConfig& cfg, int jobs = 1);

/// Global detection order used for matching and for the precision-recall
/// sweep.
std::vector<std::size_t> confidence_order(const std::vector<Detection>& dets);

/// Precision-recall sweep over detections in confidence order and the
/// trapezoidal area under it (the curve starts at recall 0 with the first
/// point's precision).
PRCurve pr_curve(const std::vector<Detection>& dets, const std::vector<std::uint8_t>& is_tp,
                 std::size_t n_gt);

PRCurve match_and_ap(const std::vector<Detection>& dets, const AnnotationSet& gts,
                     const MatchCriterion& criterion, const MetricConfig& cfg, int jobs = 1);

struct PixelScore {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f = 0.0;
  std::size_t predicted_pixels = 0;
  std::size_t gt_pixels = 0;
  bool no_predictions = false;  ///< precision reported as 0 by convention
};

/// Pixel precision/recall at one confidence cutoff (detections with
/// confidence >= threshold), counted over all images at eval resolution.
PixelScore pixel_fscore(const std::vector<Detection>& dets, const AnnotationSet& gts,
                        const MetricConfig& cfg, double score_threshold, int jobs = 1);

/// pixel_fscore at every threshold of cfg.fscore_thresholds, sharing the
/// ground-truth distance transforms.
std::vector<PixelScore> pixel_fscore_sweep(const std::vector<Detection>& dets,
                                           const AnnotationSet& gts, const MetricConfig& cfg,
                                           int jobs = 1);

}  // namespace lseval
