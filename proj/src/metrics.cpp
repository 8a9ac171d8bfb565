#include "lseval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lseval/raster.hpp"

namespace lseval {

namespace {

constexpr double kRatioSlack = 1e-9;

struct Vec3 {
  double x, y, z;
};

Vec3 cross3(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

double dot3(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

double norm3(const Vec3& a) { return std::sqrt(dot3(a, a)); }

Vec3 plane_normal(const LineSegment& s, Point2 center, double focal) {
  const Vec2 a = s.start() - center;
  const Vec2 b = s.end() - center;
  return cross3({a.x / focal, a.y / focal, 1.0}, {b.x / focal, b.y / focal, 1.0});
}

// Detection indices grouped by image, each group in global confidence order.
std::map<std::string, std::vector<std::size_t>> group_by_image(
    const std::vector<Detection>& dets, const std::vector<std::size_t>& order) {
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i : order) {
    groups[dets[i].image_id].push_back(i);
  }
  return groups;
}

std::vector<LineSegment> gt_in_eval(const Annotation& ann, const MetricConfig& cfg) {
  std::vector<LineSegment> out;
  out.reserve(ann.segments.size());
  for (const auto& s : ann.segments) {
    out.push_back(rescale_to_eval(s, ann.width, ann.height, cfg));
  }
  return out;
}

}  // namespace

std::vector<double> MetricConfig::default_fscore_thresholds() {
  std::vector<double> t;
  for (int k = 0; k < 20; ++k) {
    t.push_back(k / 20.0);
  }
  return t;
}

void MetricConfig::validate() const {
  if (eval_size <= 0) throw Error("eval_size must be positive");
  if (!(virtual_focal > 0)) throw Error("virtual_focal must be positive");
  if (!(eta_theta > 0)) throw Error("eta_theta must be positive");
  if (!(eta_l > 0 && eta_l <= 1)) throw Error("eta_l must lie in (0, 1]");
  if (!(lms_tp_threshold > 0 && lms_tp_threshold < 1)) {
    throw Error("lms_tp_threshold must lie in (0, 1)");
  }
  if (!(pixel_tolerance_ratio > 0)) throw Error("pixel_tolerance_ratio must be positive");
  for (double e : sap_thresholds) {
    if (!(e > 0)) throw Error("sAP thresholds must be positive");
  }
  for (double t : fscore_thresholds) {
    if (!std::isfinite(t)) throw Error("F-score thresholds must be finite");
  }
}

double MetricConfig::pixel_tolerance() const {
  return pixel_tolerance_ratio * std::hypot(double(eval_size), double(eval_size));
}

LineSegment rescale_to_eval(const LineSegment& seg, int img_w, int img_h, const MetricConfig& cfg) {
  if (img_w <= 0 || img_h <= 0) {
    throw Error("image dimensions must be positive");
  }
  if (img_w == cfg.eval_size && img_h == cfg.eval_size) {
    return seg;
  }
  const double sx = static_cast<double>(cfg.eval_size) / img_w;
  const double sy = static_cast<double>(cfg.eval_size) / img_h;
  return LineSegment({seg.start().x * sx, seg.start().y * sy}, {seg.end().x * sx, seg.end().y * sy},
                     seg.confidence());
}

double sse(const LineSegment& pred, const LineSegment& gt) {
  const auto sq = [](Vec2 v) { return dot(v, v); };
  const double direct = sq(pred.start() - gt.start()) + sq(pred.end() - gt.end());
  const double swapped = sq(pred.start() - gt.end()) + sq(pred.end() - gt.start());
  return std::min(direct, swapped);
}

double normal_angle_deg(const LineSegment& pred, const LineSegment& gt, const MetricConfig& cfg) {
  const Point2 center = midpoint(gt);
  const Vec3 n_gt = plane_normal(gt, center, cfg.virtual_focal);
  const Vec3 n_pred = plane_normal(pred, center, cfg.virtual_focal);
  // |cos| folds the sign ambiguity of plane normals.
  const double rad = std::atan2(norm3(cross3(n_gt, n_pred)), std::abs(dot3(n_gt, n_pred)));
  return rad * 180.0 / std::numbers::pi;
}

double score_theta(const LineSegment& pred, const LineSegment& gt, const MetricConfig& cfg) {
  const double theta = normal_angle_deg(pred, gt, cfg);
  return theta < cfg.eta_theta ? 1.0 - theta / cfg.eta_theta : 0.0;
}

OverlapRatios overlap_ratios(const LineSegment& pred, const LineSegment& gt) {
  const Vec2 u = direction(gt);
  const double gt_len = length(gt);
  const double t0 = dot(pred.start() - gt.start(), u);
  const double t1 = dot(pred.end() - gt.start(), u);
  const double overlap =
      std::max(0.0, std::min(std::max(t0, t1), gt_len) - std::max(std::min(t0, t1), 0.0));
  const double cos_alpha = std::abs(dot(direction(pred), u));
  const double projected = length(pred) * cos_alpha;

  OverlapRatios r;
  r.eta1 = std::min(1.0, overlap / gt_len);
  // Perpendicular pred: zero projection and zero overlap, ratio defined as 0.
  r.eta2 = projected > 0.0 ? std::min(1.0, overlap / projected) : 0.0;
  return r;
}

double score_l(const LineSegment& pred, const LineSegment& gt, const MetricConfig& cfg) {
  const OverlapRatios r = overlap_ratios(pred, gt);
  // Ratios of exactly eta_l pass; the slack absorbs rounding in the projection.
  const double cutoff = cfg.eta_l - kRatioSlack;
  if (r.eta1 >= cutoff && r.eta2 >= cutoff) {
    return 0.5 * (r.eta1 + r.eta2);
  }
  return 0.0;
}

double lms_eval(const LineSegment& pred, const LineSegment& gt, const MetricConfig& cfg) {
  const double st = score_theta(pred, gt, cfg);
  if (st == 0.0) {
    return 0.0;
  }
  return st * score_l(pred, gt, cfg);
}

double lms(const LineSegment& pred, const LineSegment& gt, int img_w, int img_h,
           const MetricConfig& cfg) {
  return lms_eval(rescale_to_eval(pred, img_w, img_h, cfg), rescale_to_eval(gt, img_w, img_h, cfg),
                  cfg);
}

MatchCriterion lms_criterion(const MetricConfig& cfg) {
  return {"lap", [cfg](const LineSegment& pred, const LineSegment& gt) -> std::optional<double> {
            const double s = lms_eval(pred, gt, cfg);
            if (s > cfg.lms_tp_threshold) {
              return s;
            }
            return std::nullopt;
          }};
}

MatchCriterion sap_criterion(double epsilon) {
  return {"sap", [epsilon](const LineSegment& pred, const LineSegment& gt) -> std::optional<double> {
            const double e = sse(pred, gt);
            if (e < epsilon) {
              return -e;
            }
            return std::nullopt;
          }};
}

void check_image_ids(const std::vector<Detection>& dets, const AnnotationSet& gts) {
  for (const auto& d : dets) {
    if (!gts.contains(d.image_id)) {
      throw UnknownImage("detection refers to unknown image '" + d.image_id + "'");
    }
  }
}

std::vector<std::size_t> confidence_order(const std::vector<Detection>& dets) {
  std::vector<std::size_t> order(dets.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ca = dets[a].segment.confidence(), cb = dets[b].segment.confidence();
    if (ca != cb) return ca > cb;
    if (dets[a].image_id != dets[b].image_id) return dets[a].image_id < dets[b].image_id;
    return a < b;
  });
  return order;
}

std::vector<std::uint8_t> match_detections(const std::vector<Detection>& dets,
                                           const AnnotationSet& gts,
                                           const MatchCriterion& criterion,
                                           const MetricConfig& cfg, int jobs) {
  check_image_ids(dets, gts);
  const auto groups = group_by_image(dets, confidence_order(dets));
  // Matching never crosses images, so each image runs independently; the
  // per-image order is the global order restricted to that image.
  std::vector<const std::pair<const std::string, std::vector<std::size_t>>*> work;
  for (const auto& g : groups) work.push_back(&g);

  std::vector<std::uint8_t> is_tp(dets.size(), 0);
  const auto n = static_cast<std::ptrdiff_t>(work.size());
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, jobs))
  for (std::ptrdiff_t w = 0; w < n; ++w) {
    const auto& [image_id, indices] = *work[w];
    const Annotation& ann = gts.at(image_id);
    const std::vector<LineSegment> gt = gt_in_eval(ann, cfg);
    std::vector<std::uint8_t> taken(gt.size(), 0);
    for (std::size_t di : indices) {
      const LineSegment pred = rescale_to_eval(dets[di].segment, ann.width, ann.height, cfg);
      std::optional<std::size_t> best;
      double best_quality = -std::numeric_limits<double>::infinity();
      for (std::size_t g = 0; g < gt.size(); ++g) {
        if (taken[g]) continue;
        const auto q = criterion.quality(pred, gt[g]);
        if (q && (!best || *q > best_quality)) {
          best = g;
          best_quality = *q;
        }
      }
      if (best) {
        taken[*best] = 1;
        is_tp[di] = 1;
      }
    }
  }
  return is_tp;
}

PRCurve pr_curve(const std::vector<Detection>& dets, const std::vector<std::uint8_t>& is_tp,
                 std::size_t n_gt) {
  PRCurve curve;
  if (dets.empty() || n_gt == 0) {
    return curve;
  }
  std::size_t tp = 0, seen = 0;
  for (std::size_t i : confidence_order(dets)) {
    ++seen;
    tp += is_tp[i];
    curve.points.push_back({static_cast<double>(tp) / static_cast<double>(n_gt),
                            static_cast<double>(tp) / static_cast<double>(seen),
                            dets[i].segment.confidence()});
  }
  double area = 0.0, prev_r = 0.0, prev_p = curve.points.front().precision;
  for (const auto& p : curve.points) {
    area += (p.recall - prev_r) * 0.5 * (p.precision + prev_p);
    prev_r = p.recall;
    prev_p = p.precision;
  }
  curve.ap = std::clamp(area, 0.0, 1.0);
  return curve;
}

PRCurve match_and_ap(const std::vector<Detection>& dets, const AnnotationSet& gts,
                     const MatchCriterion& criterion, const MetricConfig& cfg, int jobs) {
  std::size_t n_gt = 0;
  for (const auto& [id, ann] : gts) n_gt += ann.segments.size();
  return pr_curve(dets, match_detections(dets, gts, criterion, cfg, jobs), n_gt);
}

std::vector<PixelScore> pixel_fscore_sweep(const std::vector<Detection>& dets,
                                           const AnnotationSet& gts, const MetricConfig& cfg,
                                           int jobs) {
  check_image_ids(dets, gts);
  const std::vector<double>& thresholds = cfg.fscore_thresholds;
  const std::size_t nt = thresholds.size();
  const int size = cfg.eval_size;
  const double tol = cfg.pixel_tolerance();
  const double tol2 = tol * tol;

  std::map<std::string, std::vector<std::size_t>> by_image;
  for (std::size_t i = 0; i < dets.size(); ++i) by_image[dets[i].image_id].push_back(i);
  std::vector<const Annotation*> images;
  for (const auto& [id, ann] : gts) images.push_back(&ann);

  // Per image and threshold: matched predicted, predicted, matched gt pixels.
  struct Counts {
    std::size_t pred_tp = 0, pred = 0, gt_tp = 0;
  };
  std::vector<std::vector<Counts>> counts(images.size(), std::vector<Counts>(nt));
  std::vector<std::size_t> gt_pixels(images.size(), 0);

  const auto n = static_cast<std::ptrdiff_t>(images.size());
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, jobs))
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const Annotation& ann = *images[k];
    BinaryRaster gt_raster(size, size);
    for (const auto& s : gt_in_eval(ann, cfg)) draw_segment(gt_raster, s);
    gt_pixels[k] = gt_raster.count();
    const std::vector<double> gt_dist = squared_distance_transform(gt_raster);

    std::vector<LineSegment> preds;
    if (auto it = by_image.find(ann.image_id); it != by_image.end()) {
      for (std::size_t i : it->second) {
        preds.push_back(rescale_to_eval(dets[i].segment, ann.width, ann.height, cfg));
      }
    }
    for (std::size_t t = 0; t < nt; ++t) {
      BinaryRaster pred_raster(size, size);
      for (const auto& p : preds) {
        if (p.confidence() >= thresholds[t]) draw_segment(pred_raster, p);
      }
      Counts& c = counts[k][t];
      c.pred = pred_raster.count();
      if (c.pred == 0) continue;
      const std::vector<double> pred_dist = squared_distance_transform(pred_raster);
      for (std::size_t i = 0; i < pred_raster.cells.size(); ++i) {
        if (pred_raster.cells[i] && gt_dist[i] <= tol2) ++c.pred_tp;
        if (gt_raster.cells[i] && pred_dist[i] <= tol2) ++c.gt_tp;
      }
    }
  }

  std::size_t total_gt = 0;
  for (std::size_t g : gt_pixels) total_gt += g;
  std::vector<PixelScore> out(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    Counts sum;
    for (const auto& per_image : counts) {
      sum.pred_tp += per_image[t].pred_tp;
      sum.pred += per_image[t].pred;
      sum.gt_tp += per_image[t].gt_tp;
    }
    PixelScore& s = out[t];
    s.threshold = thresholds[t];
    s.predicted_pixels = sum.pred;
    s.gt_pixels = total_gt;
    s.no_predictions = sum.pred == 0;
    s.precision = sum.pred ? double(sum.pred_tp) / double(sum.pred) : 0.0;
    s.recall = total_gt ? double(sum.gt_tp) / double(total_gt) : 0.0;
    s.f = s.precision + s.recall > 0 ? 2 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
  }
  return out;
}

PixelScore pixel_fscore(const std::vector<Detection>& dets, const AnnotationSet& gts,
                        const MetricConfig& cfg, double score_threshold, int jobs) {
  MetricConfig single = cfg;
  single.fscore_thresholds = {score_threshold};
  return pixel_fscore_sweep(dets, gts, single, jobs).front();
}

}  // namespace lseval
