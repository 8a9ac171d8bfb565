#include "lseval/gtmaps.hpp"

#include <algorithm>
#include <cmath>

namespace lseval {

namespace {

constexpr double kBceEps = 1e-6;
constexpr int kHalfWindow = kRootWindow / 2;

void check_output_size(int out_w, int out_h) {
  if (out_w <= 0 || out_h <= 0) {
    throw Error("output size must be positive");
  }
}

template <typename Fn>
void for_each_window_pixel(Pixel center, int out_w, int out_h, Fn&& fn) {
  for (int dr = -kHalfWindow; dr <= kHalfWindow; ++dr) {
    for (int dc = -kHalfWindow; dc <= kHalfWindow; ++dc) {
      const int c = center.col + dc, r = center.row + dr;
      if (c >= 0 && c < out_w && r >= 0 && r < out_h) {
        fn(c, r, dc, dr);
      }
    }
  }
}

}  // namespace

void Annotation::validate() const {
  if (width <= 0 || height <= 0) {
    throw Error("annotation '" + image_id + "' has non-positive size");
  }
  for (const auto& s : segments) {
    for (const Point2 p : {s.start(), s.end()}) {
      if (p.x < 0 || p.x > width || p.y < 0 || p.y > height) {
        throw Error("annotation '" + image_id + "' has an endpoint outside the image");
      }
    }
  }
}

LineSegment scale_to_output(const LineSegment& seg, const Annotation& ann, int out_w, int out_h) {
  const double sx = static_cast<double>(out_w) / ann.width;
  const double sy = static_cast<double>(out_h) / ann.height;
  if (sx == 1.0 && sy == 1.0) {
    return seg;
  }
  return LineSegment({seg.start().x * sx, seg.start().y * sy},
                     {seg.end().x * sx, seg.end().y * sy}, seg.confidence());
}

Pixel root_pixel(const LineSegment& scaled, int out_w, int out_h) {
  return nearest_pixel(midpoint(scaled), out_w, out_h);
}

ScalarMap build_root_map(const Annotation& ann, int out_w, int out_h, double sigma) {
  check_output_size(out_w, out_h);
  if (!(sigma > 0.0)) {
    throw Error("Gaussian sigma must be positive");
  }
  ScalarMap map(out_w, out_h);
  const double denom = 2.0 * sigma * sigma;
  for (const auto& seg : ann.segments) {
    const Pixel root = root_pixel(scale_to_output(seg, ann, out_w, out_h), out_w, out_h);
    for_each_window_pixel(root, out_w, out_h, [&](int c, int r, int dc, int dr) {
      const auto v = static_cast<float>(std::exp(-(dc * dc + dr * dr) / denom));
      map.at(c, r) = std::max(map.at(c, r), v);
    });
  }
  return map;
}

DisplacementField build_disp_field(const Annotation& ann, int out_w, int out_h) {
  check_output_size(out_w, out_h);
  DisplacementField field(out_w, out_h);
  for (const auto& seg : ann.segments) {
    const LineSegment s = scale_to_output(seg, ann, out_w, out_h);
    const Pixel root = root_pixel(s, out_w, out_h);
    // Later segments overwrite earlier ones where windows collide.
    for_each_window_pixel(root, out_w, out_h, [&](int c, int r, int, int) {
      const std::size_t i = field.index(c, r);
      field.dxs[i] = static_cast<float>(s.start().x - c);
      field.dys[i] = static_cast<float>(s.start().y - r);
      field.dxe[i] = static_cast<float>(s.end().x - c);
      field.dye[i] = static_cast<float>(s.end().y - r);
      field.valid[i] = 1;
    });
  }
  return field;
}

ScalarMap build_line_map(const Annotation& ann, int out_w, int out_h) {
  check_output_size(out_w, out_h);
  ScalarMap map(out_w, out_h);
  for (const auto& seg : ann.segments) {
    const LineSegment s = scale_to_output(seg, ann, out_w, out_h);
    const Pixel a = nearest_pixel(s.start(), out_w, out_h);
    const Pixel b = nearest_pixel(s.end(), out_w, out_h);
    const Pixel m = root_pixel(s, out_w, out_h);
    // Drawn through the root pixel so the filtered root confidence of every
    // annotated segment stays at 1.
    for (const auto& [from, to] : {std::pair{a, m}, std::pair{m, b}}) {
      for (const Pixel& p : bresenham(from, to)) {
        map.at(p.col, p.row) = 1.0f;
      }
    }
  }
  return map;
}

GtBundle build_gt_bundle(const Annotation& ann, int out_w, int out_h, double sigma) {
  return {build_root_map(ann, out_w, out_h, sigma), build_disp_field(ann, out_w, out_h),
          build_line_map(ann, out_w, out_h)};
}

double class_balance_weight(const ScalarMap& target) {
  const auto positives = static_cast<double>(
      std::count_if(target.values().begin(), target.values().end(), [](float t) { return t > 0; }));
  const double negatives = static_cast<double>(target.size()) - positives;
  if (positives == 0.0 || negatives == 0.0) {
    return 1.0;
  }
  return negatives / positives;
}

double weighted_bce(const ScalarMap& pred, const ScalarMap& target, double pos_weight) {
  require_same_dims(pred, target, "weighted_bce");
  if (pred.empty()) {
    return 0.0;
  }
  const auto& p = pred.values();
  const auto& t = target.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = std::clamp(static_cast<double>(p[i]), kBceEps, 1.0 - kBceEps);
    const double ti = t[i];
    const double w = ti > 0.0 ? pos_weight : 1.0;
    sum -= w * ti * std::log(pi) + (1.0 - ti) * std::log(1.0 - pi);
  }
  return sum / static_cast<double>(p.size());
}

double masked_smooth_l1(const DisplacementField& pred, const DisplacementField& target) {
  require_same_dims(pred, target, "masked_smooth_l1");
  const auto smooth = [](double d) {
    const double a = std::abs(d);
    return a < 1.0 ? 0.5 * d * d : a - 0.5;
  };
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < target.valid.size(); ++i) {
    if (!target.valid[i]) {
      continue;
    }
    sum += smooth(double(pred.dxs[i]) - target.dxs[i]) + smooth(double(pred.dys[i]) - target.dys[i]) +
           smooth(double(pred.dxe[i]) - target.dxe[i]) + smooth(double(pred.dye[i]) - target.dye[i]);
    ++count;
  }
  return count == 0 ? 0.0 : sum / (4.0 * static_cast<double>(count));
}

double combine_losses(double root, double disp, double line, const LossWeights& w) {
  return w.lambda_root * root + w.lambda_disp * disp + w.lambda_line * line;
}

LossTerms total_loss(const GtBundle& pred, const GtBundle& gt, const LossWeights& w,
                     std::optional<double> pos_weight) {
  if (w.lambda_root < 0 || w.lambda_disp < 0 || w.lambda_line < 0) {
    throw Error("loss weights must be non-negative");
  }
  LossTerms terms;
  terms.root = weighted_bce(pred.root, gt.root, pos_weight.value_or(class_balance_weight(gt.root)));
  terms.disp = masked_smooth_l1(pred.disp, gt.disp);
  terms.line = weighted_bce(pred.line, gt.line, pos_weight.value_or(class_balance_weight(gt.line)));
  terms.total = combine_losses(terms.root, terms.disp, terms.line, w);
  return terms;
}

}  // namespace lseval
