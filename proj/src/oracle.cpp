// Reference LMS written without reusing any helper from metrics.cpp.

#include <array>
#include <cmath>

#include "lseval/synth.hpp"

namespace lseval::synth {

namespace {

using V3 = std::array<double, 3>;

constexpr int kSamples = 10000;
constexpr int kBisections = 80;
constexpr double kPi = 3.14159265358979323846;

V3 lift(double x, double y, double f) { return {x / f, y / f, 1.0}; }

V3 cross_product(const V3& a, const V3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double angle_between_deg(const V3& a, const V3& b) {
  const double ab = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  const double aa = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
  const double bb = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
  double c = std::fabs(ab) / (aa * bb);
  if (c > 1.0) c = 1.0;
  return std::acos(c) * 180.0 / kPi;
}

}  // namespace

double oracle_lms(const LineSegment& pred, const LineSegment& gt, int img_w, int img_h,
                  const MetricConfig& cfg) {
  const double sx = double(cfg.eval_size) / img_w;
  const double sy = double(cfg.eval_size) / img_h;
  const double px1 = pred.start().x * sx, py1 = pred.start().y * sy;
  const double px2 = pred.end().x * sx, py2 = pred.end().y * sy;
  const double gx1 = gt.start().x * sx, gy1 = gt.start().y * sy;
  const double gx2 = gt.end().x * sx, gy2 = gt.end().y * sy;

  // Angle score: planes through the optical center.
  const double mx = (gx1 + gx2) / 2.0, my = (gy1 + gy2) / 2.0;
  const double f = cfg.virtual_focal;
  const V3 n_gt = cross_product(lift(gx1 - mx, gy1 - my, f), lift(gx2 - mx, gy2 - my, f));
  const V3 n_pred = cross_product(lift(px1 - mx, py1 - my, f), lift(px2 - mx, py2 - my, f));
  const double theta = angle_between_deg(n_gt, n_pred);
  const double s_theta = theta < cfg.eta_theta ? 1.0 - theta / cfg.eta_theta : 0.0;

  // Length score: sample the prediction, project onto the gt line.
  const double gl = std::sqrt((gx2 - gx1) * (gx2 - gx1) + (gy2 - gy1) * (gy2 - gy1));
  const double ux = (gx2 - gx1) / gl, uy = (gy2 - gy1) / gl;
  const auto proj = [&](double s) {
    const double x = px1 + s * (px2 - px1), y = py1 + s * (py2 - py1);
    return (x - gx1) * ux + (y - gy1) * uy;
  };
  const auto inside = [&](double s) {
    const double t = proj(s);
    return t >= 0.0 && t <= gl;
  };
  int first = -1, last = -1;
  for (int j = 0; j < kSamples; ++j) {
    if (inside(double(j) / (kSamples - 1))) {
      if (first < 0) first = j;
      last = j;
    }
  }
  double overlap = 0.0;
  if (first >= 0) {
    // Bisect between the last outside and first inside sample at each end.
    const auto refine = [&](double out_s, double in_s) {
      for (int k = 0; k < kBisections; ++k) {
        const double mid = 0.5 * (out_s + in_s);
        (inside(mid) ? in_s : out_s) = mid;
      }
      return in_s;
    };
    const double s_lo =
        first == 0 ? 0.0 : refine(double(first - 1) / (kSamples - 1), double(first) / (kSamples - 1));
    const double s_hi = last == kSamples - 1
                            ? 1.0
                            : refine(double(last + 1) / (kSamples - 1), double(last) / (kSamples - 1));
    overlap = std::fabs(proj(s_hi) - proj(s_lo));
  }

  const double pl = std::sqrt((px2 - px1) * (px2 - px1) + (py2 - py1) * (py2 - py1));
  const double alpha = std::atan2(py2 - py1, px2 - px1) - std::atan2(gy2 - gy1, gx2 - gx1);
  const double denom = pl * std::fabs(std::cos(alpha));
  const double eta1 = overlap / gl;
  const double eta2 = denom > 1e-12 ? overlap / denom : 0.0;
  const double s_l = (eta1 >= cfg.eta_l && eta2 >= cfg.eta_l) ? (eta1 + eta2) / 2.0 : 0.0;

  return s_theta * s_l;
}

}  // namespace lseval::synth
