#include "lseval/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lseval::synth {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = SplitMix64(seed).next();
  s = SplitMix64(s ^ a).next();
  return SplitMix64(s ^ b).next();
}

Annotation generate_scene(int n_segments, int img_w, int img_h, std::uint64_t seed,
                          std::string image_id) {
  if (n_segments < 0) throw Error("segment count must be non-negative");
  if (img_w <= 0 || img_h <= 0) throw Error("image dimensions must be positive");

  Annotation ann{std::move(image_id), img_w, img_h, {}};
  const double max_len = std::max(kMinSegmentLength, 0.5 * std::min(img_w, img_h));
  constexpr int kMaxAttempts = 10000;
  std::vector<Point2> mids;

  for (int i = 0; i < n_segments; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
      SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(i),
                                 static_cast<std::uint64_t>(attempt)));
      const Point2 m{rng.uniform(0.0, img_w), rng.uniform(0.0, img_h)};
      const double angle = rng.uniform(0.0, std::numbers::pi);
      const double half = 0.5 * rng.uniform(kMinSegmentLength, max_len);
      const Vec2 d{half * std::cos(angle), half * std::sin(angle)};
      const Point2 a = m + (-1.0 * d), b = m + d;
      const auto inside = [&](Point2 p) {
        return p.x >= 0 && p.x <= img_w && p.y >= 0 && p.y <= img_h;
      };
      if (!inside(a) || !inside(b)) continue;
      LineSegment seg(a, b);
      if (length(seg) < kMinSegmentLength) continue;
      const Point2 mid = midpoint(seg);
      const bool crowded = std::any_of(mids.begin(), mids.end(), [&](Point2 q) {
        return norm(mid - q) < kMinMidpointSeparation;
      });
      if (crowded) continue;
      mids.push_back(mid);
      ann.segments.push_back(seg);
      placed = true;
    }
    if (!placed) {
      throw Error("could not place segment " + std::to_string(i) + " in a " +
                  std::to_string(img_w) + "x" + std::to_string(img_h) + " image");
    }
  }
  return ann;
}

void PerturbSpec::validate() const {
  if (!std::isfinite(rotate_deg) || !is_finite(translate)) {
    throw Error("perturbation values must be finite");
  }
  if (!(length_scale > 0 && std::isfinite(length_scale))) throw Error("length_scale must be positive");
  if (split_count < 1) throw Error("split_count must be >= 1");
  if (!(confidence >= 0 && confidence <= 1)) throw Error("confidence must lie in [0, 1]");
  if (!(endpoint_noise >= 0 && std::isfinite(endpoint_noise))) throw Error("endpoint_noise must be >= 0");
  if (!(confidence_spread >= 0 && confidence_spread <= 1)) {
    throw Error("confidence_spread must lie in [0, 1]");
  }
  if (false_positives < 0) throw Error("false_positives must be >= 0");
}

bool PerturbSpec::is_identity() const {
  return rotate_deg == 0 && length_scale == 1 && translate == Vec2{0, 0} && split_count == 1 &&
         endpoint_noise == 0;
}

bool clip_to_image(Point2& a, Point2& b, int img_w, int img_h) {
  // Liang-Barsky against [0, w] x [0, h].
  const Vec2 d = b - a;
  double t0 = 0.0, t1 = 1.0;
  const double p[4] = {-d.x, d.x, -d.y, d.y};
  const double q[4] = {a.x, img_w - a.x, a.y, img_h - a.y};
  for (int k = 0; k < 4; ++k) {
    if (p[k] == 0.0) {
      if (q[k] < 0.0) return false;
      continue;
    }
    const double r = q[k] / p[k];
    if (p[k] < 0.0) {
      t0 = std::max(t0, r);
    } else {
      t1 = std::min(t1, r);
    }
  }
  if (t0 >= t1) return false;
  const Point2 a0 = a;
  if (t0 > 0.0) a = a0 + t0 * d;
  if (t1 < 1.0) b = a0 + t1 * d;
  return !(a == b);
}

std::vector<Detection> perturb(const Annotation& ann, const PerturbSpec& spec) {
  spec.validate();
  std::vector<Detection> out;
  const double rad = spec.rotate_deg * std::numbers::pi / 180.0;
  const double c = std::cos(rad), s = std::sin(rad);

  auto emit = [&](Point2 a, Point2 b, double confidence) {
    if (clip_to_image(a, b, ann.width, ann.height)) {
      out.push_back({ann.image_id, LineSegment(a, b, confidence)});
    }
  };

  for (std::size_t i = 0; i < ann.segments.size(); ++i) {
    const LineSegment& seg = ann.segments[i];
    SplitMix64 rng(derive_seed(spec.seed, i));
    const double confidence =
        std::clamp(spec.confidence - spec.confidence_spread * rng.uniform(), 0.0, 1.0);
    Point2 a = seg.start(), b = seg.end();
    if (!spec.is_identity()) {
      const Point2 m = midpoint(seg);
      const auto transform = [&](Point2 p) {
        Vec2 v = p - m;
        if (spec.rotate_deg != 0) v = {c * v.x - s * v.y, s * v.x + c * v.y};
        return m + spec.length_scale * v + spec.translate;
      };
      a = transform(a);
      b = transform(b);
      if (spec.endpoint_noise > 0) {
        const double n = spec.endpoint_noise;
        a = a + Vec2{rng.uniform(-n, n), rng.uniform(-n, n)};
        b = b + Vec2{rng.uniform(-n, n), rng.uniform(-n, n)};
      }
    }
    if (a == b) continue;
    if (spec.split_count == 1) {
      emit(a, b, confidence);
      continue;
    }
    const Vec2 d = b - a;
    Point2 prev = a;
    for (int k = 1; k <= spec.split_count; ++k) {
      const Point2 next = k == spec.split_count ? b : a + (double(k) / spec.split_count) * d;
      if (!(prev == next)) emit(prev, next, confidence);
      prev = next;
    }
  }

  if (spec.false_positives > 0) {
    SplitMix64 rng(derive_seed(spec.seed, ann.segments.size(), 0xF00D));
    for (int k = 0; k < spec.false_positives; ++k) {
      const Point2 a{rng.uniform(0.0, ann.width), rng.uniform(0.0, ann.height)};
      const Point2 b{rng.uniform(0.0, ann.width), rng.uniform(0.0, ann.height)};
      const double confidence = rng.uniform();
      if (!(a == b)) emit(a, b, confidence);
    }
  }
  return out;
}

}  // namespace lseval::synth
