#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lseval/geometry.hpp"
#include "lseval/gtmaps.hpp"
#include "lseval/metrics.hpp"

namespace lseval::synth {

/// SplitMix64 (Steele, Lea & Flood 2014): state += 0x9E3779B97F4A7C15, then
/// the 0xBF58476D1CE4E5B9 / 0x94D049BB133111EB finalizer. Portable and
/// fully specified, so generated scenes are reproducible across platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

/// Independent stream for (seed, a, b): each argument is absorbed by one
/// SplitMix64 step.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

inline constexpr double kMinSegmentLength = 10.0;
inline constexpr double kMinMidpointSeparation = 6.0;

/// Random scene with segments fully inside the image, each at least 10 px
/// long, midpoints pairwise at least 6 px apart. Segment i draws from
/// derive_seed(seed, i, attempt). Throws Error if the image cannot hold n
/// segments under those constraints.
Annotation generate_scene(int n_segments, int img_w, int img_h, std::uint64_t seed,
                          std::string image_id = "synth");

struct PerturbSpec {
  double rotate_deg = 0.0;  ///< about each segment's midpoint
  double length_scale = 1.0;
  Vec2 translate{0.0, 0.0};
  int split_count = 1;  ///< collinear contiguous pieces per segment
  double confidence = 1.0;
  std::uint64_t seed = 0;
  double endpoint_noise = 0.0;     ///< uniform +-noise px per endpoint coordinate
  double confidence_spread = 0.0;  ///< confidence minus uniform [0, spread)
  int false_positives = 0;         ///< extra random segments per image

  void validate() const;
  bool is_identity() const;
};

/// Detections derived from the annotation: every segment transformed as the
/// spec says, optionally split, clipped to the image. Pure in (ann, spec).
std::vector<Detection> perturb(const Annotation& ann, const PerturbSpec& spec);

/// Clips a segment to [0, w] x [0, h]; returns false if nothing of positive
/// length remains. Endpoints already inside are kept bit-for-bit.
bool clip_to_image(Point2& a, Point2& b, int img_w, int img_h);

/// Slow, separately derived line matching score used to cross-check the
/// metric implementation: explicit 3-D normals with acos, and the overlap
/// found by projecting 10,000 samples of the prediction onto the ground
/// truth, with bisection at the ends of the overlap.
double oracle_lms(const LineSegment& pred, const LineSegment& gt, int img_w, int img_h,
                  const MetricConfig& cfg);

}  // namespace lseval::synth
