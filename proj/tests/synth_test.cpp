#include <gtest/gtest.h>

#include <cmath>

#include "lseval/evaluate.hpp"
#include "lseval/synth.hpp"

namespace lseval::synth {
namespace {

TEST(SplitMix64, KnownSequence) {
  SplitMix64 g(0);
  EXPECT_EQ(g.next(), 0xE220A8397B1DCDAFull);
  EXPECT_EQ(g.next(), 0x6E789E6AA1B965F4ull);
  SplitMix64 u(123);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
  EXPECT_NE(derive_seed(1, 0, 0), derive_seed(1, 0, 1));
  EXPECT_NE(derive_seed(1, 0, 1), derive_seed(1, 1, 0));
}

TEST(Scene, EmptyAndInvalid) {
  const Annotation a = generate_scene(0, 64, 64, 1, "z");
  EXPECT_TRUE(a.segments.empty());
  EXPECT_EQ(a.image_id, "z");
  EXPECT_THROW(generate_scene(-1, 64, 64, 1), Error);
  EXPECT_THROW(generate_scene(5, 0, 64, 1), Error);
  EXPECT_THROW(generate_scene(500, 16, 16, 1), Error);
}

TEST(Scene, DeterministicPerSeed) {
  EXPECT_EQ(generate_scene(30, 320, 240, 5).segments, generate_scene(30, 320, 240, 5).segments);
  EXPECT_NE(generate_scene(30, 320, 240, 5).segments, generate_scene(30, 320, 240, 6).segments);
}

TEST(Scene, Invariants) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Annotation a = generate_scene(50, 320, 320, seed);
    ASSERT_EQ(a.segments.size(), 50u);
    for (std::size_t i = 0; i < a.segments.size(); ++i) {
      const LineSegment& s = a.segments[i];
      EXPECT_GE(length(s), kMinSegmentLength);
      for (const Point2& p : {s.start(), s.end()}) {
        EXPECT_GE(p.x, 0.0);
        EXPECT_LE(p.x, 320.0);
        EXPECT_GE(p.y, 0.0);
        EXPECT_LE(p.y, 320.0);
      }
      for (std::size_t j = i + 1; j < a.segments.size(); ++j) {
        EXPECT_GE(norm(midpoint(s) - midpoint(a.segments[j])), kMinMidpointSeparation);
      }
    }
  }
}

TEST(Perturb, IdentityKeepsCoordinatesExactly) {
  const Annotation a = generate_scene(20, 200, 100, 3, "id");
  PerturbSpec spec;
  EXPECT_TRUE(spec.is_identity());
  const auto dets = perturb(a, spec);
  ASSERT_EQ(dets.size(), a.segments.size());
  for (std::size_t i = 0; i < dets.size(); ++i) {
    EXPECT_EQ(dets[i].image_id, "id");
    EXPECT_EQ(dets[i].segment, a.segments[i]);
  }
  const MetricReport r = evaluate(dets, {{"id", a}}, {});
  EXPECT_DOUBLE_EQ(r.fh, 1.0);
  for (const auto& ap : r.ap) EXPECT_DOUBLE_EQ(ap.ap_percent, 100.0) << ap.name;
}

TEST(Perturb, InvalidSpecsThrow) {
  const Annotation a = generate_scene(2, 64, 64, 1);
  PerturbSpec s;
  s.split_count = 0;
  EXPECT_THROW(perturb(a, s), Error);
  s = {};
  s.length_scale = 0;
  EXPECT_THROW(perturb(a, s), Error);
  s = {};
  s.confidence = 1.2;
  EXPECT_THROW(perturb(a, s), Error);
  s = {};
  s.rotate_deg = NAN;
  EXPECT_THROW(perturb(a, s), Error);
}

TEST(Perturb, HalfLengthGivesThreeQuarterScore) {
  const MetricConfig cfg;
  const Annotation a = generate_scene(20, 128, 128, 11);
  PerturbSpec spec;
  spec.length_scale = 0.5;
  const auto dets = perturb(a, spec);
  ASSERT_EQ(dets.size(), a.segments.size());
  for (std::size_t i = 0; i < dets.size(); ++i) {
    EXPECT_NEAR(lms(dets[i].segment, a.segments[i], 128, 128, cfg), 0.75, 1e-9);
  }
}

TEST(Perturb, SplitKeepsPixelsButFailsLineMatching) {
  AnnotationSet gts;
  std::vector<Detection> dets;
  PerturbSpec spec;
  spec.split_count = 3;
  for (int i = 0; i < 10; ++i) {
    const std::string id = "im" + std::to_string(i);
    const Annotation a = generate_scene(20, 256, 256, 40 + i, id);
    gts.emplace(id, a);
    const auto d = perturb(a, spec);
    EXPECT_EQ(d.size(), 3 * a.segments.size());
    dets.insert(dets.end(), d.begin(), d.end());
  }
  const MetricReport r = evaluate(dets, gts, {});
  EXPECT_GE(r.fh, 0.95);
  EXPECT_LE(r.find("LAP")->ap_percent, 50.0);
}

TEST(Perturb, LmsFallsMonotonicallyWithRotation) {
  const MetricConfig cfg;
  // Centered scene in a larger frame so rotated segments are never clipped.
  const Annotation small = generate_scene(15, 128, 128, 2);
  Annotation a{"r", 256, 256, {}};
  for (const auto& s : small.segments) {
    a.segments.push_back(canonicalize(s.start() + Vec2{64, 64}, s.end() + Vec2{64, 64}));
  }
  std::vector<double> previous(a.segments.size(), 1.0 + 1e-12);
  for (double deg = 0; deg <= 15.0; deg += 0.5) {
    PerturbSpec spec;
    spec.rotate_deg = deg;
    const auto dets = perturb(a, spec);
    ASSERT_EQ(dets.size(), a.segments.size());
    for (std::size_t i = 0; i < dets.size(); ++i) {
      const double v = lms(dets[i].segment, a.segments[i], 256, 256, cfg);
      EXPECT_LE(v, previous[i] + 1e-12) << "deg " << deg;
      previous[i] = v;
      if (deg > 10.0) EXPECT_EQ(v, 0.0);
    }
  }
}

TEST(Perturb, ClipToImage) {
  Point2 a{-10, 5}, b{10, 5};
  ASSERT_TRUE(clip_to_image(a, b, 20, 20));
  EXPECT_EQ(a, (Point2{0, 5}));
  EXPECT_EQ(b, (Point2{10, 5}));
  Point2 c{-10, -5}, d{-1, -8};
  EXPECT_FALSE(clip_to_image(c, d, 20, 20));
  Point2 e{1.1, 2.2}, f{3.3, 4.4};
  ASSERT_TRUE(clip_to_image(e, f, 20, 20));
  EXPECT_EQ(e, (Point2{1.1, 2.2}));
  EXPECT_EQ(f, (Point2{3.3, 4.4}));
}

TEST(Oracle, AgreesWithLmsOnRandomPairs) {
  const MetricConfig cfg;
  SplitMix64 rng(7);
  int nonzero = 0;
  for (int i = 0; i < 1000; ++i) {
    const int w = 100 + static_cast<int>(rng.uniform(0, 400));
    const int h = 100 + static_cast<int>(rng.uniform(0, 400));
    const Point2 ga{rng.uniform(0, w), rng.uniform(0, h)}, gb{rng.uniform(0, w), rng.uniform(0, h)};
    if (norm(ga - gb) < 1) continue;
    const double j = i % 3 == 0 ? 40 : 6;
    const Point2 pa = ga + Vec2{rng.uniform(-j, j), rng.uniform(-j, j)};
    const Point2 pb = gb + Vec2{rng.uniform(-j, j), rng.uniform(-j, j)};
    if (norm(pa - pb) < 1) continue;
    const LineSegment g = canonicalize(ga, gb), p = canonicalize(pa, pb);
    const double fast = lms(p, g, w, h, cfg);
    EXPECT_NEAR(fast, oracle_lms(p, g, w, h, cfg), 1e-6) << "pair " << i;
    nonzero += fast > 0;
  }
  EXPECT_GT(nonzero, 100);
}

}  // namespace
}  // namespace lseval::synth
