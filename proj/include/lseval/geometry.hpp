#pragma once

#include <cmath>
#include <iosfwd>

#include "lseval/error.hpp"

namespace lseval {

/// Image-plane point in continuous pixel coordinates (x right, y down).
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr bool operator==(const Point2&, const Point2&) = default;
};

/// Displacements share the point representation.
using Vec2 = Point2;

constexpr Point2 operator+(Point2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
constexpr Vec2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
constexpr Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

std::ostream& operator<<(std::ostream& os, Point2 p);

/// A vectorized segment whose endpoints are stored in canonical order: the
/// leftmost point first, or for vertical segments the upper (smaller y) one.
/// Instances are always valid; construction throws on zero length.
class LineSegment {
 public:
  /// Orders {a, b} canonically. Throws DegenerateSegment if a == b, and
  /// Error on non-finite input or a confidence outside [0, 1].
  LineSegment(Point2 a, Point2 b, double confidence = 1.0);

  Point2 start() const { return start_; }
  Point2 end() const { return end_; }
  double confidence() const { return confidence_; }

  LineSegment with_confidence(double confidence) const {
    return LineSegment(start_, end_, confidence);
  }

  friend bool operator==(const LineSegment&, const LineSegment&) = default;

 private:
  Point2 start_;
  Point2 end_;
  double confidence_;
};

std::ostream& operator<<(std::ostream& os, const LineSegment& s);

/// Root point plus displacements to the two endpoints.
struct TriPoint {
  Point2 root;
  Vec2 disp_start;
  Vec2 disp_end;
  double score = 1.0;
};

LineSegment canonicalize(Point2 a, Point2 b, double confidence = 1.0);

/// Endpoints are root + disp_start and root + disp_end, canonicalized; the
/// segment inherits the tri-point score as its confidence.
LineSegment tp_to_segment(const TriPoint& tp);

/// Midpoint becomes the root; displacements point to start and end.
TriPoint segment_to_tp(const LineSegment& seg);

double length(const LineSegment& seg);
Point2 midpoint(const LineSegment& seg);
Vec2 direction(const LineSegment& seg);

}  // namespace lseval
