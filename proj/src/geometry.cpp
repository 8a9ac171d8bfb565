#include "lseval/geometry.hpp"

#include <ostream>
#include <sstream>

namespace lseval {

namespace {

bool precedes(Point2 a, Point2 b) {
  return a.x < b.x || (a.x == b.x && a.y < b.y);
}

}  // namespace

std::ostream& operator<<(std::ostream& os, Point2 p) {
  return os << '(' << p.x << ", " << p.y << ')';
}

std::ostream& operator<<(std::ostream& os, const LineSegment& s) {
  return os << s.start() << "-" << s.end() << " @" << s.confidence();
}

LineSegment::LineSegment(Point2 a, Point2 b, double confidence) {
  if (!is_finite(a) || !is_finite(b)) {
    throw Error("segment endpoint is not finite");
  }
  if (!(confidence >= 0.0 && confidence <= 1.0)) {
    throw Error("segment confidence " + std::to_string(confidence) + " outside [0, 1]");
  }
  if (a == b) {
    std::ostringstream msg;
    msg << "zero-length segment at " << a;
    throw DegenerateSegment(msg.str());
  }
  start_ = precedes(a, b) ? a : b;
  end_ = precedes(a, b) ? b : a;
  confidence_ = confidence;
}

LineSegment canonicalize(Point2 a, Point2 b, double confidence) {
  return LineSegment(a, b, confidence);
}

LineSegment tp_to_segment(const TriPoint& tp) {
  return LineSegment(tp.root + tp.disp_start, tp.root + tp.disp_end, tp.score);
}

TriPoint segment_to_tp(const LineSegment& seg) {
  const Point2 root = midpoint(seg);
  return {root, seg.start() - root, seg.end() - root, seg.confidence()};
}

double length(const LineSegment& seg) { return norm(seg.end() - seg.start()); }

Point2 midpoint(const LineSegment& seg) {
  return {0.5 * (seg.start().x + seg.end().x), 0.5 * (seg.start().y + seg.end().y)};
}

Vec2 direction(const LineSegment& seg) {
  const Vec2 d = seg.end() - seg.start();
  return (1.0 / norm(d)) * d;
}

}  // namespace lseval
