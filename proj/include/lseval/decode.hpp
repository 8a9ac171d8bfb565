#pragma once

#include <cstddef>
#include <vector>

#include "lseval/geometry.hpp"
#include "lseval/maps.hpp"

namespace lseval {

struct DecodeConfig {
  double alpha = 0.5;                 ///< line-map exponent of the point filter
  double confidence_threshold = 0.2;  ///< minimum filtered root confidence
  int nms_window = 3;                 ///< odd, >= 3
  int max_detections = 1000;

  /// Throws Error when a field is out of range.
  void validate() const;
};

struct Peak {
  Point2 position;  ///< integer pixel center
  double score = 0.0;
};

struct DecodeResult {
  std::vector<LineSegment> segments;
  std::size_t skipped_invalid = 0;     ///< peak on a pixel without displacement
  std::size_t skipped_degenerate = 0;  ///< both displacements equal
};

/// Root confidence refined by the line map: root * line^alpha per pixel.
ScalarMap point_filter(const ScalarMap& root_given_line, const ScalarMap& line, double alpha);

/// Local maxima over a window x window neighborhood that reach `threshold`,
/// sorted by score descending then (row, col). Among equal values inside one
/// window only the lexicographically first (row, col) survives, so no two
/// returned peaks lie within the window radius of each other.
std::vector<Peak> nms_peaks(const ScalarMap& map, int window, double threshold,
                            int max_detections);

/// Full inference path: point filter, NMS, then one tri-point per peak read
/// from the displacement field at the peak pixel.
DecodeResult decode(const ScalarMap& root_given_line, const ScalarMap& line,
                    const DisplacementField& disp, const DecodeConfig& cfg);

/// Same as above without a line map (equivalent to a line map of ones).
DecodeResult decode(const ScalarMap& root, const DisplacementField& disp,
                    const DecodeConfig& cfg);

}  // namespace lseval
