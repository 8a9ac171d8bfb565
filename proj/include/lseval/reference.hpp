#pragma once

// Straightforward single-threaded versions of the parallel kernels. They are
// slow on purpose and exist to pin the parallel code in tests and benchmarks.

#include <vector>

#include "lseval/decode.hpp"
#include "lseval/metrics.hpp"
#include "lseval/raster.hpp"

namespace lseval::reference {

std::vector<Peak> nms_peaks(const ScalarMap& map, int window, double threshold, int max_detections);

/// O(N^2) nearest-set-cell search.
std::vector<double> squared_distance_transform(const BinaryRaster& raster);

/// Largest number of one-to-one (detection, gt) pairs accepted by the
/// criterion, found by exhaustive search. Exponential; keep inputs tiny.
std::size_t max_true_positives(const std::vector<LineSegment>& dets,
                               const std::vector<LineSegment>& gts,
                               const MatchCriterion& criterion);

}  // namespace lseval::reference
