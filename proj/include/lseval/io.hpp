#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lseval/evaluate.hpp"
#include "lseval/metrics.hpp"

namespace lseval::io {

// Line-delimited JSON records, one object per line; blank lines are ignored.
//   annotation: {"image_id": s, "width": n, "height": n, "segments": [[x1, y1, x2, y2], ...]}
//   detection:  {"image_id": s, "x1": v, "y1": v, "x2": v, "y2": v, "score": v}
// Parse failures throw ParseError naming the path and 1-based line.

AnnotationSet read_annotations(std::istream& is, const std::string& source);
AnnotationSet read_annotations(const std::string& path);
void write_annotations(std::ostream& os, const AnnotationSet& gts);
void write_annotations(const std::string& path, const AnnotationSet& gts);

std::vector<Detection> read_detections(std::istream& is, const std::string& source);
std::vector<Detection> read_detections(const std::string& path);
void write_detections(std::ostream& os, const std::vector<Detection>& dets);
void write_detections(const std::string& path, const std::vector<Detection>& dets);

/// JSON object with every MetricConfig field.
std::string config_to_json(const MetricConfig& cfg);
/// Fields present in the JSON object override `base`; unknown keys are an
/// error.
MetricConfig config_from_json(const std::string& text, const MetricConfig& base,
                              const std::string& source);
MetricConfig read_config(const std::string& path, const MetricConfig& base = {});

/// Self-describing report: config echo, counts, metric values, per-image
/// breakdown. Only selected metrics appear.
std::string report_to_json(const MetricReport& report);

/// metric,threshold,recall,precision rows for every computed curve.
std::string curves_to_csv(const MetricReport& report);

/// Precision-recall plot of every computed curve.
std::string curves_to_svg(const MetricReport& report);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

void write_text(const std::string& path, const std::string& text);

}  // namespace lseval::io
