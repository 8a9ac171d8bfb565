#include "lseval/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace lseval::io {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParseError(path, 0, "cannot open file");
  return is;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  return os;
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

// Per-record field access with diagnostics tied to the record's line.
class Record {
 public:
  Record(const std::string& line, const std::string& source, std::size_t line_no)
      : source_(source), line_(line_no) {
    try {
      obj_ = json::parse(line);
    } catch (const json::exception& e) {
      fail(std::string("invalid JSON: ") + e.what());
    }
    if (!obj_.is_object()) fail("record is not a JSON object");
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(source_, line_, what); }

  const json& field(const char* key) const {
    const auto it = obj_.find(key);
    if (it == obj_.end()) fail(std::string("missing field '") + key + "'");
    return *it;
  }

  std::string string_field(const char* key) const {
    const json& v = field(key);
    if (!v.is_string() || v.get<std::string>().empty()) {
      fail(std::string("field '") + key + "' must be a non-empty string");
    }
    return v.get<std::string>();
  }

  int positive_int(const char* key) const {
    const json& v = field(key);
    if (!v.is_number_integer() || v.get<long long>() <= 0 || v.get<long long>() > (1 << 24)) {
      fail(std::string("field '") + key + "' must be a positive integer");
    }
    return static_cast<int>(v.get<long long>());
  }

  double number(const json& v, const std::string& what) const {
    if (!v.is_number()) fail(what + " must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(what + " is not finite");
    return d;
  }

  double number_field(const char* key) const { return number(field(key), std::string("field '") + key + "'"); }

  const json& obj() const { return obj_; }

 private:
  json obj_;
  const std::string& source_;
  std::size_t line_;
};

ordered_json config_json(const MetricConfig& cfg) {
  ordered_json j;
  j["eval_size"] = cfg.eval_size;
  j["virtual_focal"] = cfg.virtual_focal;
  j["eta_theta"] = cfg.eta_theta;
  j["eta_l"] = cfg.eta_l;
  j["sap_thresholds"] = cfg.sap_thresholds;
  j["lms_tp_threshold"] = cfg.lms_tp_threshold;
  j["pixel_tolerance_ratio"] = cfg.pixel_tolerance_ratio;
  j["fscore_thresholds"] = cfg.fscore_thresholds;
  return j;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

AnnotationSet read_annotations(std::istream& is, const std::string& source) {
  AnnotationSet out;
  std::string line;
  for (std::size_t n = 1; std::getline(is, line); ++n) {
    if (blank(line)) continue;
    const Record rec(line, source, n);
    Annotation ann;
    ann.image_id = rec.string_field("image_id");
    ann.width = rec.positive_int("width");
    ann.height = rec.positive_int("height");
    const json& segs = rec.field("segments");
    if (!segs.is_array()) rec.fail("field 'segments' must be an array");
    for (std::size_t k = 0; k < segs.size(); ++k) {
      const json& s = segs[k];
      const std::string what = "segment " + std::to_string(k);
      if (!s.is_array() || s.size() != 4) rec.fail(what + " must be [x1, y1, x2, y2]");
      const double x1 = rec.number(s[0], what), y1 = rec.number(s[1], what);
      const double x2 = rec.number(s[2], what), y2 = rec.number(s[3], what);
      try {
        ann.segments.emplace_back(Point2{x1, y1}, Point2{x2, y2});
      } catch (const Error& e) {
        rec.fail(what + ": " + e.what());
      }
    }
    try {
      ann.validate();
    } catch (const Error& e) {
      rec.fail(e.what());
    }
    const std::string id = ann.image_id;
    if (!out.emplace(id, std::move(ann)).second) rec.fail("duplicate image_id '" + id + "'");
  }
  return out;
}

AnnotationSet read_annotations(const std::string& path) {
  auto is = open_input(path);
  return read_annotations(is, path);
}

void write_annotations(std::ostream& os, const AnnotationSet& gts) {
  for (const auto& [id, ann] : gts) {
    ordered_json j;
    j["image_id"] = id;
    j["width"] = ann.width;
    j["height"] = ann.height;
    j["segments"] = json::array();
    for (const auto& s : ann.segments) {
      j["segments"].push_back({s.start().x, s.start().y, s.end().x, s.end().y});
    }
    os << j.dump() << '\n';
  }
}

void write_annotations(const std::string& path, const AnnotationSet& gts) {
  auto os = open_output(path);
  write_annotations(os, gts);
}

std::vector<Detection> read_detections(std::istream& is, const std::string& source) {
  std::vector<Detection> out;
  std::string line;
  for (std::size_t n = 1; std::getline(is, line); ++n) {
    if (blank(line)) continue;
    const Record rec(line, source, n);
    const std::string id = rec.string_field("image_id");
    const double x1 = rec.number_field("x1"), y1 = rec.number_field("y1");
    const double x2 = rec.number_field("x2"), y2 = rec.number_field("y2");
    const double score = rec.number_field("score");
    if (score < 0.0 || score > 1.0) rec.fail("score " + format_double(score) + " outside [0, 1]");
    try {
      out.push_back({id, LineSegment({x1, y1}, {x2, y2}, score)});
    } catch (const Error& e) {
      rec.fail(e.what());
    }
  }
  return out;
}

std::vector<Detection> read_detections(const std::string& path) {
  auto is = open_input(path);
  return read_detections(is, path);
}

void write_detections(std::ostream& os, const std::vector<Detection>& dets) {
  for (const auto& d : dets) {
    ordered_json j;
    j["image_id"] = d.image_id;
    j["x1"] = d.segment.start().x;
    j["y1"] = d.segment.start().y;
    j["x2"] = d.segment.end().x;
    j["y2"] = d.segment.end().y;
    j["score"] = d.segment.confidence();
    os << j.dump() << '\n';
  }
}

void write_detections(const std::string& path, const std::vector<Detection>& dets) {
  auto os = open_output(path);
  write_detections(os, dets);
}

std::string config_to_json(const MetricConfig& cfg) { return config_json(cfg).dump(2); }

MetricConfig config_from_json(const std::string& text, const MetricConfig& base,
                              const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(source, 0, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError(source, 0, "config must be a JSON object");
  MetricConfig cfg = base;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "eval_size") cfg.eval_size = value.get<int>();
      else if (key == "virtual_focal") cfg.virtual_focal = value.get<double>();
      else if (key == "eta_theta") cfg.eta_theta = value.get<double>();
      else if (key == "eta_l") cfg.eta_l = value.get<double>();
      else if (key == "sap_thresholds") cfg.sap_thresholds = value.get<std::vector<double>>();
      else if (key == "lms_tp_threshold") cfg.lms_tp_threshold = value.get<double>();
      else if (key == "pixel_tolerance_ratio") cfg.pixel_tolerance_ratio = value.get<double>();
      else if (key == "fscore_thresholds") cfg.fscore_thresholds = value.get<std::vector<double>>();
      else throw ParseError(source, 0, "unknown config key '" + key + "'");
    }
  } catch (const json::type_error& e) {
    throw ParseError(source, 0, std::string("bad config value: ") + e.what());
  }
  try {
    cfg.validate();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(source, 0, e.what());
  }
  return cfg;
}

MetricConfig read_config(const std::string& path, const MetricConfig& base) {
  auto is = open_input(path);
  std::stringstream ss;
  ss << is.rdbuf();
  return config_from_json(ss.str(), base, path);
}

std::string report_to_json(const MetricReport& r) {
  ordered_json j;
  j["config"] = config_json(r.config);
  j["counts"] = {{"images", r.n_images}, {"ground_truth", r.n_gt}, {"detections", r.n_det}};

  ordered_json metrics = ordered_json::object();
  if (r.selection.fh) {
    metrics["FH"] = r.fh;
    metrics["FH_threshold"] = r.fh_threshold;
  }
  for (const auto& a : r.ap) metrics[a.name] = a.ap_percent;
  j["metrics"] = metrics;

  ordered_json tps = ordered_json::object();
  for (const auto& a : r.ap) tps[a.name] = a.true_positives;
  j["true_positives"] = tps;

  ordered_json images = ordered_json::array();
  for (const auto& img : r.images) {
    ordered_json e;
    e["image_id"] = img.image_id;
    e["ground_truth"] = img.n_gt;
    e["detections"] = img.n_det;
    ordered_json per = ordered_json::object();
    for (std::size_t k = 0; k < r.ap.size(); ++k) per[r.ap[k].name] = img.true_positives[k];
    e["true_positives"] = per;
    images.push_back(std::move(e));
  }
  j["images"] = images;
  return j.dump(2) + "\n";
}

std::string curves_to_csv(const MetricReport& r) {
  std::string out = "metric,threshold,recall,precision\n";
  const auto row = [&](const std::string& name, double t, double rec, double prec) {
    out += name + "," + format_double(t) + "," + format_double(rec) + "," + format_double(prec) + "\n";
  };
  if (r.selection.fh) {
    for (const auto& s : r.pixel_sweep) row("FH", s.threshold, s.recall, s.precision);
  }
  for (const auto& a : r.ap) {
    for (const auto& p : a.curve.points) row(a.name, p.threshold, p.recall, p.precision);
  }
  return out;
}

std::string curves_to_svg(const MetricReport& r) {
  constexpr int kSize = 400, kMargin = 40;
  constexpr const char* kColors[] = {"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize + 2 * kMargin
      << "\" height=\"" << kSize + 2 * kMargin << "\">\n"
      << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kSize << "\" height=\""
      << kSize << "\" fill=\"none\" stroke=\"black\"/>\n"
      << "<text x=\"" << kMargin + kSize / 2 << "\" y=\"" << 2 * kMargin + kSize - 8
      << "\" text-anchor=\"middle\">recall</text>\n"
      << "<text x=\"12\" y=\"" << kMargin + kSize / 2 << "\" transform=\"rotate(-90 12 "
      << kMargin + kSize / 2 << ")\" text-anchor=\"middle\">precision</text>\n";

  std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> curves;
  if (r.selection.fh) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& s : r.pixel_sweep) pts.emplace_back(s.recall, s.precision);
    curves.emplace_back("FH", std::move(pts));
  }
  for (const auto& a : r.ap) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : a.curve.points) pts.emplace_back(p.recall, p.precision);
    curves.emplace_back(a.name, std::move(pts));
  }
  for (std::size_t k = 0; k < curves.size(); ++k) {
    const char* color = kColors[k % std::size(kColors)];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (const auto& [rec, prec] : curves[k].second) {
      svg << format_double(kMargin + rec * kSize) << ',' << format_double(kMargin + (1 - prec) * kSize)
          << ' ';
    }
    svg << "\"/>\n<text x=\"" << kMargin + kSize - 80 << "\" y=\"" << kMargin + 20 + 18 * k
        << "\" fill=\"" << color << "\">" << curves[k].first << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_text(const std::string& path, const std::string& text) {
  auto os = open_output(path);
  os << text;
  if (!os) throw Error("write failed: " + path);
}

}  // namespace lseval::io
