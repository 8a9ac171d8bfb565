#include <gtest/gtest.h>

#include <sstream>

#include "json.hpp"
#include "lseval/evaluate.hpp"
#include "lseval/io.hpp"
#include "lseval/synth.hpp"

namespace lseval::io {
namespace {

std::size_t parse_error_line(const std::string& text, bool detections) {
  std::istringstream is(text);
  try {
    if (detections) {
      read_detections(is, "mem.jsonl");
    } else {
      read_annotations(is, "mem.jsonl");
    }
  } catch (const ParseError& e) {
    EXPECT_EQ(e.path(), "mem.jsonl");
    return e.line();
  }
  ADD_FAILURE() << "no error for: " << text;
  return 0;
}

TEST(Io, AnnotationRoundTrip) {
  AnnotationSet gts;
  for (int i = 0; i < 4; ++i) {
    const std::string id = "a" + std::to_string(i);
    gts.emplace(id, synth::generate_scene(7, 300, 200, i, id));
  }
  gts.emplace("empty", Annotation{"empty", 10, 10, {}});
  std::stringstream ss;
  write_annotations(ss, gts);
  const AnnotationSet back = read_annotations(ss, "mem");
  ASSERT_EQ(back.size(), gts.size());
  for (const auto& [id, ann] : gts) {
    EXPECT_EQ(back.at(id).segments, ann.segments);
    EXPECT_EQ(back.at(id).width, ann.width);
  }
}

TEST(Io, DetectionRoundTrip) {
  synth::PerturbSpec spec;
  spec.endpoint_noise = 1.7;
  spec.confidence_spread = 0.8;
  const auto dets = synth::perturb(synth::generate_scene(20, 320, 320, 4, "x"), spec);
  std::stringstream ss;
  write_detections(ss, dets);
  const auto back = read_detections(ss, "mem");
  ASSERT_EQ(back.size(), dets.size());
  for (std::size_t i = 0; i < dets.size(); ++i) {
    EXPECT_EQ(back[i].image_id, dets[i].image_id);
    EXPECT_EQ(back[i].segment, dets[i].segment);
  }
}

TEST(Io, BlankLinesSkippedAndEndpointsCanonicalized) {
  std::istringstream is("\n{\"image_id\":\"a\",\"x1\":5,\"y1\":1,\"x2\":1,\"y2\":1,\"score\":0.5}\n\n");
  const auto dets = read_detections(is, "mem");
  ASSERT_EQ(dets.size(), 1u);
  EXPECT_EQ(dets[0].segment.start(), (Point2{1, 1}));
}

TEST(Io, AnnotationErrorsCarryLineNumbers) {
  const std::string ok = R"({"image_id":"a","width":10,"height":10,"segments":[[0,0,5,5]]})";
  EXPECT_EQ(parse_error_line(ok + "\n{not json}\n", false), 2u);
  EXPECT_EQ(parse_error_line(ok + "\n\n" + ok + "\n", false), 3u);  // duplicate id
  EXPECT_EQ(parse_error_line(R"({"image_id":"a","width":10,"segments":[]})", false), 1u);
  EXPECT_EQ(parse_error_line(R"({"image_id":"a","width":10,"height":10,"segments":[[0,0,0,0]]})", false), 1u);
  EXPECT_EQ(parse_error_line(R"({"image_id":"a","width":10,"height":10,"segments":[[0,0,50,5]]})", false), 1u);
  EXPECT_EQ(parse_error_line(R"({"image_id":"a","width":10,"height":10,"segments":[[0,0,"x",5]]})", false), 1u);
  EXPECT_EQ(parse_error_line(R"({"image_id":"","width":10,"height":10,"segments":[]})", false), 1u);
  EXPECT_EQ(parse_error_line(R"({"image_id":"a","width":-3,"height":10,"segments":[]})", false), 1u);
}

TEST(Io, DetectionErrors) {
  const std::string ok = R"({"image_id":"a","x1":0,"y1":0,"x2":5,"y2":5,"score":0.5})";
  EXPECT_EQ(parse_error_line(ok + "\n" + R"({"image_id":"a","x1":0,"y1":0,"x2":5,"y2":5,"score":1.5})", true), 2u);
  EXPECT_EQ(parse_error_line(ok + "\n" + ok + "\n" + R"({"image_id":"a","x1":0,"y1":0,"x2":5,"y2":5})", true), 3u);
  EXPECT_EQ(parse_error_line(R"({"image_id":"a","x1":NaN,"y1":0,"x2":5,"y2":5,"score":0.5})", true), 1u);
  EXPECT_EQ(parse_error_line(R"({"image_id":"a","x1":1e999,"y1":0,"x2":5,"y2":5,"score":0.5})", true), 1u);
  EXPECT_EQ(parse_error_line(R"({"image_id":"a","x1":1,"y1":1,"x2":1,"y2":1,"score":0.5})", true), 1u);
  EXPECT_EQ(parse_error_line("[1,2,3]", true), 1u);
}

TEST(Io, MissingFileIsParseError) {
  EXPECT_THROW(read_annotations("/nonexistent/gt.jsonl"), ParseError);
  EXPECT_THROW(read_detections("/nonexistent/pred.jsonl"), ParseError);
}

TEST(Io, ConfigOverridesAndRejectsUnknownKeys) {
  const MetricConfig c = config_from_json(R"({"eta_theta": 5, "sap_thresholds": [10]})", {}, "cfg");
  EXPECT_EQ(c.eta_theta, 5.0);
  EXPECT_EQ(c.sap_thresholds, std::vector<double>{10});
  EXPECT_EQ(c.eta_l, 0.5);
  EXPECT_THROW(config_from_json(R"({"eta_thta": 5})", {}, "cfg"), ParseError);
  EXPECT_THROW(config_from_json(R"({"eta_l": "half"})", {}, "cfg"), ParseError);
  EXPECT_THROW(config_from_json(R"({"eta_l": 3})", {}, "cfg"), ParseError);
  EXPECT_THROW(config_from_json("[1]", {}, "cfg"), ParseError);

  const MetricConfig round = config_from_json(config_to_json(c), {}, "cfg");
  EXPECT_EQ(round.eta_theta, c.eta_theta);
  EXPECT_EQ(round.fscore_thresholds, c.fscore_thresholds);
}

TEST(Io, FormatDoubleShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(100.0), "100");
  for (double v : {1.0 / 3, 1e-300, 123456.789, 0.95}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}

TEST(Io, ReportEchoesConfigAndSelectedMetrics) {
  const Annotation a = synth::generate_scene(5, 128, 128, 1, "r");
  std::vector<Detection> dets;
  for (const auto& s : a.segments) dets.push_back({"r", s});
  MetricSelection sel;
  sel.fh = false;
  const MetricReport rep = evaluate(dets, {{"r", a}}, {}, sel);
  const auto j = nlohmann::json::parse(report_to_json(rep));
  EXPECT_EQ(j["config"]["eval_size"], 128);
  EXPECT_EQ(j["config"]["virtual_focal"], 24.0);
  EXPECT_EQ(j["config"]["eta_theta"], 10.0);
  EXPECT_EQ(j["config"]["eta_l"], 0.5);
  EXPECT_EQ(j["config"]["lms_tp_threshold"], 0.5);
  EXPECT_EQ(j["counts"]["images"], 1);
  EXPECT_FALSE(j["metrics"].contains("FH"));
  EXPECT_EQ(j["metrics"]["sAP10"], 100.0);
  EXPECT_EQ(j["metrics"]["LAP"], 100.0);

  const std::string csv = curves_to_csv(rep);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "metric,threshold,recall,precision");
  EXPECT_NE(csv.find("LAP,"), std::string::npos);
  EXPECT_NE(curves_to_svg(rep).find("<svg"), std::string::npos);
}

}  // namespace
}  // namespace lseval::io
