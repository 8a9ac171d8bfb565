#include "lseval/evaluate.hpp"

#include <algorithm>
#include <charconv>
#include <map>

namespace lseval {

namespace {

std::string short_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

const ApResult* MetricReport::find(const std::string& name) const {
  for (const auto& r : ap) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

MetricReport evaluate(const std::vector<Detection>& dets, const AnnotationSet& gts,
                      const MetricConfig& cfg, const MetricSelection& selection, int jobs) {
  cfg.validate();
  check_image_ids(dets, gts);

  MetricReport report;
  report.config = cfg;
  report.selection = selection;
  report.n_images = gts.size();
  report.n_det = dets.size();

  std::map<std::string, std::size_t> image_index;
  for (const auto& [id, ann] : gts) {
    image_index[id] = report.images.size();
    report.images.push_back({id, ann.segments.size(), 0, {}});
    report.n_gt += ann.segments.size();
  }
  for (const auto& d : dets) ++report.images[image_index.at(d.image_id)].n_det;

  if (selection.fh) {
    report.pixel_sweep = pixel_fscore_sweep(dets, gts, cfg, jobs);
    for (const auto& s : report.pixel_sweep) {
      if (s.f > report.fh) {
        report.fh = s.f;
        report.fh_threshold = s.threshold;
      }
    }
  }

  std::vector<std::pair<ApResult, MatchCriterion>> runs;
  if (selection.sap) {
    for (double eps : cfg.sap_thresholds) {
      ApResult r;
      r.name = "sAP" + short_number(eps);
      r.threshold = eps;
      runs.emplace_back(std::move(r), sap_criterion(eps));
    }
  }
  if (selection.lap) {
    ApResult r;
    r.name = "LAP";
    r.threshold = cfg.lms_tp_threshold;
    runs.emplace_back(std::move(r), lms_criterion(cfg));
  }

  for (auto& [result, criterion] : runs) {
    const std::vector<std::uint8_t> tp = match_detections(dets, gts, criterion, cfg, jobs);
    result.curve = pr_curve(dets, tp, report.n_gt);
    result.ap_percent = 100.0 * result.curve.ap;
    for (auto& img : report.images) img.true_positives.push_back(0);
    for (std::size_t i = 0; i < dets.size(); ++i) {
      if (tp[i]) {
        ++result.true_positives;
        ++report.images[image_index.at(dets[i].image_id)].true_positives.back();
      }
    }
    report.ap.push_back(std::move(result));
  }
  return report;
}

}  // namespace lseval
