#include "commands.hpp"

#include <omp.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "lseval/decode.hpp"
#include "lseval/evaluate.hpp"
#include "lseval/gtmaps.hpp"
#include "lseval/io.hpp"
#include "lseval/lstn.hpp"
#include "lseval/synth.hpp"

namespace lseval::cli {

namespace fs = std::filesystem;

namespace {

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParseError;
  } catch (const UnknownImage& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kImageMismatch;
  } catch (const DimensionMismatch& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDimensionMismatch;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}

void log(const CommonOptions& common, const std::string& msg) {
  if (!common.quiet) std::cerr << msg << '\n';
}

MetricSelection parse_metrics(const std::string& list) {
  MetricSelection sel{false, false, false};
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::transform(item.begin(), item.end(), item.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (item == "fh") sel.fh = true;
    else if (item == "sap") sel.sap = true;
    else if (item == "lap") sel.lap = true;
    else throw ParseError("--metrics", 0, "unknown metric '" + item + "' (expected fh, sap, lap)");
  }
  return sel;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create directory " + dir + ": " + ec.message());
}

std::string stem_before(const std::string& path, const std::string& suffix) {
  std::string name = fs::path(path).filename().string();
  if (name.size() > suffix.size() && name.ends_with(suffix)) {
    return name.substr(0, name.size() - suffix.size());
  }
  return fs::path(path).stem().string();
}

}  // namespace

int resolve_jobs(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("LSEVAL_JOBS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1, omp_get_max_threads());
}

int run_eval(const EvalOptions& opt, const CommonOptions& common) {
  return guarded([&] {
    MetricConfig cfg;
    if (!opt.config_path.empty()) cfg = io::read_config(opt.config_path, cfg);
    if (!opt.sap_thresholds.empty()) cfg.sap_thresholds = opt.sap_thresholds;
    cfg.validate();
    const MetricSelection sel = parse_metrics(opt.metrics);

    const AnnotationSet gts = io::read_annotations(opt.gt_path);
    const std::vector<Detection> dets = io::read_detections(opt.pred_path);
    const int jobs = resolve_jobs(common.jobs);
    log(common, "evaluating " + std::to_string(dets.size()) + " detections over " +
                    std::to_string(gts.size()) + " images");

    const MetricReport report = evaluate(dets, gts, cfg, sel, jobs);
    ensure_dir(opt.out_dir);
    io::write_text((fs::path(opt.out_dir) / "report.json").string(), io::report_to_json(report));
    io::write_text((fs::path(opt.out_dir) / "curves.csv").string(), io::curves_to_csv(report));
    if (opt.svg) {
      io::write_text((fs::path(opt.out_dir) / "curves.svg").string(), io::curves_to_svg(report));
    }
    if (!common.quiet) {
      if (sel.fh) std::cerr << "FH " << io::format_double(report.fh) << '\n';
      for (const auto& a : report.ap) std::cerr << a.name << ' ' << io::format_double(a.ap_percent) << '\n';
    }
    return kOk;
  });
}

int run_decode(const DecodeOptions& opt, const CommonOptions& common) {
  return guarded([&] {
    DecodeConfig cfg;
    cfg.alpha = opt.alpha;
    cfg.confidence_threshold = opt.threshold;
    cfg.nms_window = opt.nms_window;
    cfg.max_detections = opt.max_detections;
    cfg.validate();

    const ScalarMap root = lstn::to_map(lstn::read_file(opt.root_path), opt.root_path);
    const DisplacementField disp = lstn::to_field(lstn::read_file(opt.disp_path), opt.disp_path);
    DecodeResult result;
    if (opt.line_path.empty()) {
      result = decode(root, disp, cfg);
    } else {
      const ScalarMap line = lstn::to_map(lstn::read_file(opt.line_path), opt.line_path);
      result = decode(root, line, disp, cfg);
    }

    const std::string id =
        opt.image_id.empty() ? stem_before(opt.root_path, ".root.lstn") : opt.image_id;
    const bool rescale = opt.width > 0 && opt.height > 0;
    const double sx = rescale ? double(opt.width) / root.width() : 1.0;
    const double sy = rescale ? double(opt.height) / root.height() : 1.0;
    std::vector<Detection> dets;
    for (const auto& s : result.segments) {
      if (sx == 1.0 && sy == 1.0) {
        dets.push_back({id, s});
      } else {
        dets.push_back({id, LineSegment({s.start().x * sx, s.start().y * sy},
                                        {s.end().x * sx, s.end().y * sy}, s.confidence())});
      }
    }
    io::write_detections(opt.out_path, dets);
    log(common, "decoded " + std::to_string(dets.size()) + " segments (" +
                    std::to_string(result.skipped_invalid) + " peaks without displacement, " +
                    std::to_string(result.skipped_degenerate) + " degenerate)");
    return kOk;
  });
}

int run_gtmaps(const GtmapsOptions& opt, const CommonOptions& common) {
  return guarded([&] {
    if (opt.size < 0) throw Error("--size must be positive");
    const AnnotationSet gts = io::read_annotations(opt.gt_path);
    ensure_dir(opt.out_dir);
    std::vector<const Annotation*> anns;
    for (const auto& [id, ann] : gts) anns.push_back(&ann);

    std::vector<std::exception_ptr> errors(anns.size());
    const auto n = static_cast<std::ptrdiff_t>(anns.size());
#pragma omp parallel for schedule(dynamic) num_threads(resolve_jobs(common.jobs))
    for (std::ptrdiff_t k = 0; k < n; ++k) {
      try {
        const Annotation& ann = *anns[k];
        const int w = opt.size > 0 ? opt.size : ann.width;
        const int h = opt.size > 0 ? opt.size : ann.height;
        const GtBundle bundle = build_gt_bundle(ann, w, h, opt.sigma);
        const fs::path base = fs::path(opt.out_dir) / ann.image_id;
        lstn::write_file(base.string() + ".root.lstn", lstn::from_map(bundle.root));
        lstn::write_file(base.string() + ".line.lstn", lstn::from_map(bundle.line));
        lstn::write_file(base.string() + ".disp.lstn", lstn::from_field(bundle.disp));
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    log(common, "wrote ground-truth maps for " + std::to_string(anns.size()) + " images");
    return kOk;
  });
}

int run_synth(const SynthOptions& opt, const CommonOptions& common) {
  return guarded([&] {
    synth::PerturbSpec spec;
    spec.rotate_deg = opt.rotate_deg;
    spec.length_scale = opt.length_scale;
    if (opt.translate.size() != 2) throw ParseError("--translate", 0, "expected two values x,y");
    spec.translate = {opt.translate[0], opt.translate[1]};
    spec.split_count = opt.split_count;
    spec.confidence = opt.confidence;
    spec.endpoint_noise = opt.endpoint_noise;
    spec.confidence_spread = opt.confidence_spread;
    spec.false_positives = opt.false_positives;
    try {
      spec.validate();
      if (opt.n < 0 || opt.images < 0) throw Error("--n and --images must be non-negative");
    } catch (const Error& e) {
      throw ParseError("perturbation spec", 0, e.what());
    }

    const int digits = std::max<int>(4, static_cast<int>(std::to_string(opt.images).size()));
    AnnotationSet gts;
    std::vector<Detection> dets;
    for (int i = 0; i < opt.images; ++i) {
      std::string id = std::to_string(i);
      id = "img_" + std::string(static_cast<std::size_t>(digits) - id.size(), '0') + id;
      const auto index = static_cast<std::uint64_t>(i);
      Annotation ann = synth::generate_scene(opt.n, opt.width, opt.height,
                                             synth::derive_seed(opt.seed, index, 0), id);
      spec.seed = synth::derive_seed(opt.seed, index, 1);
      const auto image_dets = synth::perturb(ann, spec);
      dets.insert(dets.end(), image_dets.begin(), image_dets.end());
      gts.emplace(id, std::move(ann));
    }
    io::write_annotations(opt.gt_out, gts);
    io::write_detections(opt.pred_out, dets);
    log(common, "wrote " + std::to_string(gts.size()) + " images, " + std::to_string(dets.size()) +
                    " detections");
    return kOk;
  });
}

int main(int argc, char** argv) {
  CLI::App app{"Line segment tri-point decoding and evaluation"};
  app.require_subcommand(1);
  CommonOptions common;
  app.add_option("--jobs,-j", common.jobs, "Worker threads (default: LSEVAL_JOBS, then all cores)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--quiet,-q", common.quiet, "Suppress progress messages");

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Score detections against ground truth");
  eval_cmd->add_option("gt", eval.gt_path, "Annotation file (JSON lines)")->required();
  eval_cmd->add_option("pred", eval.pred_path, "Detection file (JSON lines)")->required();
  eval_cmd->add_option("--out-dir,-o", eval.out_dir, "Directory for report.json and curves.csv");
  eval_cmd->add_option("--config", eval.config_path, "JSON file overriding metric constants");
  eval_cmd->add_option("--metrics", eval.metrics, "Comma list of fh, sap, lap");
  eval_cmd->add_option("--sap-thresholds", eval.sap_thresholds, "SSE thresholds for sAP")
      ->delimiter(',');
  eval_cmd->add_flag("--svg", eval.svg, "Also write curves.svg");

  DecodeOptions dec;
  auto* dec_cmd = app.add_subcommand("decode", "Decode LSTN maps into segments");
  dec_cmd->add_option("--root", dec.root_path, "Root-point confidence tensor")->required();
  dec_cmd->add_option("--line", dec.line_path, "Line map tensor (omit to skip the point filter)");
  dec_cmd->add_option("--disp", dec.disp_path, "Displacement tensor")->required();
  dec_cmd->add_option("--out", dec.out_path, "Detection file to write")->required();
  dec_cmd->add_option("--alpha", dec.alpha, "Line-map exponent");
  dec_cmd->add_option("--thresh", dec.threshold, "Minimum filtered root confidence");
  dec_cmd->add_option("--nms-window", dec.nms_window, "Odd NMS window side");
  dec_cmd->add_option("--max-detections", dec.max_detections);
  dec_cmd->add_option("--image-id", dec.image_id);
  dec_cmd->add_option("--width", dec.width, "Image width for rescaling map pixels");
  dec_cmd->add_option("--height", dec.height, "Image height for rescaling map pixels");

  GtmapsOptions gtm;
  auto* gtm_cmd = app.add_subcommand("gtmaps", "Build ground-truth LSTN maps per image");
  gtm_cmd->add_option("gt", gtm.gt_path, "Annotation file (JSON lines)")->required();
  gtm_cmd->add_option("--out-dir,-o", gtm.out_dir);
  gtm_cmd->add_option("--size", gtm.size, "Square output side (default: image size)");
  gtm_cmd->add_option("--sigma", gtm.sigma, "Root Gaussian sigma");

  SynthOptions syn;
  auto* syn_cmd = app.add_subcommand("synth", "Generate a synthetic scene and perturbed detections");
  syn_cmd->add_option("--n", syn.n, "Segments per image");
  syn_cmd->add_option("--width", syn.width);
  syn_cmd->add_option("--height", syn.height);
  syn_cmd->add_option("--seed", syn.seed);
  syn_cmd->add_option("--images", syn.images, "Number of images");
  syn_cmd->add_option("--gt-out", syn.gt_out);
  syn_cmd->add_option("--pred-out", syn.pred_out);
  syn_cmd->add_option("--rotate-deg", syn.rotate_deg);
  syn_cmd->add_option("--length-scale", syn.length_scale);
  syn_cmd->add_option("--translate", syn.translate, "x,y")->delimiter(',')->expected(2);
  syn_cmd->add_option("--split", syn.split_count, "Collinear pieces per segment");
  syn_cmd->add_option("--confidence", syn.confidence);
  syn_cmd->add_option("--noise", syn.endpoint_noise, "Endpoint noise (px)");
  syn_cmd->add_option("--confidence-spread", syn.confidence_spread);
  syn_cmd->add_option("--false-positives", syn.false_positives, "Random extra detections per image");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParseError;
  }

  if (*eval_cmd) return run_eval(eval, common);
  if (*dec_cmd) return run_decode(dec, common);
  if (*gtm_cmd) return run_gtmaps(gtm, common);
  return run_synth(syn, common);
}

}  // namespace lseval::cli
