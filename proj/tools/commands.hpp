#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lseval::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kParseError = 2,
  kImageMismatch = 3,
  kDimensionMismatch = 4,
};

struct CommonOptions {
  int jobs = 0;  ///< 0: LSEVAL_JOBS, else the OpenMP default
  bool quiet = false;
};

struct EvalOptions {
  std::string gt_path;
  std::string pred_path;
  std::string out_dir = ".";
  std::string config_path;
  std::string metrics = "fh,sap,lap";
  std::vector<double> sap_thresholds;  ///< empty: keep config value
  bool svg = false;
};

struct DecodeOptions {
  std::string root_path;
  std::string line_path;  ///< optional
  std::string disp_path;
  std::string out_path;
  double alpha = 0.5;
  double threshold = 0.2;
  int nms_window = 3;
  int max_detections = 1000;
  std::string image_id;  ///< default: root file name up to ".root.lstn"
  int width = 0;         ///< with height: rescale map pixels to image pixels
  int height = 0;
};

struct GtmapsOptions {
  std::string gt_path;
  std::string out_dir = ".";
  int size = 0;  ///< square output side; 0 keeps each image's own size
  double sigma = 1.0;
};

struct SynthOptions {
  int n = 20;
  int width = 320;
  int height = 320;
  std::uint64_t seed = 0;
  int images = 1;
  std::string gt_out = "gt.jsonl";
  std::string pred_out = "pred.jsonl";
  double rotate_deg = 0.0;
  double length_scale = 1.0;
  std::vector<double> translate{0.0, 0.0};
  int split_count = 1;
  double confidence = 1.0;
  double endpoint_noise = 0.0;
  double confidence_spread = 0.0;
  int false_positives = 0;
};

int resolve_jobs(int requested);

int run_eval(const EvalOptions& opt, const CommonOptions& common);
int run_decode(const DecodeOptions& opt, const CommonOptions& common);
int run_gtmaps(const GtmapsOptions& opt, const CommonOptions& common);
int run_synth(const SynthOptions& opt, const CommonOptions& common);

/// Full command line entry point; returns the process exit code.
int main(int argc, char** argv);

}  // namespace lseval::cli
