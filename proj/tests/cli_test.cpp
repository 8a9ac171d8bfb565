#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lseval/io.hpp"
#include "lseval/lstn.hpp"

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("lseval_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(const std::string& args) const {
    const std::string cmd = std::string(LSEVAL_BINARY) + " -q " + args + " 2>" + path("stderr.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  static std::string slurp(const std::string& p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
  }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
  }

  fs::path dir_;
};

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("eval"), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("eval " + path("missing.jsonl") + " " + path("missing2.jsonl")), 2);
}

TEST_F(Cli, MalformedInputExitsTwo) {
  write("gt.jsonl", R"({"image_id":"a","width":10,"height":10,"segments":[[0,0,5,5]]})" "\n");
  write("pred.jsonl", "{oops\n");
  EXPECT_EQ(run("eval " + path("gt.jsonl") + " " + path("pred.jsonl") + " -o " + path("out")), 2);
  EXPECT_NE(slurp(path("stderr.txt")).find("pred.jsonl:1"), std::string::npos)
      << slurp(path("stderr.txt"));
}

TEST_F(Cli, UnknownImageExitsThree) {
  write("gt.jsonl", R"({"image_id":"a","width":10,"height":10,"segments":[[0,0,5,5]]})" "\n");
  write("pred.jsonl", R"({"image_id":"b","x1":0,"y1":0,"x2":5,"y2":5,"score":0.5})" "\n");
  EXPECT_EQ(run("eval " + path("gt.jsonl") + " " + path("pred.jsonl") + " -o " + path("out")), 3);
}

TEST_F(Cli, InvalidSynthSpecExitsTwo) {
  const std::string outs = " --gt-out " + path("g.jsonl") + " --pred-out " + path("p.jsonl");
  EXPECT_EQ(run("synth --split 0" + outs), 2);
  EXPECT_EQ(run("synth --length-scale -1" + outs), 2);
  EXPECT_EQ(run("synth --confidence 2" + outs), 2);
  EXPECT_EQ(run("synth --n 3 --images 2" + outs), 0);
}

TEST_F(Cli, SynthEvalPerfectScores) {
  ASSERT_EQ(run("synth --n 15 --images 3 --seed 4 --gt-out " + path("g.jsonl") + " --pred-out " +
                path("p.jsonl")),
            0);
  ASSERT_EQ(run("eval " + path("g.jsonl") + " " + path("p.jsonl") + " -o " + path("out") + " --svg"), 0);
  const auto report = nlohmann::json::parse(slurp(path("out/report.json")));
  EXPECT_EQ(report["counts"]["images"], 3);
  EXPECT_EQ(report["counts"]["ground_truth"], 45);
  EXPECT_EQ(report["metrics"]["FH"], 1.0);
  EXPECT_EQ(report["metrics"]["sAP5"], 100.0);
  EXPECT_EQ(report["metrics"]["LAP"], 100.0);
  EXPECT_TRUE(fs::exists(path("out/curves.csv")));
  EXPECT_TRUE(fs::exists(path("out/curves.svg")));
}

TEST_F(Cli, MetricSelectionAndSapThresholds) {
  ASSERT_EQ(run("synth --n 10 --noise 1 --gt-out " + path("g.jsonl") + " --pred-out " + path("p.jsonl")), 0);
  ASSERT_EQ(run("eval " + path("g.jsonl") + " " + path("p.jsonl") + " -o " + path("out") +
                " --metrics lap,sap --sap-thresholds 5,10"),
            0);
  const auto m = nlohmann::json::parse(slurp(path("out/report.json")))["metrics"];
  EXPECT_TRUE(m.contains("sAP5"));
  EXPECT_TRUE(m.contains("sAP10"));
  EXPECT_FALSE(m.contains("sAP15"));
  EXPECT_TRUE(m.contains("LAP"));
  EXPECT_FALSE(m.contains("FH"));
  EXPECT_EQ(run("eval " + path("g.jsonl") + " " + path("p.jsonl") + " -o " + path("out") +
                " --metrics lap,bogus"),
            2);
}

TEST_F(Cli, GtmapsDecodeRoundTrip) {
  ASSERT_EQ(run("synth --n 12 --width 200 --height 150 --images 2 --gt-out " + path("g.jsonl") +
                " --pred-out " + path("p.jsonl")),
            0);
  ASSERT_EQ(run("gtmaps " + path("g.jsonl") + " -o " + path("maps")), 0);
  const auto gts = lseval::io::read_annotations(path("g.jsonl"));
  for (const auto& [id, ann] : gts) {
    const std::string base = path("maps/" + id);
    const auto root = lseval::lstn::read_file(base + ".root.lstn");
    EXPECT_EQ(root.dims, (std::vector<std::uint32_t>{150, 200}));
    EXPECT_EQ(lseval::lstn::read_file(base + ".disp.lstn").dims,
              (std::vector<std::uint32_t>{5, 150, 200}));
    ASSERT_EQ(run("decode --root " + base + ".root.lstn --line " + base + ".line.lstn --disp " + base +
                  ".disp.lstn --out " + path(id + ".det.jsonl")),
              0);
    const auto dets = lseval::io::read_detections(path(id + ".det.jsonl"));
    ASSERT_EQ(dets.size(), ann.segments.size());
    for (const auto& d : dets) EXPECT_EQ(d.image_id, id);
  }
}

TEST_F(Cli, DecodeThresholdAboveOneIsEmpty) {
  ASSERT_EQ(run("synth --n 5 --width 64 --height 64 --gt-out " + path("g.jsonl") + " --pred-out " +
                path("p.jsonl")),
            0);
  ASSERT_EQ(run("gtmaps " + path("g.jsonl") + " -o " + path("maps")), 0);
  const std::string base = path("maps/img_0000");
  ASSERT_EQ(run("decode --root " + base + ".root.lstn --disp " + base + ".disp.lstn --thresh 1.1 --out " +
                path("d.jsonl")),
            0);
  EXPECT_TRUE(fs::exists(path("d.jsonl")));
  EXPECT_EQ(slurp(path("d.jsonl")), "");
}

TEST_F(Cli, DecodeDimensionMismatchExitsFour) {
  lseval::lstn::write_file(path("a.root.lstn"), {{10, 10}, std::vector<float>(100, 0.0f)});
  lseval::lstn::write_file(path("a.disp.lstn"), {{5, 10, 12}, std::vector<float>(600, 0.0f)});
  EXPECT_EQ(run("decode --root " + path("a.root.lstn") + " --disp " + path("a.disp.lstn") + " --out " +
                path("d.jsonl")),
            4);
  write("bad.lstn", "not a tensor");
  EXPECT_EQ(run("decode --root " + path("bad.lstn") + " --disp " + path("a.disp.lstn") + " --out " +
                path("d.jsonl")),
            2);
}

TEST_F(Cli, GtmapsFixedSize) {
  ASSERT_EQ(run("synth --n 8 --gt-out " + path("g.jsonl") + " --pred-out " + path("p.jsonl")), 0);
  ASSERT_EQ(run("gtmaps " + path("g.jsonl") + " --size 160 -o " + path("maps")), 0);
  EXPECT_EQ(lseval::lstn::read_file(path("maps/img_0000.line.lstn")).dims,
            (std::vector<std::uint32_t>{160, 160}));
}

}  // namespace
