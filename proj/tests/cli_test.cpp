// Copyright 2026 The RLSP Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "rlsp/cell.hpp"
#include "rlsp/checkpoint.hpp"
#include "rlsp/color.hpp"
#include "rlsp/evaluation.hpp"
#include "rlsp/image_io.hpp"

namespace fs = std::filesystem;

namespace rlsp {
namespace {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun rlsp_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

const std::vector<std::string> kTiny = {"layers=2", "filters=4",    "scale=2",
                                        "unroll=3", "crop=4",       "batch=1",
                                        "kernel_size=7", "log_every=1", "val_every=5"};

std::vector<std::string> with(std::vector<std::string> args, const std::vector<std::string>& extra) {
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = fs::temp_directory_path() / "rlsp_cli_test";
    fs::remove_all(root_);
    fs::create_directories(root_);
    const CliRun r = rlsp_cli({"synth", "--out", (root_ / "data").string(), "--train", "2", "--val",
                            "1", "--frames", "6", "--height", "16", "--width", "16"});
    ASSERT_EQ(r.code, 0) << r.err;
  }

  static fs::path dir(const std::string& name) {
    const fs::path p = root_ / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }
  static std::string data() { return (root_ / "data").string(); }

  static fs::path root_;
};

fs::path CliTest::root_;

TEST_F(CliTest, SynthSharedVelocity) {
  const fs::path d = dir("synth");
  const CliRun r = rlsp_cli({"synth", "--out", d.string(), "--train", "1", "--val", "0", "--frames",
                          "3", "--height", "8", "--width", "8", "--velocity", "0", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const VideoClip still = load_sequence(d / "train" / "seq000");
  ASSERT_EQ(still.size(), 3u);
  EXPECT_EQ(still.frames[2], still.frames[0]);
  EXPECT_FALSE(fs::exists(d / "val"));
  EXPECT_EQ(rlsp_cli({"synth", "--out", d.string(), "--velocity", "1"}).code, cli::kExitUsage);
}

TEST_F(CliTest, MissingDataDirIsUsageError) {
  const CliRun r = rlsp_cli(with({"train", "--data", "/nonexistent/rlsp", "--out", "x.ckpt"}, kTiny));
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("/nonexistent/rlsp"), std::string::npos) << r.err;
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(rlsp_cli({}).code, cli::kExitUsage);
  EXPECT_EQ(rlsp_cli({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(rlsp_cli({"train", "--data", data()}).code, cli::kExitUsage);
  const CliRun unknown = rlsp_cli({"train", "--data", data(), "--out", "x", "bogus=1"});
  EXPECT_EQ(unknown.code, cli::kExitUsage);
  EXPECT_NE(unknown.err.find("bogus"), std::string::npos);
  EXPECT_EQ(rlsp_cli({"train", "--data", data(), "--out", "x", "layers=1"}).code, cli::kExitUsage);
  EXPECT_EQ(rlsp_cli({"train", "--data", data(), "--out", "x", "--config", "/no/such.cfg"}).code,
            cli::kExitUsage);
  EXPECT_EQ(rlsp_cli({"--help"}).code, cli::kExitOk);
}

TEST_F(CliTest, TrainRunsExactIterationCount) {
  const fs::path d = dir("train10");
  const CliRun r = rlsp_cli(
      with({"train", "--data", data(), "--out", (d / "m.ckpt").string(), "--max-iters", "10"}, kTiny));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("max_iters = 10"), std::string::npos);
  const Checkpoint ck = load_checkpoint(d / "m.ckpt");
  ASSERT_TRUE(ck.adam.has_value());
  EXPECT_EQ(ck.adam->step, 10);
  EXPECT_EQ(describe(ck.config), "RLSP 2-4");
  const auto log = lines(slurp(d / "m.ckpt.log.csv"));
  ASSERT_EQ(log.size(), 11u);
  EXPECT_EQ(log[0], "iteration,train_mse,val_mse,val_psnr_db,lr");
  EXPECT_EQ(log[10].substr(0, 3), "10,");
  EXPECT_TRUE(fs::exists(d / "m.ckpt.best"));
  EXPECT_FALSE(fs::exists(d / "m.ckpt.tmp"));
}

TEST_F(CliTest, ResumeMatchesUninterruptedRun) {
  const fs::path d = dir("resume");
  const auto full = (d / "full.ckpt").string();
  const auto part = (d / "part.ckpt").string();
  ASSERT_EQ(rlsp_cli(with({"train", "--data", data(), "--out", full, "--max-iters", "8"}, kTiny)).code, 0);
  ASSERT_EQ(rlsp_cli(with({"train", "--data", data(), "--out", part, "--max-iters", "3"}, kTiny)).code, 0);
  const CliRun r = rlsp_cli(with({"train", "--data", data(), "--out", part, "--max-iters", "8",
                               "--resume", part}, kTiny));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("resumed at iteration 3"), std::string::npos);
  EXPECT_EQ(slurp(full), slurp(part));
  EXPECT_EQ(slurp(full + ".log.csv"), slurp(part + ".log.csv"));
}

TEST_F(CliTest, ResumeRejectsMismatchedConfig) {
  const fs::path d = dir("resume_bad");
  const auto ck = (d / "m.ckpt").string();
  ASSERT_EQ(rlsp_cli(with({"train", "--data", data(), "--out", ck, "--max-iters", "1"}, kTiny)).code, 0);
  auto args = with({"train", "--data", data(), "--out", ck, "--resume", ck}, kTiny);
  args.push_back("filters=5");
  EXPECT_EQ(rlsp_cli(args).code, cli::kExitUsage);
}

TEST_F(CliTest, EchoedConfigReproducesRun) {
  const fs::path d = dir("echo");
  const CliRun first = rlsp_cli(with({"train", "--data", data(), "--out", (d / "a.ckpt").string(),
                                   "--max-iters", "4", "--seed", "9"}, kTiny));
  ASSERT_EQ(first.code, 0) << first.err;
  const auto echo_end = first.out.find("threads = ");
  const std::string echoed = first.out.substr(0, first.out.find('\n', echo_end) + 1);
  std::ofstream(d / "echo.cfg") << echoed;
  const CliRun second = rlsp_cli({"train", "--data", data(), "--out", (d / "b.ckpt").string(),
                               "--config", (d / "echo.cfg").string()});
  ASSERT_EQ(second.code, 0) << second.err;
  EXPECT_EQ(second.out.substr(0, echoed.size()), echoed);
  EXPECT_EQ(slurp(d / "a.ckpt"), slurp(d / "b.ckpt"));
}

TEST_F(CliTest, InferWithZeroWeightsMatchesBaseline) {
  const fs::path d = dir("infer");
  CellConfig c;
  c.layers = 2;
  c.filters = 3;
  c.scale = 2;
  save_checkpoint(d / "zero.ckpt", c, CellWeights::zeros(c));
  const auto lr_dir = (d / "lr").string();
  ASSERT_EQ(rlsp_cli({"degrade", "--input", data() + "/val/seq000", "--out", lr_dir, "scale=2",
                      "kernel_size=7"}).code, 0);
  const CliRun r = rlsp_cli({"infer", "--checkpoint", (d / "zero.ckpt").string(), "--input", lr_dir,
                          "--out", (d / "hr").string()});
  ASSERT_EQ(r.code, 0) << r.err;

  const VideoClip lr = load_sequence(lr_dir);
  const VideoClip out = load_sequence(d / "hr");
  ASSERT_EQ(out.size(), lr.size());
  EXPECT_EQ(std::distance(fs::directory_iterator(d / "hr"), fs::directory_iterator()),
            static_cast<long>(lr.size()));
  VideoClip baseline;
  for (const auto& f : lr.frames) {
    const Tensor y = shuffle_up(residual_base(f, 2), 2);
    const Tensor ycc = rgb_to_ycbcr(f);
    const int sizes[] = {1, 2};
    const Tensor chroma = bicubic_upscale(split_channels(ycc, sizes)[1], 2);
    baseline.frames.push_back(ycbcr_to_rgb(concat_channels({&y, &chroma})));
  }
  save_sequence(baseline, d / "baseline");
  EXPECT_EQ(load_sequence(d / "baseline").frames, out.frames);

  ASSERT_EQ(rlsp_cli({"infer", "--checkpoint", (d / "zero.ckpt").string(), "--input", lr_dir,
                      "--out", (d / "hr2").string()}).code, 0);
  for (const auto& entry : fs::directory_iterator(d / "hr")) {
    EXPECT_EQ(slurp(entry.path()), slurp(d / "hr2" / entry.path().filename()));
  }
}

TEST_F(CliTest, CorruptCheckpointIsRejected) {
  const fs::path d = dir("corrupt");
  std::ofstream(d / "bad.ckpt") << "RLSX garbage";
  const CliRun r = rlsp_cli({"infer", "--checkpoint", (d / "bad.ckpt").string(), "--input",
                          data() + "/val/seq000", "--out", (d / "o").string()});
  EXPECT_EQ(r.code, cli::kExitFailure);
  EXPECT_NE(r.err.find("bad magic"), std::string::npos) << r.err;
}

TEST_F(CliTest, EvalAgainstItselfIsPerfect) {
  const fs::path d = dir("eval_self");
  const CliRun r = rlsp_cli({"eval", "--output", data() + "/val", "--reference", data() + "/val",
                          "--out", (d / "eval.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(slurp(d / "eval.csv"));
  ASSERT_EQ(rows.size(), 1u + 6u + 1u);
  EXPECT_EQ(rows[0], "sequence,frame,psnr_db");
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i].substr(rows[i].rfind(',') + 1), "inf");
  EXPECT_EQ(rows.back(), "seq000,all,inf");
}

TEST_F(CliTest, EvalFrameCountMismatchNamesBothCounts) {
  const fs::path d = dir("eval_mismatch");
  const VideoClip full = load_sequence(data() + "/val/seq000");
  VideoClip shorter;
  shorter.frames.assign(full.frames.begin(), full.frames.begin() + 4);
  save_sequence(shorter, d / "seq000");
  const CliRun r = rlsp_cli({"eval", "--output", (d / "seq000").string(), "--reference",
                          data() + "/val/seq000"});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("4 frames"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("6"), std::string::npos) << r.err;
}

TEST_F(CliTest, EvalFromCheckpointRunsProtocol) {
  const fs::path d = dir("eval_ck");
  CellConfig c;
  c.layers = 2;
  c.filters = 3;
  c.scale = 2;
  save_checkpoint(d / "zero.ckpt", c, CellWeights::zeros(c));
  const CliRun r = rlsp_cli({"eval", "--checkpoint", (d / "zero.ckpt").string(), "--hr",
                          data() + "/val", "kernel_size=7"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("seq000,all,"), std::string::npos);
  EXPECT_NE(r.out.find("bicubic"), std::string::npos);
}

TEST_F(CliTest, AblateEmitsFourRows) {
  const fs::path d = dir("ablate");
  const CliRun r = rlsp_cli(with({"ablate", "--data", data(), "--out", (d / "ablate.csv").string(),
                               "--max-iters", "2"}, kTiny));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(slurp(d / "ablate.csv"));
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], "configuration,layers,filters,iterations,seconds,val_mse,val_psnr_db");
  EXPECT_EQ(rows[1].substr(0, 6), "\"x_t\",");
  EXPECT_EQ(rows[2].substr(0, 14), "\"x_{t-1:t+1}\",");
  EXPECT_EQ(rows[3].substr(0, 24), "\"x_{t-1:t+1} + y_{t-1}\",");
  EXPECT_EQ(rows[4].substr(0, 34), "\"x_{t-1:t+1} + y_{t-1} + h_{t-1}\",");
}

TEST_F(CliTest, AblateNeedsValidationSplit) {
  const CliRun r = rlsp_cli(with({"ablate", "--data", data() + "/train", "--max-iters", "1"}, kTiny));
  EXPECT_EQ(r.code, cli::kExitUsage);
}

TEST_F(CliTest, ProfileOfStaticClipIsStriped) {
  const fs::path d = dir("profile");
  const VideoClip src = load_sequence(data() + "/val/seq000");
  VideoClip still;
  still.frames.assign(5, src.frames[0]);
  save_sequence(still, d / "still");
  const CliRun r = rlsp_cli({"profile", "--input", (d / "still").string(), "--row", "7", "--out",
                          (d / "p.png").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const Tensor img = load_png(d / "p.png");
  EXPECT_EQ(img.shape(), (Shape{1, 3, 5, 16}));
  for (int t = 1; t < 5; ++t)
    for (int c = 0; c < 3; ++c)
      for (int x = 0; x < 16; ++x) EXPECT_EQ(img.at(0, c, t, x), img.at(0, c, 0, x));
  EXPECT_EQ(rlsp_cli({"profile", "--input", (d / "still").string(), "--row", "7", "--out",
                      (d / "p.pgm").string()}).code, 0);
  EXPECT_TRUE(fs::exists(d / "p.pgm"));
  EXPECT_EQ(rlsp_cli({"profile", "--input", (d / "still").string(), "--row", "99", "--out",
                      (d / "q.png").string()}).code, cli::kExitFailure);
}

TEST_F(CliTest, BenchWritesOneRowPerModelAndResolution) {
  const fs::path d = dir("bench");
  const CliRun r = rlsp_cli({"bench", "--model", "2-4", "--model", "2-8", "--resolution", "16x8",
                          "--resolution", "16x16", "--reps", "3", "--warmup", "1", "--out",
                          (d / "bench.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(slurp(d / "bench.csv"));
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], "resolution,config,median_ms,mean_ms,threads");
  EXPECT_EQ(rows[1].rfind("16x8,RLSP 2-4,", 0), 0u);
  EXPECT_EQ(rows[4].rfind("16x16,RLSP 2-8,", 0), 0u);
  EXPECT_EQ(rlsp_cli({"bench", "--model", "7"}).code, cli::kExitUsage);
  EXPECT_EQ(rlsp_cli({"bench", "--resolution", "10by10"}).code, cli::kExitUsage);
}

TEST_F(CliTest, FlowWritesPerFrameDifferences) {
  const fs::path d = dir("flow");
  const auto ck = (d / "m.ckpt").string();
  ASSERT_EQ(rlsp_cli(with({"train", "--data", data(), "--out", ck, "--max-iters", "2"}, kTiny)).code, 0);
  const CliRun r = rlsp_cli({"flow", "--checkpoint", ck, "--hr", data() + "/val/seq000", "--offset",
                          "0", "--out", (d / "flow.csv").string(), "kernel_size=7"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(slurp(d / "flow.csv"));
  ASSERT_EQ(rows.size(), 7u);
  EXPECT_EQ(rows[0], "frame,warm_psnr_db,cold_psnr_db,diff_db,diff_ma5_db");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_NE(rows[i].find(",0.000000,0.000000"), std::string::npos) << rows[i];
  }
  EXPECT_EQ(rlsp_cli({"flow", "--checkpoint", ck, "--hr", data() + "/val/seq000", "--offset",
                      "6", "kernel_size=7"}).code, cli::kExitFailure);
}

}  // namespace
}  // namespace rlsp
