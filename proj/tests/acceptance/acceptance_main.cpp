// Copyright 2026 The RLSP Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance runner. Prints one PASS/FAIL line per criterion and exits nonzero if any
// selected criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "reference.hpp"
#include "rlsp/ablation.hpp"
#include "rlsp/cell.hpp"
#include "rlsp/color.hpp"
#include "rlsp/dataset.hpp"
#include "rlsp/degrade.hpp"
#include "rlsp/evaluation.hpp"
#include "rlsp/parallel.hpp"
#include "rlsp/training.hpp"

namespace rlsp {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Options {
  double ablation_seconds = 1800.0;  // per configuration
  std::int64_t ablation_iters = 3000;
  std::int64_t overfit_iters = 2000;
  bool verbose = false;
};

// 1. Shuffle bijectivity.
Outcome shuffle_round_trips() {
  const auto start = Clock::now();
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> factor(1, 4), small(1, 3), side(1, 9);
  int failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const int r = factor(rng);
    const Shape lo{small(rng), small(rng) * r * r, side(rng), side(rng)};
    const Tensor a = testing::random_tensor(lo, rng);
    const Tensor up = shuffle_up(a, r);
    if (up.shape() != Shape{lo.batch, lo.channels / (r * r), lo.height * r, lo.width * r} ||
        shuffle_down(up, r) != a) {
      ++failures;
    }
    const Tensor b = testing::random_tensor(up.shape(), rng);
    if (shuffle_up(shuffle_down(b, r), r) != b) ++failures;
  }
  const double secs = seconds_since(start);
  return {failures == 0 && secs < 5.0,
          fmt("1000 tensors, %d mismatches, %.3f s (limit 5 s)", failures, secs)};
}

// 2. Finite-difference gradient suite.
Outcome gradient_suite() {
  const auto start = Clock::now();
  const auto checks = testing::run_gradient_suite(7);
  const double secs = seconds_since(start);
  double worst_op = 0.0, worst_cell = 0.0;
  bool ok = secs < 60.0;
  std::string failed;
  for (const auto& c : checks) {
    ok = ok && c.pass();
    if (!c.pass()) failed += " " + c.name;
    (c.tolerance < 1e-3 ? worst_op : worst_cell) = std::max(c.tolerance < 1e-3 ? worst_op : worst_cell, c.error);
  }
  return {ok, fmt("%zu checks, worst per-op %.2e (< 1e-4), worst unrolled cell %.2e (< 1e-3), %.2f s%s",
                  checks.size(), worst_op, worst_cell, secs,
                  failed.empty() ? "" : (", failed:" + failed).c_str())};
}

// 3. All-zero weights reduce to nearest-neighbour upsampling of Y.
Outcome zero_network_identity() {
  std::mt19937_64 rng(303);
  VideoClip lr;
  for (int t = 0; t < 5; ++t) lr.frames.push_back(testing::random_tensor({1, 3, 12, 17}, rng, 0, 1));
  int mismatched = 0;
  std::size_t compared = 0;
  for (AblationVariant v : kAllVariants) {
    const CellConfig config = make_variant(v, 3, 8, 4);
    const InferenceResult out = infer_sequence(lr, CellWeights::zeros(config), config);
    for (std::size_t t = 0; t < lr.size(); ++t) {
      const Tensor y = rgb_to_y(lr.frames[t]);
      const Tensor& hr = out.luma.frames[t];
      if (hr.shape() != Shape{1, 1, 48, 68}) return {false, "unexpected output shape " + to_string(hr.shape())};
      for (int row = 0; row < 48; ++row)
        for (int col = 0; col < 68; ++col) {
          mismatched += hr.at(0, 0, row, col) != y.at(0, 0, row / 4, col / 4);
          ++compared;
        }
    }
  }
  return {mismatched == 0, fmt("%zu pixels over 4 variants x 5 frames, %d differ", compared, mismatched)};
}

// Shared by criteria 4 and 6.
struct OverfitModel {
  CellConfig config;
  CellWeights weights;
  VideoClip hr;
  VideoClip lr;
  double mse_at_10 = 0.0;
  double mse_final = 0.0;
  double seconds = 0.0;
};

// Smooth translating textures with one motion shared by every clip. Criteria 4-6 draw
// from the same generator settings.
TextureSpec texture_spec(int height, int width, int frames) {
  TextureSpec spec;
  spec.height = height;
  spec.width = width;
  spec.frames = frames;
  spec.max_frequency = 0.2;
  spec.contrast = 1.0;
  spec.velocity = std::array<double, 2>{0.7, 0.45};
  return spec;
}

constexpr int kOverfitFrames = 8;
// Windows of T + 2 = 6 frames start at frames 0..2 of the clip, so the model sees zero
// state at several positions instead of memorising a single trajectory.
constexpr int kOverfitUnroll = 4;
// Largest offset that leaves at least two distinct 5-frame averaging windows, so that a
// trend exists to be measured.
constexpr int kFlowOffset = kOverfitFrames - 6;

VideoClip overfit_clip() {
  std::mt19937_64 rng(404);
  return make_translating_texture(texture_spec(32, 32, kOverfitFrames), rng);
}

const OverfitModel& overfit_model(const Options& opts) {
  static std::optional<OverfitModel> cached;
  if (cached) return *cached;
  OverfitModel m;
  m.config = make_variant(AblationVariant::kHiddenState, 3, 16, 4);
  m.hr = overfit_clip();
  const DegradeConfig degradation;
  m.lr = degrade(m.hr, degradation);

  TrainConfig train;
  train.unroll = kOverfitUnroll;
  train.batch = 1;
  train.crop = 32 / m.config.scale;
  train.lr0 = 1e-3;
  train.max_iters = opts.overfit_iters;
  train.seed = 4;
  train.log_every = 1;
  train.validate();

  const auto start = Clock::now();
  Trainer trainer(m.config, train, degradation, {m.hr});
  trainer.initialize();
  while (!trainer.done()) {
    const LossReport report = trainer.step();
    if (report.iteration == 10) m.mse_at_10 = report.train_mse;
    m.mse_final = report.train_mse;
    if (opts.verbose && report.iteration % 200 == 0)
      std::cerr << "  overfit iter " << report.iteration << " mse " << report.train_mse << "\n";
  }
  m.seconds = seconds_since(start);
  m.weights = trainer.weights();
  cached = std::move(m);
  return *cached;
}

// 4. Overfit smoke test.
Outcome overfit_smoke(const Options& opts) {
  const OverfitModel& m = overfit_model(opts);
  const VideoClip hr_y = luma(m.hr);
  const InferenceResult out = infer_sequence(m.lr, m.weights, m.config);
  const double model_db = psnr_sequence(out.luma.frames, hr_y.frames).sequence_psnr;
  std::vector<Tensor> bicubic;
  for (const Tensor& f : m.lr.frames) bicubic.push_back(bicubic_upscale(rgb_to_y(f), m.config.scale));
  const double bicubic_db = psnr_sequence(bicubic, hr_y.frames).sequence_psnr;
  const double reduction = m.mse_at_10 / m.mse_final;
  if (opts.verbose) {
    const auto r = psnr_sequence(out.luma.frames, hr_y.frames);
    const auto b = psnr_sequence(bicubic, hr_y.frames);
    for (std::size_t t = 0; t < r.frame_psnr.size(); ++t)
      std::cerr << "  frame " << t << " model " << r.frame_psnr[t] << " bicubic " << b.frame_psnr[t] << "\n";
  }
  const bool ok = opts.overfit_iters == 2000 && reduction >= 10.0 && model_db - bicubic_db >= 3.0 &&
                  m.seconds < 600.0;
  return {ok, fmt("%s, %lld iterations in %.1f s: train MSE %.3e -> %.3e (%.1fx, need 10x); "
                  "PSNR %.2f dB vs bicubic %.2f dB (+%.2f, need +3)",
                  describe(m.config).c_str(), static_cast<long long>(opts.overfit_iters), m.seconds,
                  m.mse_at_10, m.mse_final, reduction, model_db, bicubic_db, model_db - bicubic_db)};
}

// 5. Ablation ordering on translating textures.
Outcome ablation_ordering(const Options& opts) {
  const TextureSpec spec = texture_spec(64, 64, 20);
  const auto train_set = make_texture_dataset(spec, 256, 505);
  const auto val_set = make_texture_dataset(spec, 4, 506);

  TrainConfig train;
  train.unroll = 10;
  train.batch = 2;
  train.crop = 8;
  train.lr0 = 1e-3;
  train.max_iters = opts.ablation_iters;
  train.lr_drop_steps = {opts.ablation_iters * 7 / 10, opts.ablation_iters * 9 / 10};
  train.seed = 5;
  train.validate();

  AblationProgress progress;
  if (opts.verbose) {
    progress = [](const AblationRow& row, const LossReport& report) {
      if (report.iteration % 500 == 0)
        std::cerr << "  " << row.label << " iter " << report.iteration << " mse " << report.train_mse << "\n";
    };
  }
  const auto rows = run_ablation(3, 16, train, DegradeConfig{}, train_set, val_set,
                                 AblationBudget{opts.ablation_seconds}, progress);
  bool ordered = rows.size() == 4;
  std::string detail;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && !(rows[i - 1].val_psnr_db < rows[i].val_psnr_db)) ordered = false;
    detail += fmt("%s%s %.3f dB (%lld it, %.0f s)", i ? " < " : "", rows[i].label.c_str(),
                  rows[i].val_psnr_db, static_cast<long long>(rows[i].iterations), rows[i].seconds);
  }
  return {ordered, detail};
}

// 6. Information flow: warm versus cold start.
Outcome information_flow(const Options& opts) {
  std::mt19937_64 rng(606);
  const CellConfig random_config = make_variant(AblationVariant::kHiddenState, 2, 4, 4);
  const CellWeights random_weights = xavier_init(random_config, rng);
  VideoClip hr;
  for (int t = 0; t < 6; ++t) hr.frames.push_back(testing::random_tensor({1, 3, 16, 16}, rng, 0, 1));
  const auto zero = information_flow_experiment(degrade(hr, {}), luma(hr), random_weights, random_config, 0);
  const OverfitModel& m = overfit_model(opts);
  const auto trained = information_flow_experiment(m.lr, luma(m.hr), m.weights, m.config, 0);
  const auto all_zero = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double d) { return d == 0.0; });
  };
  const bool identical = all_zero(zero.diff_db) && zero.warm_psnr == zero.cold_psnr &&
                         all_zero(trained.diff_db) && trained.warm_psnr == trained.cold_psnr;

  const auto flow = information_flow_experiment(m.lr, luma(m.hr), m.weights, m.config, kFlowOffset);
  const auto ma = moving_average(flow.diff_db, 5);
  bool decays = true;
  for (std::size_t i = 1; i < ma.size(); ++i) decays = decays && ma[i] <= ma[i - 1];
  const bool ok = identical && flow.diff_db.front() > 0.0 && decays && ma.back() < 0.05;
  std::string series;
  for (double d : flow.diff_db) series += fmt(" %.3f", d);
  return {ok, fmt("offset 0 identical: %s; offset %d diffs dB:%s; moving average %.3f -> %.3f",
                  identical ? "yes" : "no", kFlowOffset, series.c_str(), ma.front(), ma.back())};
}

// 7. PSNR protocol against a long-double brute force.
Outcome psnr_oracle() {
  std::mt19937_64 rng(707);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int frames = 1 + trial % 6;
    const Shape shape{1, 1, 5 + trial % 7, 3 + trial % 11};
    std::vector<Tensor> outs, refs;
    long double sum = 0.0L;
    long double n = 0.0L;
    for (int t = 0; t < frames; ++t) {
      outs.push_back(testing::random_tensor(shape, rng, 0, 1));
      refs.push_back(testing::random_tensor(shape, rng, 0, 1));
      for (std::size_t i = 0; i < outs.back().size(); ++i) {
        const long double d = static_cast<long double>(outs.back().data()[i]) - refs.back().data()[i];
        sum += d * d;
        n += 1.0L;
      }
    }
    const double expect = static_cast<double>(10.0L * std::log10(1.0L / (sum / n)));
    worst = std::max(worst, std::abs(psnr_sequence(outs, refs).sequence_psnr - expect));
  }
  const Tensor zero(Shape{1, 1, 2, 2}, 0.0f);
  const Tensor outs[] = {zero, zero};
  const Tensor refs[] = {Tensor(Shape{1, 1, 2, 2}, 0.1f), Tensor(Shape{1, 1, 2, 2}, 0.2f)};
  const double two_frame = psnr_sequence(outs, refs).sequence_psnr;
  const double two_frame_err = std::abs(two_frame - 10.0 * std::log10(1.0 / 0.025));
  return {worst < 1e-6 && two_frame_err < 1e-6,
          fmt("50 random clips, worst |diff| %.2e dB; two-frame example %.4f dB (err %.2e)", worst,
              two_frame, two_frame_err)};
}

// 8. Runtime scaling.
Outcome runtime_scaling() {
  std::mt19937_64 rng(808);
  const CellConfig c64 = make_variant(AblationVariant::kHiddenState, 7, 64, 4);
  const CellConfig c128 = make_variant(AblationVariant::kHiddenState, 7, 128, 4);
  const CellWeights w64 = xavier_init(c64, rng);
  const CellWeights w128 = xavier_init(c128, rng);
  // Rounds alternate the configurations so that drift in machine load hits all of them.
  std::vector<double> base_ms, doubled_ms, wide_ms;
  for (int round = 0; round < 5; ++round) {
    base_ms.push_back(runtime_benchmark(48, 64, w64, c64, 1, 5).median_ms);
    doubled_ms.push_back(runtime_benchmark(96, 64, w64, c64, 1, 5).median_ms);
    wide_ms.push_back(runtime_benchmark(48, 64, w128, c128, 1, 3).median_ms);
  }
  const double base = median(base_ms);
  const double doubled = median(doubled_ms);
  const double wide = median(wide_ms);
  const double ratio = doubled / base;
  const bool ok = ratio >= 1.6 && ratio <= 2.4 && wide > base;
  return {ok, fmt("RLSP 7-64 64x48 %.2f ms, 64x96 %.2f ms (ratio %.2f, band 1.6-2.4); "
                  "RLSP 7-128 64x48 %.2f ms; %s",
                  base, doubled, ratio, wide,
                  hardware_description().c_str())};
}

// 9. Degradation kernel and colour conversion.
Outcome degradation_and_color() {
  const auto k = gaussian_kernel(1.5, 13);
  double sum = 0.0, asym = 0.0;
  for (int i = 0; i < 13; ++i)
    for (int j = 0; j < 13; ++j) {
      sum += k[i][j];
      asym = std::max({asym, std::abs(k[i][j] - k[12 - i][j]), std::abs(k[i][j] - k[i][12 - j]),
                       std::abs(k[i][j] - k[j][i])});
    }

  std::mt19937_64 rng(909);
  const Tensor rgb = testing::random_tensor({1, 3, 64, 64}, rng, 0, 1);
  const Tensor back = ycbcr_to_rgb(rgb_to_ycbcr(rgb));
  double round_trip = 0.0;
  for (std::size_t i = 0; i < rgb.size(); ++i)
    round_trip = std::max(round_trip, static_cast<double>(std::abs(rgb.data()[i] - back.data()[i])));

  bool constant = true;
  for (float v : {0.0f, 0.25f, 0.4f, 0.73f, 1.0f}) {
    for (int r : {2, 3, 4}) {
      const Tensor hr(Shape{1, 3, 12 * r, 8 * r}, v);
      constant = constant && degrade_frame(hr, DegradeConfig{1.5, r, 13}) == Tensor(Shape{1, 3, 12, 8}, v);
    }
  }
  const bool ok = std::abs(sum - 1.0) < 1e-6 && asym < 1e-6 && round_trip < 1.0 / 255 && constant;
  return {ok, fmt("kernel sum-1 %.1e, asymmetry %.1e; BT.601 round trip max err %.2e (< %.2e); "
                  "constant frames %s",
                  std::abs(sum - 1.0), asym, round_trip, 1.0 / 255, constant ? "exact" : "changed")};
}

}  // namespace
}  // namespace rlsp

int main(int argc, char** argv) {
  using namespace rlsp;
  Options opts;
  std::vector<int> only;
  int threads = 0;
  CLI::App app{"Runs the acceptance criteria and prints one PASS/FAIL line for each."};
  app.add_option("--only", only, "Criterion numbers to run (default: all)")->check(CLI::Range(1, 9));
  app.add_option("--ablation-seconds", opts.ablation_seconds, "Wall-clock cap per ablation configuration");
  app.add_option("--ablation-iters", opts.ablation_iters, "Iteration cap per ablation configuration");
  app.add_option("--threads", threads, "Worker threads (0: runtime default)");
  app.add_flag("-v,--verbose", opts.verbose, "Print training progress");
  CLI11_PARSE(app, argc, argv);
  retain_heap_memory();
  if (threads > 0) set_num_threads(threads);

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"shuffle bijectivity", shuffle_round_trips},
      {"gradient suite", gradient_suite},
      {"zero-network identity", zero_network_identity},
      {"overfit smoke test", [&] { return overfit_smoke(opts); }},
      {"ablation ordering", [&] { return ablation_ordering(opts); }},
      {"information flow", [&] { return information_flow(opts); }},
      {"PSNR protocol oracle", psnr_oracle},
      {"runtime benchmark scaling", runtime_scaling},
      {"degradation and colour", degradation_and_color},
  };
  const std::set<int> selected(only.begin(), only.end());
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << id << ". " << criteria[i].first << ": "
              << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
