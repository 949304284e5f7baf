// Copyright 2026 The RLSP Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rlsp/cell.hpp"
#include "rlsp/color.hpp"
#include "rlsp/tensor.hpp"
#include "rlsp/video.hpp"

namespace rlsp {

/// PSNR of identical inputs. Written as "inf" in reports and skipped by averages.
inline constexpr double kPerfectPsnr = std::numeric_limits<double>::infinity();

/// 10 * log10(max^2 / MSE). Returns kPerfectPsnr when MSE is zero.
double psnr(const Tensor& a, const Tensor& b, double max_val = 1.0);
double psnr_from_mse(double mse, double max_val = 1.0);
/// Mean squared error accumulated in double precision.
double mean_squared_error(const Tensor& a, const Tensor& b);

struct SequenceResult {
  std::vector<double> frame_psnr;  // dB
  double sequence_psnr = 0.0;      // from the MSE pooled over every pixel of every frame
  double sequence_mse = 0.0;
  std::size_t frames = 0;
};

SequenceResult psnr_sequence(std::span<const Tensor> outputs, std::span<const Tensor> refs,
                             double max_val = 1.0);

/// Mean of finite values; nullopt if every value is the perfect sentinel.
std::optional<double> mean_finite(std::span<const double> values);

/// Separable Catmull-Rom (a = -0.5) upsampling by integer `r` with half-sample symmetric
/// borders; output pixel o samples source coordinate (o + 0.5) / r - 0.5.
Tensor bicubic_upscale(const Tensor& t, int r);

struct InferenceResult {
  VideoClip luma;  // super-resolved Y, (1, 1, rH, rW) per frame
  VideoClip rgb;   // Y merged with bicubic chroma, converted to RGB
  ColorConversionStats clamping;
};

/// Runs the cell over every frame from zero state and merges the result with bicubic
/// Cb/Cr upscaled from the LR input.
InferenceResult infer_sequence(const VideoClip& lr_rgb, const CellWeights& weights,
                               const CellConfig& config);

/// One pixel row per frame stacked in time: image (1, C, frames, W).
struct TemporalProfile {
  Tensor image;
  int row = 0;
};

TemporalProfile temporal_profile(const VideoClip& clip, int row);

struct FlowExperimentResult {
  int offset = 0;
  std::vector<double> warm_psnr;  // frames offset .. end
  std::vector<double> cold_psnr;
  std::vector<double> diff_db;    // warm - cold
  /// First index into diff_db from which |diff| stays below the threshold.
  std::optional<std::size_t> convergence_index;
};

/// Warm run starts at frame 0; cold run starts at `offset` from a fresh zero state but
/// with the same neighbour frames. Both are scored on frames offset..end against `hr_luma`.
FlowExperimentResult information_flow_experiment(const VideoClip& lr_rgb,
                                                 const VideoClip& hr_luma,
                                                 const CellWeights& weights,
                                                 const CellConfig& config, int offset,
                                                 double threshold_db = 0.05);

/// Centred moving average with a window of `window` samples (truncated at the ends).
std::vector<double> moving_average(std::span<const double> values, int window);

struct BenchmarkResult {
  int height = 0;  // LR input
  int width = 0;
  std::vector<double> samples_ms;
  double median_ms = 0.0;
  double mean_ms = 0.0;
  int threads = 1;
  std::string hardware;
};

double median(std::vector<double> values);

/// Wall-clock time per cell_forward on an (H, W) LR frame after `warmup` untimed runs.
BenchmarkResult runtime_benchmark(int height, int width, const CellWeights& weights,
                                  const CellConfig& config, int warmup, int reps);

std::string hardware_description();

/// "inf" for the perfect sentinel, otherwise fixed with 6 decimals.
std::string format_psnr(double db);

/// CSV: sequence,frame,psnr_db with one row per frame plus "all" summary row per sequence.
void write_eval_csv(std::ostream& os, std::span<const std::string> names,
                    std::span<const SequenceResult> results);

/// CSV: resolution,config,median_ms,mean_ms,threads
void write_bench_header(std::ostream& os);
void write_bench_row(std::ostream& os, const BenchmarkResult& result, const std::string& config);

}  // namespace rlsp
