// Copyright 2026 The RLSP Authors
// SPDX-License-Identifier: Apache-2.0

#include "rlsp/evaluation.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "rlsp/degrade.hpp"
#include "rlsp/error.hpp"
#include "rlsp/parallel.hpp"

namespace rlsp {

double mean_squared_error(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "mean_squared_error");
  auto x = a.data();
  auto y = b.data();
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = static_cast<double>(x[i]) - static_cast<double>(y[i]);
    sum += d * d;
  }
  return sum / static_cast<double>(x.size());
}

double psnr_from_mse(double mse, double max_val) {
  if (mse <= 0.0) return kPerfectPsnr;
  return 10.0 * std::log10(max_val * max_val / mse);
}

double psnr(const Tensor& a, const Tensor& b, double max_val) {
  return psnr_from_mse(mean_squared_error(a, b), max_val);
}

SequenceResult psnr_sequence(std::span<const Tensor> outputs, std::span<const Tensor> refs,
                             double max_val) {
  if (outputs.size() != refs.size()) {
    throw ShapeError("psnr_sequence: " + std::to_string(outputs.size()) + " output frames vs " +
                     std::to_string(refs.size()) + " reference frames");
  }
  if (outputs.empty()) throw ShapeError("psnr_sequence: empty sequence");
  SequenceResult r;
  r.frames = outputs.size();
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    const double mse = mean_squared_error(outputs[i], refs[i]);
    r.frame_psnr.push_back(psnr_from_mse(mse, max_val));
    total += mse * static_cast<double>(outputs[i].size());
    count += outputs[i].size();
  }
  r.sequence_mse = total / static_cast<double>(count);
  r.sequence_psnr = psnr_from_mse(r.sequence_mse, max_val);
  return r;
}

std::optional<double> mean_finite(std::span<const double> values) {
  double sum = 0.0;
  std::size_t n = 0;
  for (double v : values) {
    if (std::isfinite(v)) {
      sum += v;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

// ---------------------------------------------------------------------------

namespace {

double cubic_weight(double x) {
  constexpr double a = -0.5;
  x = std::abs(x);
  if (x <= 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
  if (x < 2.0) return ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a;
  return 0.0;
}

struct Taps {
  std::vector<int> base;                  // per output index: source index of tap 0
  std::vector<std::array<double, 4>> w;   // per output index
};

Taps make_taps(int in_size, int r) {
  Taps taps;
  const int out_size = in_size * r;
  taps.base.resize(static_cast<std::size_t>(out_size));
  taps.w.resize(static_cast<std::size_t>(out_size));
  for (int o = 0; o < out_size; ++o) {
    const double src = (o + 0.5) / r - 0.5;
    const double fl = std::floor(src);
    const double t = src - fl;
    taps.base[static_cast<std::size_t>(o)] = static_cast<int>(fl) - 1;
    for (int k = 0; k < 4; ++k) {
      taps.w[static_cast<std::size_t>(o)][static_cast<std::size_t>(k)] = cubic_weight(t - (k - 1));
    }
  }
  return taps;
}

}  // namespace

Tensor bicubic_upscale(const Tensor& t, int r) {
  if (r < 1) throw ShapeError("bicubic_upscale: factor must be >= 1");
  if (r == 1) return t;
  const int H = t.height(), W = t.width();
  const int OH = H * r, OW = W * r;
  const Taps tx = make_taps(W, r);
  const Taps ty = make_taps(H, r);
  Tensor out(Shape{t.batch(), t.channels(), OH, OW});
  std::vector<double> rows(static_cast<std::size_t>(H) * OW);
  for (int n = 0; n < t.batch(); ++n) {
    for (int c = 0; c < t.channels(); ++c) {
      const float* src = t.plane(n, c);
      for (int y = 0; y < H; ++y) {
        for (int o = 0; o < OW; ++o) {
          const auto& w = tx.w[static_cast<std::size_t>(o)];
          const int b = tx.base[static_cast<std::size_t>(o)];
          double acc = 0.0;
          for (int k = 0; k < 4; ++k) {
            acc += w[static_cast<std::size_t>(k)] *
                   src[static_cast<std::size_t>(y) * W + reflect_index(b + k, W)];
          }
          rows[static_cast<std::size_t>(y) * OW + o] = acc;
        }
      }
      float* dst = out.plane(n, c);
      for (int oy = 0; oy < OH; ++oy) {
        const auto& w = ty.w[static_cast<std::size_t>(oy)];
        const int b = ty.base[static_cast<std::size_t>(oy)];
        for (int ox = 0; ox < OW; ++ox) {
          double acc = 0.0;
          for (int k = 0; k < 4; ++k) {
            acc += w[static_cast<std::size_t>(k)] *
                   rows[static_cast<std::size_t>(reflect_index(b + k, H)) * OW + ox];
          }
          dst[static_cast<std::size_t>(oy) * OW + ox] = static_cast<float>(acc);
        }
      }
    }
  }
  return out;
}

InferenceResult infer_sequence(const VideoClip& lr_rgb, const CellWeights& weights,
                               const CellConfig& config) {
  lr_rgb.validate();
  if (lr_rgb.color_space != ColorSpace::kRgb) {
    throw ShapeError("infer_sequence: input must be RGB, got " + to_string(lr_rgb.color_space));
  }
  weights.check(config);
  InferenceResult result;
  result.luma.color_space = ColorSpace::kY;
  result.rgb.color_space = ColorSpace::kRgb;
  result.luma.frames = run_sequence(lr_rgb.frames, weights, config);
  for (std::size_t t = 0; t < lr_rgb.size(); ++t) {
    const Tensor ycc = rgb_to_ycbcr(lr_rgb.frames[t]);
    const int sizes[] = {1, 2};
    const auto parts = split_channels(ycc, sizes);
    const Tensor chroma = bicubic_upscale(parts[1], config.scale);
    const Tensor merged = concat_channels({&result.luma.frames[t], &chroma});
    result.rgb.frames.push_back(ycbcr_to_rgb(merged, &result.clamping));
  }
  return result;
}

TemporalProfile temporal_profile(const VideoClip& clip, int row) {
  clip.validate();
  if (row < 0 || row >= clip.height()) {
    throw ShapeError("temporal_profile: row " + std::to_string(row) + " outside frame height " +
                     std::to_string(clip.height()));
  }
  const int T = static_cast<int>(clip.size());
  const int C = clip.channels(), W = clip.width();
  TemporalProfile p;
  p.row = row;
  p.image = Tensor(Shape{1, C, T, W});
  for (int t = 0; t < T; ++t) {
    const Tensor& f = clip.frames[static_cast<std::size_t>(t)];
    for (int c = 0; c < C; ++c) {
      std::copy_n(f.plane(0, c) + static_cast<std::size_t>(row) * W, W,
                  p.image.plane(0, c) + static_cast<std::size_t>(t) * W);
    }
  }
  return p;
}

namespace {

// Cell run over frames [start, end) of the clip, neighbours taken from the full clip.
std::vector<Tensor> run_from(const VideoClip& lr, std::size_t start, const CellWeights& weights,
                             const CellConfig& config) {
  const std::size_t count = lr.size();
  CellState state = init_state(1, lr.height(), lr.width(), config);
  std::vector<Tensor> out;
  for (std::size_t t = start; t < count; ++t) {
    const Tensor& prev = lr.frames[t == 0 ? 0 : t - 1];
    const Tensor& next = lr.frames[t + 1 < count ? t + 1 : count - 1];
    CellOutput o = cell_forward(prev, lr.frames[t], next, state, weights, config);
    out.push_back(std::move(o.y));
    state = std::move(o.next_state);
  }
  return out;
}

}  // namespace

FlowExperimentResult information_flow_experiment(const VideoClip& lr_rgb,
                                                 const VideoClip& hr_luma,
                                                 const CellWeights& weights,
                                                 const CellConfig& config, int offset,
                                                 double threshold_db) {
  lr_rgb.validate();
  hr_luma.validate();
  if (offset < 0 || static_cast<std::size_t>(offset) >= lr_rgb.size()) {
    throw ShapeError("information_flow_experiment: offset " + std::to_string(offset) +
                     " must be in [0, " + std::to_string(lr_rgb.size()) + ")");
  }
  if (hr_luma.size() != lr_rgb.size() || hr_luma.channels() != 1) {
    throw ShapeError("information_flow_experiment: ground truth must be Y with " +
                     std::to_string(lr_rgb.size()) + " frames");
  }
  const auto start = static_cast<std::size_t>(offset);
  const auto warm = run_from(lr_rgb, 0, weights, config);
  const auto cold = run_from(lr_rgb, start, weights, config);

  FlowExperimentResult r;
  r.offset = offset;
  for (std::size_t t = start; t < lr_rgb.size(); ++t) {
    const double w = psnr(warm[t], hr_luma.frames[t]);
    const double c = psnr(cold[t - start], hr_luma.frames[t]);
    r.warm_psnr.push_back(w);
    r.cold_psnr.push_back(c);
    r.diff_db.push_back(w == c ? 0.0 : w - c);
  }
  for (std::size_t i = r.diff_db.size(); i-- > 0;) {
    if (std::abs(r.diff_db[i]) >= threshold_db) break;
    r.convergence_index = i;
  }
  return r;
}

std::vector<double> moving_average(std::span<const double> values, int window) {
  if (window < 1) throw std::invalid_argument("moving_average: window must be >= 1");
  const int n = static_cast<int>(values.size());
  const int half = window / 2;
  std::vector<double> out(values.size());
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - half);
    const int hi = std::min(n, lo + window);
    const int lo2 = std::max(0, hi - window);
    double s = 0.0;
    for (int j = lo2; j < hi; ++j) s += values[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = s / (hi - lo2);
  }
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::string hardware_description() {
  std::string model = "unknown CPU";
  std::ifstream cpuinfo("/proc/cpuinfo");
  std::string line;
  while (std::getline(cpuinfo, line)) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) model = line.substr(colon + 2);
      break;
    }
  }
  return model + ", " + std::to_string(num_threads()) + " thread(s)";
}

BenchmarkResult runtime_benchmark(int height, int width, const CellWeights& weights,
                                  const CellConfig& config, int warmup, int reps) {
  if (reps < 1) throw std::invalid_argument("runtime_benchmark: reps must be >= 1");
  weights.check(config);
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<float> unit(0.0f, 1.0f);
  Tensor frame(Shape{1, 3, height, width});
  for (float& v : frame.data()) v = unit(rng);
  CellState state = init_state(1, height, width, config);

  for (int i = 0; i < warmup; ++i) {
    state = cell_forward(frame, frame, frame, state, weights, config).next_state;
  }
  BenchmarkResult r;
  r.height = height;
  r.width = width;
  r.threads = num_threads();
  r.hardware = hardware_description();
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    CellOutput o = cell_forward(frame, frame, frame, state, weights, config);
    const auto t1 = std::chrono::steady_clock::now();
    state = std::move(o.next_state);
    r.samples_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  r.median_ms = median(r.samples_ms);
  r.mean_ms = std::accumulate(r.samples_ms.begin(), r.samples_ms.end(), 0.0) /
              static_cast<double>(r.samples_ms.size());
  if (reps == 1) r.mean_ms = r.median_ms = r.samples_ms.front();
  return r;
}

std::string format_psnr(double db) {
  if (std::isinf(db) && db > 0) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", db);
  return buf;
}

void write_eval_csv(std::ostream& os, std::span<const std::string> names,
                    std::span<const SequenceResult> results) {
  os << "sequence,frame,psnr_db\n";
  for (std::size_t s = 0; s < results.size(); ++s) {
    for (std::size_t f = 0; f < results[s].frame_psnr.size(); ++f) {
      os << names[s] << ',' << f << ',' << format_psnr(results[s].frame_psnr[f]) << '\n';
    }
    os << names[s] << ",all," << format_psnr(results[s].sequence_psnr) << '\n';
  }
}

void write_bench_header(std::ostream& os) { os << "resolution,config,median_ms,mean_ms,threads\n"; }

void write_bench_row(std::ostream& os, const BenchmarkResult& result, const std::string& config) {
  char buf[64];
  os << result.width << 'x' << result.height << ',' << config << ',';
  std::snprintf(buf, sizeof(buf), "%.4f,%.4f", result.median_ms, result.mean_ms);
  os << buf << ',' << result.threads << '\n';
}

}  // namespace rlsp
