// Copyright 2026 The RLSP Authors
// SPDX-License-Identifier: Apache-2.0

#include "rlsp/dataset.hpp"

#include <cmath>
#include <numbers>

#include "rlsp/error.hpp"
#include "rlsp/image_io.hpp"

namespace rlsp {

namespace {

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

}  // namespace

VideoClip crop_clip(const VideoClip& clip, int top, int left, int height, int width) {
  clip.validate();
  if (top < 0 || left < 0 || top + height > clip.height() || left + width > clip.width()) {
    throw ShapeError("crop " + std::to_string(height) + "x" + std::to_string(width) + " at (" +
                     std::to_string(top) + ", " + std::to_string(left) +
                     ") exceeds frame " + to_string(clip.frames.front().shape()));
  }
  VideoClip out;
  out.color_space = clip.color_space;
  out.frames.reserve(clip.size());
  for (const auto& f : clip.frames) {
    Tensor t(Shape{1, f.channels(), height, width});
    for (int c = 0; c < f.channels(); ++c)
      for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) t.at(0, c, y, x) = f.at(0, c, top + y, left + x);
    out.frames.push_back(std::move(t));
  }
  return out;
}

SampledClip sample_training_clip(std::span<const VideoClip> dataset, std::mt19937_64& rng,
                                 const ClipSampling& spec) {
  if (dataset.empty()) throw ShapeError("sample_training_clip: empty dataset");
  SampledClip s;
  s.source = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(dataset.size()) - 1));
  const VideoClip& src = dataset[s.source];
  if (static_cast<int>(src.size()) < spec.frames) {
    throw ShapeError("sample_training_clip: clip " + std::to_string(s.source) + " has " +
                     std::to_string(src.size()) + " frames, need " + std::to_string(spec.frames));
  }
  const int crop_hr = spec.crop * spec.scale;
  if (crop_hr > src.height() || crop_hr > src.width()) {
    throw ShapeError("sample_training_clip: crop " + std::to_string(crop_hr) +
                     " larger than clip " + std::to_string(s.source) + " frames " +
                     to_string(src.frames.front().shape()));
  }
  s.start = uniform_int(rng, 0, static_cast<int>(src.size()) - spec.frames);
  s.top = uniform_int(rng, 0, src.height() - crop_hr);
  s.left = uniform_int(rng, 0, src.width() - crop_hr);

  VideoClip window;
  window.color_space = src.color_space;
  window.frames.assign(src.frames.begin() + s.start, src.frames.begin() + s.start + spec.frames);
  s.clip = crop_clip(window, s.top, s.left, crop_hr, crop_hr);
  return s;
}

std::mt19937_64 iteration_rng(std::uint64_t seed, std::int64_t iteration) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(iteration),
                    static_cast<std::uint32_t>(static_cast<std::uint64_t>(iteration) >> 32)};
  return std::mt19937_64(seq);
}

VideoClip make_translating_texture(const TextureSpec& spec, std::mt19937_64& rng) {
  if (spec.height < 1 || spec.width < 1 || spec.frames < 1 || spec.waves < 1) {
    throw ShapeError("make_translating_texture: sizes, frame count and wave count must be positive");
  }
  struct Wave {
    double fx, fy, phase, amplitude;
    double color[3];
  };
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // Integer cycle counts over the frame keep the texture periodic on the frame torus.
  const int max_kx = std::max(1, static_cast<int>(spec.max_frequency * spec.width));
  const int max_ky = std::max(1, static_cast<int>(spec.max_frequency * spec.height));
  std::vector<Wave> waves;
  double amplitude_sum = 0.0;
  for (int i = 0; i < spec.waves; ++i) {
    Wave w{};
    int kx = 0, ky = 0;
    while (kx == 0 && ky == 0) {
      kx = uniform_int(rng, -max_kx, max_kx);
      ky = uniform_int(rng, -max_ky, max_ky);
    }
    w.fx = static_cast<double>(kx) / spec.width;
    w.fy = static_cast<double>(ky) / spec.height;
    w.phase = 2.0 * std::numbers::pi * unit(rng);
    w.amplitude = 0.3 + unit(rng);
    for (double& c : w.color) c = 0.4 + 0.6 * unit(rng);
    amplitude_sum += w.amplitude;
    waves.push_back(w);
  }
  for (auto& w : waves) w.amplitude /= amplitude_sum;
  double tint[3];
  for (double& c : tint) c = unit(rng) - 0.5;
  std::uniform_real_distribution<double> speed(-spec.max_speed, spec.max_speed);
  // Drawn even when overridden so the texture does not depend on the velocity mode.
  double vx = speed(rng);
  double vy = speed(rng);
  if (spec.velocity) {
    vx = (*spec.velocity)[0];
    vy = (*spec.velocity)[1];
  }

  VideoClip clip;
  clip.color_space = ColorSpace::kRgb;
  for (int t = 0; t < spec.frames; ++t) {
    Tensor frame(Shape{1, 3, spec.height, spec.width});
    for (int y = 0; y < spec.height; ++y) {
      for (int x = 0; x < spec.width; ++x) {
        const double px = x - vx * t;
        const double py = y - vy * t;
        double acc[3] = {0.0, 0.0, 0.0};
        for (const auto& w : waves) {
          const double v =
              w.amplitude * std::cos(2.0 * std::numbers::pi * (w.fx * px + w.fy * py) + w.phase);
          for (int c = 0; c < 3; ++c) acc[c] += w.color[c] * v;
        }
        for (int c = 0; c < 3; ++c) {
          const double s = 0.5 + 0.5 * std::tanh(2.0 * spec.contrast * acc[c] + tint[c]);
          frame.at(0, c, y, x) = static_cast<float>(0.1 + 0.8 * s);
        }
      }
    }
    clip.frames.push_back(std::move(frame));
  }
  return clip;
}

std::vector<VideoClip> make_texture_dataset(const TextureSpec& spec, int count,
                                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<VideoClip> clips;
  clips.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) clips.push_back(make_translating_texture(spec, rng));
  return clips;
}

std::vector<VideoClip> load_dataset(const std::filesystem::path& root) {
  std::vector<VideoClip> clips;
  for (const auto& dir : list_sequence_dirs(root)) {
    VideoClip clip = load_sequence(dir);
    if (clip.color_space != ColorSpace::kRgb) {
      throw IoError("training sequences must be RGB: " + dir.string());
    }
    clips.push_back(std::move(clip));
  }
  if (clips.empty()) throw IoError("no sequence directories under " + root.string());
  return clips;
}

}  // namespace rlsp
