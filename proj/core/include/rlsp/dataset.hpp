// Copyright 2026 The RLSP Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "rlsp/video.hpp"

namespace rlsp {

/// Window drawn for one training example: `frames` consecutive HR frames cropped to
/// (crop * scale) x (crop * scale), where `crop` is the LR crop size.
struct ClipSampling {
  int frames = 12;
  int crop = 16;
  int scale = 4;
};

struct SampledClip {
  VideoClip clip;
  std::size_t source = 0;
  int start = 0;
  int top = 0;
  int left = 0;
};

/// Uniform source, uniform start in [0, len - frames], uniform spatial crop offset.
SampledClip sample_training_clip(std::span<const VideoClip> dataset, std::mt19937_64& rng,
                                 const ClipSampling& spec);

/// Spatial crop of every frame.
VideoClip crop_clip(const VideoClip& clip, int top, int left, int height, int width);

/// Seed for iteration-specific randomness so that resumed runs draw the same samples.
std::mt19937_64 iteration_rng(std::uint64_t seed, std::int64_t iteration);

/// Periodic colour texture built from random plane waves, passed through a soft
/// threshold to create edges, translating with a constant sub-pixel velocity.
/// The texture tiles the frame exactly, so the motion wraps seamlessly.
struct TextureSpec {
  int height = 64;
  int width = 64;
  int frames = 20;
  int waves = 10;
  double max_frequency = 0.3;  // cycles per HR pixel
  double max_speed = 1.5;      // HR pixels per frame, per axis
  double contrast = 2.5;
  /// Shared (vx, vy) in HR pixels per frame. Unset draws a velocity per clip. A shared
  /// velocity lets small networks learn the fusion without estimating motion first.
  std::optional<std::array<double, 2>> velocity;
};

VideoClip make_translating_texture(const TextureSpec& spec, std::mt19937_64& rng);

std::vector<VideoClip> make_texture_dataset(const TextureSpec& spec, int count,
                                            std::uint64_t seed);

/// Loads every PNG sequence directory under `root` (see list_sequence_dirs). RGB only.
std::vector<VideoClip> load_dataset(const std::filesystem::path& root);

}  // namespace rlsp
