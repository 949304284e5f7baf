// Copyright 2026 The RLSP Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <vector>

#include "rlsp/tensor.hpp"
#include "rlsp/video.hpp"

namespace rlsp {

/// Reads an 8-bit gray or RGB PNG (alpha dropped) as a (1, C, H, W) tensor in [0, 1].
Tensor load_png(const std::filesystem::path& path);
/// Writes a 1- or 3-channel frame, quantising round(v * 255) with clamping.
void save_png(const Tensor& frame, const std::filesystem::path& path);

/// PNG files in `dir`, ordered by the integer embedded in each file stem.
/// Throws IoError naming the first file whose stem has no number or repeats one.
std::vector<std::filesystem::path> list_frames(const std::filesystem::path& dir);

/// Loads a PNG sequence directory. Gray files give a Y clip, colour files an RGB clip.
VideoClip load_sequence(const std::filesystem::path& dir);
/// Writes frames as 000000.png, 000001.png, ... creating `dir` if needed.
/// YCbCr clips are converted to RGB first.
void save_sequence(const VideoClip& clip, const std::filesystem::path& dir);

/// Immediate subdirectories of `root` that contain at least one PNG, sorted by name.
std::vector<std::filesystem::path> list_sequence_dirs(const std::filesystem::path& root);

/// Debug dump: "RLSPTNSR", four little-endian uint32 dims (N, C, H, W), then float32 data.
void write_raw_tensor(const Tensor& t, const std::filesystem::path& path);
Tensor read_raw_tensor(const std::filesystem::path& path);

/// Writes a single-channel frame as binary 8-bit PGM.
void save_pgm(const Tensor& frame, const std::filesystem::path& path);

}  // namespace rlsp
