// Copyright 2026 The RLSP Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>

#include "rlsp/cell.hpp"
#include "rlsp/training.hpp"

namespace rlsp {

// Checkpoint layout (all integers and floats little-endian):
//
//   "RLSP"  u32 version (1)
//   u32 layers  u32 filters  u32 scale  u8 use_neighbors  u8 use_feedback  u8 use_hidden  u8 0
//   u32 layer_count, then per layer:
//     u32 out_ch  u32 in_ch  u32 kh  u32 kw  f32[out_ch*in_ch*kh*kw] weights  f32[out_ch] bias
//   optional optimiser section:
//     "ADAM"  i64 step  f64 beta1  f64 beta2  f64 epsilon
//     per layer: f32 first-moment weights, bias; f32 second-moment weights, bias

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  CellConfig config;
  CellWeights weights;
  std::optional<AdamState> adam;
};

/// Writes to `path` + ".tmp" and renames into place.
void save_checkpoint(const std::filesystem::path& path, const CellConfig& config,
                     const CellWeights& weights, const AdamState* adam = nullptr);

/// Throws FormatError on bad magic, version, dimensions or truncation.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace rlsp
