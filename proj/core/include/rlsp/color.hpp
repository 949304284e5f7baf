// Copyright 2026 The RLSP Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>

#include "rlsp/tensor.hpp"

namespace rlsp {

// ITU-R BT.601 studio swing on [0, 1] values: Y in [16, 235] / 255, Cb/Cr in [16, 240] / 255.

/// (B, 3, H, W) RGB -> (B, 1, H, W) luma.
Tensor rgb_to_y(const Tensor& rgb);
/// (B, 3, H, W) RGB -> (B, 3, H, W) YCbCr.
Tensor rgb_to_ycbcr(const Tensor& rgb);

struct ColorConversionStats {
  std::size_t clamped = 0;
  std::size_t total = 0;
  double clamped_fraction() const { return total == 0 ? 0.0 : double(clamped) / double(total); }
};

/// (B, 3, H, W) YCbCr -> RGB clamped to [0, 1]. Clamped sample counts go to `stats`.
Tensor ycbcr_to_rgb(const Tensor& ycbcr, ColorConversionStats* stats = nullptr);

inline constexpr float kLumaBlack = 16.0f / 255.0f;
inline constexpr float kLumaWhite = 235.0f / 255.0f;
inline constexpr float kChromaNeutral = 128.0f / 255.0f;

}  // namespace rlsp
