// Copyright 2026 The RLSP Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "rlsp/tensor.hpp"

namespace rlsp {

enum class ColorSpace { kRgb, kY, kYCbCr };

std::string to_string(ColorSpace space);

/// Ordered frame sequence. Each frame is (1, C, H, W) with values in [0, 1].
struct VideoClip {
  std::vector<Tensor> frames;
  ColorSpace color_space = ColorSpace::kRgb;

  std::size_t size() const { return frames.size(); }
  bool empty() const { return frames.empty(); }
  int channels() const { return frames.front().channels(); }
  int height() const { return frames.front().height(); }
  int width() const { return frames.front().width(); }

  /// Throws ShapeError if frames are missing or disagree in shape/channel count.
  void validate() const;
};

/// Luma of every frame (RGB clips are converted, Y clips copied, YCbCr clips sliced).
VideoClip luma(const VideoClip& clip);

}  // namespace rlsp
