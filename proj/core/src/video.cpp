// Copyright 2026 The RLSP Authors
// SPDX-License-Identifier: Apache-2.0

#include "rlsp/video.hpp"

#include "rlsp/color.hpp"
#include "rlsp/error.hpp"

namespace rlsp {

std::string to_string(ColorSpace space) {
  switch (space) {
    case ColorSpace::kRgb: return "RGB";
    case ColorSpace::kY: return "Y";
    case ColorSpace::kYCbCr: return "YCbCr";
  }
  return "?";
}

void VideoClip::validate() const {
  if (frames.empty()) throw ShapeError("video clip has no frames");
  const int expected_channels = color_space == ColorSpace::kY ? 1 : 3;
  const Shape first = frames.front().shape();
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const Shape s = frames[i].shape();
    if (s.batch != 1 || s.channels != expected_channels) {
      throw ShapeError("frame " + std::to_string(i) + " has shape " + to_string(s) + ", expected " +
                       std::to_string(expected_channels) + " channel(s) for " +
                       to_string(color_space));
    }
    if (s != first) {
      throw ShapeError("frame " + std::to_string(i) + " has shape " + to_string(s) +
                       " but frame 0 has " + to_string(first));
    }
  }
}

VideoClip luma(const VideoClip& clip) {
  clip.validate();
  VideoClip out;
  out.color_space = ColorSpace::kY;
  out.frames.reserve(clip.size());
  for (const auto& f : clip.frames) {
    switch (clip.color_space) {
      case ColorSpace::kRgb: out.frames.push_back(rgb_to_y(f)); break;
      case ColorSpace::kY: out.frames.push_back(f); break;
      case ColorSpace::kYCbCr: {
        Shape s = f.shape();
        s.channels = 1;
        Tensor y(s);
        std::copy_n(f.plane(0, 0), s.plane(), y.plane(0, 0));
        out.frames.push_back(std::move(y));
        break;
      }
    }
  }
  return out;
}

}  // namespace rlsp
