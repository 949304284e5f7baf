// Copyright 2026 The RLSP Authors
// SPDX-License-Identifier: Apache-2.0

#include "rlsp/degrade.hpp"

#include <cmath>
#include <numeric>

#include "rlsp/error.hpp"

namespace rlsp {

void DegradeConfig::validate() const {
  if (!(sigma > 0.0)) throw FormatError("degrade: sigma must be > 0");
  if (scale < 1) throw FormatError("degrade: scale must be >= 1");
  if (kernel_size < 3 || kernel_size % 2 == 0) {
    throw FormatError("degrade: kernel_size must be odd and >= 3, got " +
                      std::to_string(kernel_size));
  }
}

std::vector<double> gaussian_taps(double sigma, int size) {
  if (size < 3 || size % 2 == 0) {
    throw std::invalid_argument("gaussian kernel size must be odd and >= 3, got " +
                                std::to_string(size));
  }
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian sigma must be > 0");
  const int half = size / 2;
  std::vector<double> taps(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) {
    const double d = i - half;
    taps[static_cast<std::size_t>(i)] = std::exp(-d * d / (2.0 * sigma * sigma));
  }
  const double sum = std::accumulate(taps.begin(), taps.end(), 0.0);
  for (double& t : taps) t /= sum;
  return taps;
}

std::vector<std::vector<double>> gaussian_kernel(double sigma, int size) {
  const auto taps = gaussian_taps(sigma, size);
  std::vector<std::vector<double>> k(taps.size(), std::vector<double>(taps.size()));
  for (std::size_t i = 0; i < taps.size(); ++i)
    for (std::size_t j = 0; j < taps.size(); ++j) k[i][j] = taps[i] * taps[j];
  return k;
}

Tensor gaussian_blur(const Tensor& t, double sigma, int size) {
  const auto taps = gaussian_taps(sigma, size);
  const int half = size / 2;
  const int H = t.height(), W = t.width();
  Tensor out(t.shape());
  std::vector<double> tmp(static_cast<std::size_t>(H) * W);
  for (int n = 0; n < t.batch(); ++n) {
    for (int c = 0; c < t.channels(); ++c) {
      const float* src = t.plane(n, c);
      for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
          double acc = 0.0;
          for (int k = 0; k < size; ++k) {
            acc += taps[static_cast<std::size_t>(k)] *
                   src[static_cast<std::size_t>(y) * W + reflect_index(x + k - half, W)];
          }
          tmp[static_cast<std::size_t>(y) * W + x] = acc;
        }
      }
      float* dst = out.plane(n, c);
      for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
          double acc = 0.0;
          for (int k = 0; k < size; ++k) {
            acc += taps[static_cast<std::size_t>(k)] *
                   tmp[static_cast<std::size_t>(reflect_index(y + k - half, H)) * W + x];
          }
          dst[static_cast<std::size_t>(y) * W + x] = static_cast<float>(acc);
        }
      }
    }
  }
  return out;
}

Tensor degrade_frame(const Tensor& hr, const DegradeConfig& cfg) {
  cfg.validate();
  const int r = cfg.scale;
  if (hr.height() % r != 0 || hr.width() % r != 0) {
    throw ShapeError("degrade: frame " + to_string(hr.shape()) + " not divisible by scale " +
                     std::to_string(r));
  }
  const Tensor blurred = gaussian_blur(hr, cfg.sigma, cfg.kernel_size);
  Shape s = hr.shape();
  s.height /= r;
  s.width /= r;
  Tensor lr(s);
  for (int n = 0; n < s.batch; ++n)
    for (int c = 0; c < s.channels; ++c)
      for (int y = 0; y < s.height; ++y)
        for (int x = 0; x < s.width; ++x) lr.at(n, c, y, x) = blurred.at(n, c, y * r, x * r);
  return lr;
}

VideoClip degrade(const VideoClip& hr, const DegradeConfig& cfg) {
  hr.validate();
  VideoClip lr;
  lr.color_space = hr.color_space;
  lr.frames.reserve(hr.size());
  for (const auto& f : hr.frames) lr.frames.push_back(degrade_frame(f, cfg));
  return lr;
}

}  // namespace rlsp
