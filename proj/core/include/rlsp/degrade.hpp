// Copyright 2026 The RLSP Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "rlsp/tensor.hpp"
#include "rlsp/video.hpp"

namespace rlsp {

/// HR -> LR degradation: Gaussian blur on the HR grid, then keep pixel (0, 0) of every
/// r x r block.
struct DegradeConfig {
  double sigma = 1.5;   // blur std, HR pixels
  int scale = 4;        // decimation factor r
  int kernel_size = 13;

  void validate() const;
};

/// Normalised 1D Gaussian taps, centre at index size / 2.
std::vector<double> gaussian_taps(double sigma, int size);

/// size x size separable, normalised, symmetric 2D kernel (row-major).
std::vector<std::vector<double>> gaussian_kernel(double sigma, int size);

/// Separable per-channel blur with half-sample symmetric borders (edge pixel repeated).
Tensor gaussian_blur(const Tensor& t, double sigma, int size);

Tensor degrade_frame(const Tensor& hr, const DegradeConfig& cfg);
VideoClip degrade(const VideoClip& hr, const DegradeConfig& cfg);

/// Maps any integer coordinate into [0, n) by half-sample symmetric reflection.
inline int reflect_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - 1 - i;
}

}  // namespace rlsp
