// Copyright 2026 The RLSP Authors
// SPDX-License-Identifier: Apache-2.0

#include "rlsp/color.hpp"

#include <algorithm>
#include <array>

#include "rlsp/error.hpp"

namespace rlsp {

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

// Rows produce Y, Cb, Cr from R, G, B (all on [0, 1]), before the offsets.
constexpr Mat3 kForward = {{
    {65.481 / 255.0, 128.553 / 255.0, 24.966 / 255.0},
    {-37.797 / 255.0, -74.203 / 255.0, 112.0 / 255.0},
    {112.0 / 255.0, -93.786 / 255.0, -18.214 / 255.0},
}};
constexpr std::array<double, 3> kOffset = {16.0 / 255.0, 128.0 / 255.0, 128.0 / 255.0};

Mat3 invert(const Mat3& m) {
  const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  Mat3 inv{};
  inv[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
  inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
  inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
  inv[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det;
  inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
  inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
  inv[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det;
  inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
  inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
  return inv;
}

const Mat3& inverse_matrix() {
  static const Mat3 inv = invert(kForward);
  return inv;
}

void require_rgb(const Tensor& t, const char* what) {
  if (t.channels() != 3) {
    throw ShapeError(std::string(what) + ": expected 3 channels, got " + to_string(t.shape()));
  }
}

}  // namespace

Tensor rgb_to_y(const Tensor& rgb) {
  require_rgb(rgb, "rgb_to_y");
  Shape s = rgb.shape();
  s.channels = 1;
  Tensor out(s);
  const std::size_t plane = s.plane();
  for (int n = 0; n < s.batch; ++n) {
    const float* r = rgb.plane(n, 0);
    const float* g = rgb.plane(n, 1);
    const float* b = rgb.plane(n, 2);
    float* y = out.plane(n, 0);
    for (std::size_t i = 0; i < plane; ++i) {
      y[i] = static_cast<float>(kOffset[0] + kForward[0][0] * r[i] + kForward[0][1] * g[i] +
                                kForward[0][2] * b[i]);
    }
  }
  return out;
}

Tensor rgb_to_ycbcr(const Tensor& rgb) {
  require_rgb(rgb, "rgb_to_ycbcr");
  Tensor out(rgb.shape());
  const std::size_t plane = rgb.shape().plane();
  for (int n = 0; n < rgb.batch(); ++n) {
    const float* src[3] = {rgb.plane(n, 0), rgb.plane(n, 1), rgb.plane(n, 2)};
    for (int c = 0; c < 3; ++c) {
      float* dst = out.plane(n, c);
      for (std::size_t i = 0; i < plane; ++i) {
        dst[i] = static_cast<float>(kOffset[c] + kForward[c][0] * src[0][i] +
                                    kForward[c][1] * src[1][i] + kForward[c][2] * src[2][i]);
      }
    }
  }
  return out;
}

Tensor ycbcr_to_rgb(const Tensor& ycbcr, ColorConversionStats* stats) {
  require_rgb(ycbcr, "ycbcr_to_rgb");
  const Mat3& inv = inverse_matrix();
  Tensor out(ycbcr.shape());
  const std::size_t plane = ycbcr.shape().plane();
  std::size_t clamped = 0;
  for (int n = 0; n < ycbcr.batch(); ++n) {
    const float* src[3] = {ycbcr.plane(n, 0), ycbcr.plane(n, 1), ycbcr.plane(n, 2)};
    for (int c = 0; c < 3; ++c) {
      float* dst = out.plane(n, c);
      for (std::size_t i = 0; i < plane; ++i) {
        const double v = inv[c][0] * (src[0][i] - kOffset[0]) +
                         inv[c][1] * (src[1][i] - kOffset[1]) +
                         inv[c][2] * (src[2][i] - kOffset[2]);
        const double clipped = std::clamp(v, 0.0, 1.0);
        if (clipped != v) ++clamped;
        dst[i] = static_cast<float>(clipped);
      }
    }
  }
  if (stats != nullptr) {
    stats->clamped += clamped;
    stats->total += out.size();
  }
  return out;
}

}  // namespace rlsp
