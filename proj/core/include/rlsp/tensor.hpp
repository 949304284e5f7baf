// Copyright 2026 The RLSP Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace rlsp {

/// Dimensions of a rank-4 NCHW tensor.
struct Shape {
  int batch = 1;
  int channels = 1;
  int height = 1;
  int width = 1;

  std::size_t elements() const {
    return static_cast<std::size_t>(batch) * channels * height * width;
  }
  std::size_t plane() const { return static_cast<std::size_t>(height) * width; }
  bool valid() const { return batch >= 1 && channels >= 1 && height >= 1 && width >= 1; }

  friend bool operator==(const Shape&, const Shape&) = default;
};

std::string to_string(const Shape& shape);

/// Dense float32 tensor in NCHW order: index = ((n * C + c) * H + y) * W + x.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, float fill = 0.0f);
  Tensor(Shape shape, std::vector<float> data);

  const Shape& shape() const { return shape_; }
  int batch() const { return shape_.batch; }
  int channels() const { return shape_.channels; }
  int height() const { return shape_.height; }
  int width() const { return shape_.width; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::span<float> data() { return data_; }
  std::span<const float> data() const { return data_; }
  const std::vector<float>& vector() const { return data_; }

  float& at(int n, int c, int y, int x) { return data_[offset(n, c, y, x)]; }
  float at(int n, int c, int y, int x) const { return data_[offset(n, c, y, x)]; }

  /// Pointer to the start of plane (n, c).
  float* plane(int n, int c) { return data_.data() + offset(n, c, 0, 0); }
  const float* plane(int n, int c) const { return data_.data() + offset(n, c, 0, 0); }

  void fill(float value);

  /// Batch item n as a standalone (1, C, H, W) tensor.
  Tensor item(int n) const;

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  std::size_t offset(int n, int c, int y, int x) const {
    return ((static_cast<std::size_t>(n) * shape_.channels + c) * shape_.height + y) *
               shape_.width + x;
  }

  Shape shape_{};
  std::vector<float> data_;
};

/// Stack (1, C, H, W) tensors along the batch axis.
Tensor stack_batch(std::span<const Tensor> items);

/// 3x3 convolution parameters: weights (out_ch, in_ch, 3, 3) and one bias per output channel.
struct ConvParams {
  Tensor weights;
  std::vector<float> bias;

  ConvParams() = default;
  ConvParams(int in_channels, int out_channels);

  int in_channels() const { return weights.shape().channels; }
  int out_channels() const { return weights.shape().batch; }
  std::size_t parameter_count() const { return weights.size() + bias.size(); }

  friend bool operator==(const ConvParams&, const ConvParams&) = default;
};

inline constexpr int kKernelSize = 3;

/// Zero-padded "same" cross-correlation with a 3x3 kernel plus bias.
Tensor conv2d_forward(const Tensor& input, const ConvParams& params);

struct ConvGradients {
  Tensor input;
  ConvParams params;
};

/// Backward pass of conv2d_forward. Parameter gradients are freshly allocated.
ConvGradients conv2d_backward(const Tensor& grad_out, const Tensor& input,
                              const ConvParams& params);

/// Same as conv2d_backward but accumulates parameter gradients into `param_grads`
/// and skips the input gradient when `grad_input` is null.
void conv2d_backward_accumulate(const Tensor& grad_out, const Tensor& input,
                                const ConvParams& params, ConvParams& param_grads,
                                Tensor* grad_input);

Tensor relu(const Tensor& input);
void relu_inplace(Tensor& t);
/// Passes gradient where input > 0; zero at and below 0.
Tensor relu_backward(const Tensor& grad_out, const Tensor& input);

Tensor concat_channels(std::span<const Tensor> parts);
Tensor concat_channels(std::initializer_list<const Tensor*> parts);
std::vector<Tensor> split_channels(const Tensor& t, std::span<const int> sizes);

/// Depth-to-space. Input channel oc * r^2 + i * r + j lands at subpixel (i, j) of the
/// r x r block of output channel oc.
Tensor shuffle_up(const Tensor& t, int r);
/// Space-to-depth, the exact inverse of shuffle_up.
Tensor shuffle_down(const Tensor& t, int r);

Tensor add(const Tensor& a, const Tensor& b);
void add_inplace(Tensor& a, const Tensor& b);

/// Throws ShapeError naming both shapes if they differ.
void require_same_shape(const Tensor& a, const Tensor& b, const char* what);

}  // namespace rlsp
