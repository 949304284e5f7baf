// Copyright 2026 The RLSP Authors
// SPDX-License-Identifier: Apache-2.0

#include "rlsp/tensor.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "rlsp/error.hpp"

namespace rlsp {

std::string to_string(const Shape& shape) {
  std::ostringstream os;
  os << shape.batch << 'x' << shape.channels << 'x' << shape.height << 'x' << shape.width;
  return os.str();
}

Tensor::Tensor(Shape shape, float fill) : shape_(shape) {
  if (!shape.valid()) throw ShapeError("invalid tensor shape " + to_string(shape));
  data_.assign(shape.elements(), fill);
}

Tensor::Tensor(Shape shape, std::vector<float> data) : shape_(shape), data_(std::move(data)) {
  if (!shape.valid()) throw ShapeError("invalid tensor shape " + to_string(shape));
  if (data_.size() != shape.elements()) {
    throw ShapeError("tensor data length " + std::to_string(data_.size()) +
                     " does not match shape " + to_string(shape));
  }
}

void Tensor::fill(float value) { std::fill(data_.begin(), data_.end(), value); }

Tensor Tensor::item(int n) const {
  Shape s = shape_;
  s.batch = 1;
  const std::size_t count = s.elements();
  auto first = data_.begin() + static_cast<std::ptrdiff_t>(count * n);
  return Tensor(s, std::vector<float>(first, first + static_cast<std::ptrdiff_t>(count)));
}

Tensor stack_batch(std::span<const Tensor> items) {
  if (items.empty()) throw ShapeError("stack_batch: no items");
  Shape s = items.front().shape();
  for (const auto& t : items) {
    Shape ts = t.shape();
    if (ts.batch != 1 || ts.channels != s.channels || ts.height != s.height ||
        ts.width != s.width) {
      throw ShapeError("stack_batch: item shape " + to_string(ts) + " incompatible with " +
                       to_string(s));
    }
  }
  s.batch = static_cast<int>(items.size());
  std::vector<float> data;
  data.reserve(s.elements());
  for (const auto& t : items) data.insert(data.end(), t.vector().begin(), t.vector().end());
  return Tensor(s, std::move(data));
}

ConvParams::ConvParams(int in_channels, int out_channels)
    : weights(Shape{out_channels, in_channels, kKernelSize, kKernelSize}),
      bias(static_cast<std::size_t>(out_channels), 0.0f) {}

void require_same_shape(const Tensor& a, const Tensor& b, const char* what) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(what) + ": shape mismatch " + to_string(a.shape()) + " vs " +
                     to_string(b.shape()));
  }
}

// ---------------------------------------------------------------------------
// Convolution via row-tiled im2col + GEMM.

namespace {

constexpr int kTaps = kKernelSize * kKernelSize;
constexpr std::size_t kTileTarget = 512;  // columns per im2col tile

void check_conv(const Tensor& input, const ConvParams& params) {
  const Shape& ws = params.weights.shape();
  if (ws.height != kKernelSize || ws.width != kKernelSize) {
    throw ShapeError("conv2d: kernel must be 3x3, got weights " + to_string(ws));
  }
  if (params.bias.size() != static_cast<std::size_t>(ws.batch)) {
    throw ShapeError("conv2d: bias length " + std::to_string(params.bias.size()) +
                     " does not match weights " + to_string(ws));
  }
  if (input.channels() != ws.channels) {
    throw ShapeError("conv2d: input " + to_string(input.shape()) +
                     " does not match weights " + to_string(ws));
  }
}

int tile_rows(int width) {
  return std::max(1, static_cast<int>(kTileTarget / static_cast<std::size_t>(width)));
}

// col[(c * 9 + ky * 3 + kx) * cols + (y - y0) * W + x] = in[c][y + ky - 1][x + kx - 1]
void im2col(const float* in, int channels, int height, int width, int y0, int rows,
            float* col) {
  const std::size_t cols = static_cast<std::size_t>(rows) * width;
  for (int c = 0; c < channels; ++c) {
    const float* plane = in + static_cast<std::size_t>(c) * height * width;
    for (int ky = 0; ky < kKernelSize; ++ky) {
      for (int kx = 0; kx < kKernelSize; ++kx) {
        float* dst = col + (static_cast<std::size_t>(c) * kTaps + ky * kKernelSize + kx) * cols;
        for (int r = 0; r < rows; ++r) {
          const int sy = y0 + r + ky - 1;
          float* drow = dst + static_cast<std::size_t>(r) * width;
          if (sy < 0 || sy >= height) {
            std::fill(drow, drow + width, 0.0f);
            continue;
          }
          const float* srow = plane + static_cast<std::size_t>(sy) * width;
          const int shift = kx - 1;
          const int x_begin = std::max(0, -shift);
          const int x_end = std::min(width, width - shift);
          for (int x = 0; x < x_begin; ++x) drow[x] = 0.0f;
          for (int x = x_begin; x < x_end; ++x) drow[x] = srow[x + shift];
          for (int x = std::max(x_end, x_begin); x < width; ++x) drow[x] = 0.0f;
        }
      }
    }
  }
}

// Adjoint of im2col: accumulates col entries back into the input gradient.
void col2im_add(const float* col, int channels, int height, int width, int y0, int rows,
                float* grad_in) {
  const std::size_t cols = static_cast<std::size_t>(rows) * width;
  for (int c = 0; c < channels; ++c) {
    float* plane = grad_in + static_cast<std::size_t>(c) * height * width;
    for (int ky = 0; ky < kKernelSize; ++ky) {
      for (int kx = 0; kx < kKernelSize; ++kx) {
        const float* src =
            col + (static_cast<std::size_t>(c) * kTaps + ky * kKernelSize + kx) * cols;
        for (int r = 0; r < rows; ++r) {
          const int sy = y0 + r + ky - 1;
          if (sy < 0 || sy >= height) continue;
          const float* srow = src + static_cast<std::size_t>(r) * width;
          float* drow = plane + static_cast<std::size_t>(sy) * width;
          const int shift = kx - 1;
          const int x_begin = std::max(0, -shift);
          const int x_end = std::min(width, width - shift);
          for (int x = x_begin; x < x_end; ++x) drow[x + shift] += srow[x];
        }
      }
    }
  }
}

// C[M x N] += A[M x K] * B[K x N], all row-major with tight strides.
void gemm_nn(int M, int N, int K, const float* A, const float* B, float* C) {
  const int blocks = (M + 3) / 4;
#pragma omp parallel for schedule(static)
  for (int blk = 0; blk < blocks; ++blk) {
    const int m0 = blk * 4;
    const int mc = std::min(4, M - m0);
    if (mc == 4) {
      float* c0 = C + static_cast<std::size_t>(m0) * N;
      float* c1 = c0 + N;
      float* c2 = c1 + N;
      float* c3 = c2 + N;
      const float* a0 = A + static_cast<std::size_t>(m0) * K;
      const float* a1 = a0 + K;
      const float* a2 = a1 + K;
      const float* a3 = a2 + K;
      for (int k = 0; k < K; ++k) {
        const float* b = B + static_cast<std::size_t>(k) * N;
        const float w0 = a0[k], w1 = a1[k], w2 = a2[k], w3 = a3[k];
        for (int n = 0; n < N; ++n) {
          const float bv = b[n];
          c0[n] += w0 * bv;
          c1[n] += w1 * bv;
          c2[n] += w2 * bv;
          c3[n] += w3 * bv;
        }
      }
    } else {
      for (int m = m0; m < m0 + mc; ++m) {
        float* c = C + static_cast<std::size_t>(m) * N;
        const float* a = A + static_cast<std::size_t>(m) * K;
        for (int k = 0; k < K; ++k) {
          const float* b = B + static_cast<std::size_t>(k) * N;
          const float w = a[k];
          for (int n = 0; n < N; ++n) c[n] += w * b[n];
        }
      }
    }
  }
}

// C[M x K] += A[M x N] * B[K x N]^T. Transposing B first turns the dot products into
// the row updates gemm_nn vectorises; `scratch` holds the N x K transpose.
void gemm_nt(int M, int K, int N, const float* A, const float* B, float* C,
             std::vector<float>& scratch) {
  scratch.resize(static_cast<std::size_t>(N) * K);
  for (int k = 0; k < K; ++k) {
    const float* b = B + static_cast<std::size_t>(k) * N;
    for (int n = 0; n < N; ++n) scratch[static_cast<std::size_t>(n) * K + k] = b[n];
  }
  gemm_nn(M, K, N, A, scratch.data(), C);
}

// C[K x N] = A[M x K]^T * B[M x N], via gemm_nn on the K x M transpose of A.
void gemm_tn(int M, int K, int N, const float* A, const float* B, float* C,
             std::vector<float>& scratch) {
  scratch.resize(static_cast<std::size_t>(K) * M);
  for (int m = 0; m < M; ++m) {
    for (int k = 0; k < K; ++k) {
      scratch[static_cast<std::size_t>(k) * M + m] = A[static_cast<std::size_t>(m) * K + k];
    }
  }
  std::fill(C, C + static_cast<std::size_t>(K) * N, 0.0f);
  gemm_nn(K, N, M, scratch.data(), B, C);
}

}  // namespace

Tensor conv2d_forward(const Tensor& input, const ConvParams& params) {
  check_conv(input, params);
  const int N = input.batch(), C = input.channels(), H = input.height(), W = input.width();
  const int O = params.out_channels();
  const int K = C * kTaps;
  Tensor out(Shape{N, O, H, W});
  const int th = tile_rows(W);
  std::vector<float> col(static_cast<std::size_t>(K) * th * W);
  std::vector<float> acc(static_cast<std::size_t>(O) * th * W);
  const float* wts = params.weights.data().data();

  for (int n = 0; n < N; ++n) {
    const float* in = input.plane(n, 0);
    for (int y0 = 0; y0 < H; y0 += th) {
      const int rows = std::min(th, H - y0);
      const int cols = rows * W;
      im2col(in, C, H, W, y0, rows, col.data());
      for (int o = 0; o < O; ++o) {
        std::fill_n(acc.data() + static_cast<std::size_t>(o) * cols, cols, params.bias[o]);
      }
      gemm_nn(O, cols, K, wts, col.data(), acc.data());
      for (int o = 0; o < O; ++o) {
        std::copy_n(acc.data() + static_cast<std::size_t>(o) * cols, cols,
                    out.plane(n, o) + static_cast<std::size_t>(y0) * W);
      }
    }
  }
  return out;
}

void conv2d_backward_accumulate(const Tensor& grad_out, const Tensor& input,
                                const ConvParams& params, ConvParams& param_grads,
                                Tensor* grad_input) {
  check_conv(input, params);
  const int N = input.batch(), C = input.channels(), H = input.height(), W = input.width();
  const int O = params.out_channels();
  const Shape expected{N, O, H, W};
  if (grad_out.shape() != expected) {
    throw ShapeError("conv2d_backward: grad_out " + to_string(grad_out.shape()) +
                     " does not match forward output " + to_string(expected));
  }
  if (param_grads.weights.shape() != params.weights.shape() ||
      param_grads.bias.size() != params.bias.size()) {
    throw ShapeError("conv2d_backward: gradient buffers " +
                     to_string(param_grads.weights.shape()) + " do not match weights " +
                     to_string(params.weights.shape()));
  }
  if (grad_input != nullptr) {
    if (grad_input->shape() != input.shape()) *grad_input = Tensor(input.shape());
    else grad_input->fill(0.0f);
  }

  const int K = C * kTaps;
  const int th = tile_rows(W);
  std::vector<float> col(static_cast<std::size_t>(K) * th * W);
  std::vector<float> gtile(static_cast<std::size_t>(O) * th * W);
  std::vector<float> gcol(grad_input ? col.size() : 0);
  std::vector<float> col_t, wts_t;
  float* gw = param_grads.weights.data().data();
  const float* wts = params.weights.data().data();

  for (int n = 0; n < N; ++n) {
    const float* in = input.plane(n, 0);
    for (int y0 = 0; y0 < H; y0 += th) {
      const int rows = std::min(th, H - y0);
      const int cols = rows * W;
      for (int o = 0; o < O; ++o) {
        const float* g = grad_out.plane(n, o) + static_cast<std::size_t>(y0) * W;
        std::copy_n(g, cols, gtile.data() + static_cast<std::size_t>(o) * cols);
        float s = 0.0f;
        for (int i = 0; i < cols; ++i) s += g[i];
        param_grads.bias[o] += s;
      }
      im2col(in, C, H, W, y0, rows, col.data());
      gemm_nt(O, K, cols, gtile.data(), col.data(), gw, col_t);
      if (grad_input != nullptr) {
        gemm_tn(O, K, cols, wts, gtile.data(), gcol.data(), wts_t);
        col2im_add(gcol.data(), C, H, W, y0, rows, grad_input->plane(n, 0));
      }
    }
  }
}

ConvGradients conv2d_backward(const Tensor& grad_out, const Tensor& input,
                              const ConvParams& params) {
  check_conv(input, params);
  ConvGradients grads;
  grads.params = ConvParams(params.in_channels(), params.out_channels());
  grads.input = Tensor(input.shape());
  conv2d_backward_accumulate(grad_out, input, params, grads.params, &grads.input);
  return grads;
}

// ---------------------------------------------------------------------------

Tensor relu(const Tensor& input) {
  Tensor out = input;
  relu_inplace(out);
  return out;
}

void relu_inplace(Tensor& t) {
  for (float& v : t.data()) v = v > 0.0f ? v : 0.0f;
}

Tensor relu_backward(const Tensor& grad_out, const Tensor& input) {
  require_same_shape(grad_out, input, "relu_backward");
  Tensor out(grad_out.shape());
  auto g = grad_out.data();
  auto x = input.data();
  auto o = out.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = x[i] > 0.0f ? g[i] : 0.0f;
  return out;
}

Tensor concat_channels(std::span<const Tensor> parts) {
  if (parts.empty()) throw ShapeError("concat_channels: no parts");
  Shape s = parts.front().shape();
  int channels = 0;
  for (const auto& p : parts) {
    const Shape& ps = p.shape();
    if (ps.batch != s.batch || ps.height != s.height || ps.width != s.width) {
      throw ShapeError("concat_channels: part " + to_string(ps) + " incompatible with " +
                       to_string(s));
    }
    channels += ps.channels;
  }
  s.channels = channels;
  Tensor out(s);
  const std::size_t plane = s.plane();
  for (int n = 0; n < s.batch; ++n) {
    int c0 = 0;
    for (const auto& p : parts) {
      const std::size_t count = plane * p.channels();
      std::copy_n(p.plane(n, 0), count, out.plane(n, c0));
      c0 += p.channels();
    }
  }
  return out;
}

Tensor concat_channels(std::initializer_list<const Tensor*> parts) {
  std::vector<Tensor> copies;
  copies.reserve(parts.size());
  for (const Tensor* p : parts) copies.push_back(*p);
  return concat_channels(std::span<const Tensor>(copies));
}

std::vector<Tensor> split_channels(const Tensor& t, std::span<const int> sizes) {
  const int total = std::accumulate(sizes.begin(), sizes.end(), 0);
  if (total != t.channels() ||
      std::any_of(sizes.begin(), sizes.end(), [](int s) { return s < 1; })) {
    throw ShapeError("split_channels: sizes sum to " + std::to_string(total) +
                     " but tensor is " + to_string(t.shape()));
  }
  std::vector<Tensor> parts;
  parts.reserve(sizes.size());
  const std::size_t plane = t.shape().plane();
  int c0 = 0;
  for (int size : sizes) {
    Shape s = t.shape();
    s.channels = size;
    Tensor part(s);
    for (int n = 0; n < s.batch; ++n) {
      std::copy_n(t.plane(n, c0), plane * size, part.plane(n, 0));
    }
    parts.push_back(std::move(part));
    c0 += size;
  }
  return parts;
}

Tensor shuffle_up(const Tensor& t, int r) {
  if (r < 1) throw ShapeError("shuffle_up: factor must be >= 1");
  const int rr = r * r;
  if (t.channels() % rr != 0) {
    throw ShapeError("shuffle_up: channels of " + to_string(t.shape()) +
                     " not divisible by r^2 = " + std::to_string(rr));
  }
  const int N = t.batch(), Co = t.channels() / rr, H = t.height(), W = t.width();
  Tensor out(Shape{N, Co, H * r, W * r});
  for (int n = 0; n < N; ++n) {
    for (int oc = 0; oc < Co; ++oc) {
      float* dst = out.plane(n, oc);
      for (int i = 0; i < r; ++i) {
        for (int j = 0; j < r; ++j) {
          const float* src = t.plane(n, oc * rr + i * r + j);
          for (int y = 0; y < H; ++y) {
            float* drow = dst + static_cast<std::size_t>(y * r + i) * W * r + j;
            const float* srow = src + static_cast<std::size_t>(y) * W;
            for (int x = 0; x < W; ++x) drow[static_cast<std::size_t>(x) * r] = srow[x];
          }
        }
      }
    }
  }
  return out;
}

Tensor shuffle_down(const Tensor& t, int r) {
  if (r < 1) throw ShapeError("shuffle_down: factor must be >= 1");
  if (t.height() % r != 0 || t.width() % r != 0) {
    throw ShapeError("shuffle_down: spatial dims of " + to_string(t.shape()) +
                     " not divisible by " + std::to_string(r));
  }
  const int rr = r * r;
  const int N = t.batch(), C = t.channels(), H = t.height() / r, W = t.width() / r;
  Tensor out(Shape{N, C * rr, H, W});
  for (int n = 0; n < N; ++n) {
    for (int c = 0; c < C; ++c) {
      const float* src = t.plane(n, c);
      for (int i = 0; i < r; ++i) {
        for (int j = 0; j < r; ++j) {
          float* dst = out.plane(n, c * rr + i * r + j);
          for (int y = 0; y < H; ++y) {
            const float* srow = src + static_cast<std::size_t>(y * r + i) * W * r + j;
            float* drow = dst + static_cast<std::size_t>(y) * W;
            for (int x = 0; x < W; ++x) drow[x] = srow[static_cast<std::size_t>(x) * r];
          }
        }
      }
    }
  }
  return out;
}

Tensor add(const Tensor& a, const Tensor& b) {
  Tensor out = a;
  add_inplace(out, b);
  return out;
}

void add_inplace(Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add");
  auto x = a.data();
  auto y = b.data();
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
}

}  // namespace rlsp
