// Copyright 2026 The RLSP Authors
// SPDX-License-Identifier: Apache-2.0

#include "rlsp/cell.hpp"

#include <algorithm>

#include "rlsp/color.hpp"
#include "rlsp/error.hpp"

namespace rlsp {

int CellConfig::input_channels() const {
  int channels = use_neighbors ? 9 : 3;
  if (use_feedback) channels += residual_channels();
  if (use_hidden) channels += filters;
  return channels;
}

int CellConfig::output_channels() const {
  return residual_channels() + (use_hidden ? filters : 0);
}

void CellConfig::validate() const {
  if (layers < 2) throw ShapeError("cell config: layers must be >= 2, got " + std::to_string(layers));
  if (filters < 1) throw ShapeError("cell config: filters must be >= 1, got " + std::to_string(filters));
  if (scale < 1) throw ShapeError("cell config: scale must be >= 1, got " + std::to_string(scale));
}

std::string describe(const CellConfig& config) {
  return "RLSP " + std::to_string(config.layers) + "-" + std::to_string(config.filters);
}

CellConfig make_variant(AblationVariant variant, int layers, int filters, int scale) {
  CellConfig c;
  c.layers = layers;
  c.filters = filters;
  c.scale = scale;
  c.use_neighbors = variant != AblationVariant::kSingleFrame;
  c.use_feedback = variant == AblationVariant::kFeedback || variant == AblationVariant::kHiddenState;
  c.use_hidden = variant == AblationVariant::kHiddenState;
  return c;
}

std::string variant_label(AblationVariant variant) {
  switch (variant) {
    case AblationVariant::kSingleFrame: return "x_t";
    case AblationVariant::kMultiFrame: return "x_{t-1:t+1}";
    case AblationVariant::kFeedback: return "x_{t-1:t+1} + y_{t-1}";
    case AblationVariant::kHiddenState: return "x_{t-1:t+1} + y_{t-1} + h_{t-1}";
  }
  return "?";
}

CellWeights CellWeights::zeros(const CellConfig& config) {
  config.validate();
  CellWeights w;
  w.layers.reserve(static_cast<std::size_t>(config.layers));
  w.layers.emplace_back(config.input_channels(), config.filters);
  for (int i = 1; i + 1 < config.layers; ++i) w.layers.emplace_back(config.filters, config.filters);
  w.layers.emplace_back(config.filters, config.output_channels());
  return w;
}

std::size_t CellWeights::parameter_count() const {
  std::size_t count = 0;
  for (const auto& l : layers) count += l.parameter_count();
  return count;
}

void CellWeights::check(const CellConfig& config) const {
  config.validate();
  const CellWeights expected = zeros(config);
  if (layers.size() != expected.layers.size()) {
    throw ShapeError("cell weights: " + std::to_string(layers.size()) + " layers, config " +
                     describe(config) + " needs " + std::to_string(expected.layers.size()));
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (layers[i].weights.shape() != expected.layers[i].weights.shape() ||
        layers[i].bias.size() != expected.layers[i].bias.size()) {
      throw ShapeError("cell weights: layer " + std::to_string(i) + " has shape " +
                       to_string(layers[i].weights.shape()) + ", config needs " +
                       to_string(expected.layers[i].weights.shape()));
    }
  }
}

CellState init_state(int batch, int height, int width, const CellConfig& config) {
  config.validate();
  CellState s;
  if (config.use_hidden) s.hidden = Tensor(Shape{batch, config.filters, height, width});
  s.y_prev = Tensor(Shape{batch, 1, height * config.scale, width * config.scale});
  return s;
}

Tensor residual_base(const Tensor& x_rgb, int r) {
  if (x_rgb.channels() != 3) {
    throw ShapeError("residual_base: expected RGB input, got " + to_string(x_rgb.shape()));
  }
  const Tensor y = rgb_to_y(x_rgb);
  const int rr = r * r;
  Shape s = y.shape();
  s.channels = rr;
  Tensor out(s);
  const std::size_t plane = s.plane();
  for (int n = 0; n < s.batch; ++n) {
    for (int c = 0; c < rr; ++c) std::copy_n(y.plane(n, 0), plane, out.plane(n, c));
  }
  return out;
}

Tensor assemble_input(const Tensor& x_prev, const Tensor& x_cur, const Tensor& x_next,
                      const CellState& state, const CellConfig& config) {
  if (x_cur.channels() != 3) {
    throw ShapeError("assemble_input: x_t must be RGB, got " + to_string(x_cur.shape()));
  }
  std::vector<const Tensor*> parts;
  if (config.use_neighbors) {
    require_same_shape(x_prev, x_cur, "assemble_input x_{t-1}");
    require_same_shape(x_next, x_cur, "assemble_input x_{t+1}");
    parts = {&x_prev, &x_cur, &x_next};
  } else {
    parts = {&x_cur};
  }
  Tensor feedback;
  if (config.use_feedback) {
    const Shape want{x_cur.batch(), 1, x_cur.height() * config.scale,
                     x_cur.width() * config.scale};
    if (state.y_prev.shape() != want) {
      throw ShapeError("assemble_input: y_{t-1} is " + to_string(state.y_prev.shape()) +
                       ", expected " + to_string(want));
    }
    feedback = shuffle_down(state.y_prev, config.scale);
    parts.push_back(&feedback);
  }
  if (config.use_hidden) {
    const Shape want{x_cur.batch(), config.filters, x_cur.height(), x_cur.width()};
    if (state.hidden.shape() != want) {
      throw ShapeError("assemble_input: h_{t-1} is " + to_string(state.hidden.shape()) +
                       ", expected " + to_string(want));
    }
    parts.push_back(&state.hidden);
  }
  std::vector<Tensor> copies;
  copies.reserve(parts.size());
  for (const Tensor* p : parts) copies.push_back(*p);
  return concat_channels(std::span<const Tensor>(copies));
}

CellOutput cell_forward(const Tensor& x_prev, const Tensor& x_cur, const Tensor& x_next,
                        const CellState& state, const CellWeights& weights,
                        const CellConfig& config, StepRecord* record) {
  weights.check(config);
  Tensor features = assemble_input(x_prev, x_cur, x_next, state, config);
  if (record != nullptr) {
    record->layer_inputs.clear();
    record->pre_activations.clear();
  }
  const int last = config.layers - 1;
  for (int i = 0; i < last; ++i) {
    Tensor pre = conv2d_forward(features, weights.layers[static_cast<std::size_t>(i)]);
    if (record != nullptr) record->layer_inputs.push_back(std::move(features));
    features = relu(pre);
    if (record != nullptr) record->pre_activations.push_back(std::move(pre));
  }
  Tensor head = conv2d_forward(features, weights.layers[static_cast<std::size_t>(last)]);
  if (record != nullptr) {
    record->layer_inputs.push_back(std::move(features));
    record->pre_activations.push_back(head);
  }

  const int rr = config.residual_channels();
  CellOutput out;
  Tensor residual;
  if (config.use_hidden) {
    const int sizes[] = {rr, config.filters};
    auto parts = split_channels(head, sizes);
    residual = std::move(parts[0]);
    out.next_state.hidden = relu(parts[1]);
  } else {
    residual = std::move(head);
  }
  add_inplace(residual, residual_base(x_cur, config.scale));
  out.y = shuffle_up(residual, config.scale);
  out.next_state.y_prev = out.y;
  return out;
}

std::vector<Tensor> run_sequence(std::span<const Tensor> lr_frames, const CellWeights& weights,
                                 const CellConfig& config, const CellState* initial) {
  if (lr_frames.empty()) throw ShapeError("run_sequence: no frames");
  const Tensor& first = lr_frames.front();
  CellState state = initial != nullptr
                        ? *initial
                        : init_state(first.batch(), first.height(), first.width(), config);
  const std::size_t count = lr_frames.size();
  std::vector<Tensor> outputs;
  outputs.reserve(count);
  for (std::size_t t = 0; t < count; ++t) {
    const Tensor& prev = lr_frames[t == 0 ? 0 : t - 1];
    const Tensor& next = lr_frames[t + 1 < count ? t + 1 : count - 1];
    CellOutput o = cell_forward(prev, lr_frames[t], next, state, weights, config);
    outputs.push_back(std::move(o.y));
    state = std::move(o.next_state);
  }
  return outputs;
}

Trajectory unroll(std::span<const Tensor> lr_frames, const CellWeights& weights,
                  const CellConfig& config) {
  if (lr_frames.size() < 3) {
    throw ShapeError("unroll: need at least 3 frames, got " + std::to_string(lr_frames.size()));
  }
  const Tensor& first = lr_frames.front();
  Trajectory traj;
  traj.config = config;
  CellState state = init_state(first.batch(), first.height(), first.width(), config);
  const std::size_t steps = lr_frames.size() - 2;
  traj.steps.resize(steps);
  traj.outputs.reserve(steps);
  for (std::size_t s = 0; s < steps; ++s) {
    CellOutput o = cell_forward(lr_frames[s], lr_frames[s + 1], lr_frames[s + 2], state, weights,
                                config, &traj.steps[s]);
    traj.outputs.push_back(o.y);
    state = std::move(o.next_state);
  }
  return traj;
}

CellWeights cell_backward_through_time(const Trajectory& trajectory,
                                       std::span<const Tensor> grad_outputs,
                                       const CellWeights& weights) {
  const CellConfig& config = trajectory.config;
  if (trajectory.steps.empty() || trajectory.steps.size() != trajectory.outputs.size()) {
    throw ShapeError("cell_backward_through_time: missing forward trajectory");
  }
  if (grad_outputs.size() != trajectory.outputs.size()) {
    throw ShapeError("cell_backward_through_time: " + std::to_string(grad_outputs.size()) +
                     " output gradients for " + std::to_string(trajectory.outputs.size()) +
                     " steps");
  }
  weights.check(config);
  CellWeights grads = CellWeights::zeros(config);
  const int rr = config.residual_channels();
  const int frame_channels = config.use_neighbors ? 9 : 3;
  const int last = config.layers - 1;

  Tensor carry_y;  // dL/dy_t arriving through the next step's feedback input
  Tensor carry_h;  // dL/dh_t arriving through the next step's hidden input
  for (std::size_t s = trajectory.steps.size(); s-- > 0;) {
    const StepRecord& rec = trajectory.steps[s];
    if (rec.layer_inputs.size() != static_cast<std::size_t>(config.layers)) {
      throw ShapeError("cell_backward_through_time: step record is incomplete");
    }
    require_same_shape(grad_outputs[s], trajectory.outputs[s], "cell_backward_through_time");

    Tensor g_y = grad_outputs[s];
    if (!carry_y.empty()) add_inplace(g_y, carry_y);
    Tensor g_head = shuffle_down(g_y, config.scale);
    if (config.use_hidden) {
      const int sizes[] = {rr, config.filters};
      auto pre_parts = split_channels(rec.pre_activations.back(), sizes);
      Tensor g_hidden = carry_h.empty() ? Tensor(pre_parts[1].shape())
                                        : relu_backward(carry_h, pre_parts[1]);
      g_head = concat_channels({&g_head, &g_hidden});
    }

    const bool need_state_grad = s > 0 && (config.use_feedback || config.use_hidden);
    Tensor g = std::move(g_head);
    for (int i = last; i >= 0; --i) {
      const auto idx = static_cast<std::size_t>(i);
      const bool need_input = i > 0 || need_state_grad;
      Tensor g_in;
      conv2d_backward_accumulate(g, rec.layer_inputs[idx], weights.layers[idx],
                                 grads.layers[idx], need_input ? &g_in : nullptr);
      if (!need_input) break;
      g = i > 0 ? relu_backward(g_in, rec.pre_activations[idx - 1]) : std::move(g_in);
    }

    carry_y = Tensor();
    carry_h = Tensor();
    if (need_state_grad) {
      std::vector<int> sizes{frame_channels};
      if (config.use_feedback) sizes.push_back(rr);
      if (config.use_hidden) sizes.push_back(config.filters);
      auto parts = split_channels(g, sizes);
      std::size_t k = 1;
      if (config.use_feedback) carry_y = shuffle_up(parts[k++], config.scale);
      if (config.use_hidden) carry_h = std::move(parts[k]);
    }
  }
  return grads;
}

}  // namespace rlsp
