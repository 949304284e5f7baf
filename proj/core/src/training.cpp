// Copyright 2026 The RLSP Authors
// SPDX-License-Identifier: Apache-2.0

#include "rlsp/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rlsp/color.hpp"
#include "rlsp/error.hpp"

namespace rlsp {

void TrainConfig::validate() const {
  if (unroll < 1) throw FormatError("unroll (T) must be >= 1");
  if (batch < 1) throw FormatError("batch must be >= 1");
  if (!(lr0 > 0.0)) throw FormatError("lr0 must be > 0");
  if (!(lr_drop_factor >= 1.0)) throw FormatError("lr_drop_factor must be >= 1");
  for (std::size_t i = 0; i < lr_drop_steps.size(); ++i) {
    if (lr_drop_steps[i] < 0 || (i > 0 && lr_drop_steps[i] <= lr_drop_steps[i - 1])) {
      throw FormatError("lr_drop_steps must be non-negative and strictly increasing");
    }
  }
  if (max_iters < 0) throw FormatError("max_iters must be >= 0");
  if (crop < 1) throw FormatError("crop must be >= 1");
  if (val_every < 1) throw FormatError("val_every must be >= 1");
  if (val_window < 1) throw FormatError("val_window must be >= 1");
  if (log_every < 1) throw FormatError("log_every must be >= 1");
}

LossAndGradient mse_loss(const Tensor& y, const Tensor& y_star) {
  require_same_shape(y, y_star, "mse_loss");
  const Tensor ys[] = {y};
  const Tensor ts[] = {y_star};
  SequenceLoss s = mse_loss(ys, ts);
  return {s.loss, std::move(s.grads.front())};
}

SequenceLoss mse_loss(std::span<const Tensor> outputs, std::span<const Tensor> targets) {
  if (outputs.size() != targets.size() || outputs.empty()) {
    throw ShapeError("mse_loss: " + std::to_string(outputs.size()) + " outputs vs " +
                     std::to_string(targets.size()) + " targets");
  }
  std::size_t k = 0;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    require_same_shape(outputs[i], targets[i], "mse_loss");
    k += outputs[i].size();
  }
  SequenceLoss result;
  result.grads.reserve(outputs.size());
  const double scale = 2.0 / static_cast<double>(k);
  double sum = 0.0;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    auto y = outputs[i].data();
    auto t = targets[i].data();
    Tensor g(outputs[i].shape());
    auto gd = g.data();
    for (std::size_t j = 0; j < y.size(); ++j) {
      const double d = static_cast<double>(y[j]) - static_cast<double>(t[j]);
      sum += d * d;
      gd[j] = static_cast<float>(scale * d);
    }
    result.grads.push_back(std::move(g));
  }
  result.loss = sum / static_cast<double>(k);
  return result;
}

Tensor xavier_init(const Shape& weight_shape, std::mt19937_64& rng) {
  const double fan_in = static_cast<double>(weight_shape.channels) * weight_shape.height *
                        weight_shape.width;
  const double fan_out = static_cast<double>(weight_shape.batch) * weight_shape.height *
                         weight_shape.width;
  const double limit = std::sqrt(6.0 / (fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  Tensor t(weight_shape);
  for (float& v : t.data()) v = static_cast<float>(dist(rng));
  return t;
}

CellWeights xavier_init(const CellConfig& config, std::mt19937_64& rng) {
  CellWeights w = CellWeights::zeros(config);
  for (auto& layer : w.layers) layer.weights = xavier_init(layer.weights.shape(), rng);
  return w;
}

AdamState AdamState::for_weights(const CellConfig& config) {
  AdamState s;
  s.first_moment = CellWeights::zeros(config);
  s.second_moment = CellWeights::zeros(config);
  return s;
}

namespace {

void adam_update(std::span<float> p, std::span<const float> g, std::span<float> m,
                 std::span<float> v, const AdamState& s, double step_size, double bias2) {
  const float b1 = static_cast<float>(s.beta1);
  const float b2 = static_cast<float>(s.beta2);
  for (std::size_t i = 0; i < p.size(); ++i) {
    m[i] = b1 * m[i] + (1.0f - b1) * g[i];
    v[i] = b2 * v[i] + (1.0f - b2) * g[i] * g[i];
    const double denom = std::sqrt(static_cast<double>(v[i]) / bias2) + s.epsilon;
    p[i] = static_cast<float>(p[i] - step_size * m[i] / denom);
  }
}

}  // namespace

void adam_step(CellWeights& params, const CellWeights& grads, AdamState& state, double lr) {
  if (grads.layers.size() != params.layers.size() ||
      state.first_moment.layers.size() != params.layers.size() ||
      state.second_moment.layers.size() != params.layers.size()) {
    throw ShapeError("adam_step: parameter, gradient and moment layer counts differ");
  }
  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double bias1 = 1.0 - std::pow(state.beta1, t);
  const double bias2 = 1.0 - std::pow(state.beta2, t);
  const double step_size = lr / bias1;
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    auto& p = params.layers[l];
    const auto& g = grads.layers[l];
    auto& m = state.first_moment.layers[l];
    auto& v = state.second_moment.layers[l];
    if (g.weights.shape() != p.weights.shape() || m.weights.shape() != p.weights.shape() ||
        v.weights.shape() != p.weights.shape() || g.bias.size() != p.bias.size()) {
      throw ShapeError("adam_step: layer " + std::to_string(l) + " shape mismatch");
    }
    adam_update(p.weights.data(), g.weights.data(), m.weights.data(), v.weights.data(), state,
                step_size, bias2);
    adam_update(p.bias, g.bias, m.bias, v.bias, state, step_size, bias2);
  }
}

double lr_schedule(std::int64_t iteration, const TrainConfig& config) {
  double lr = config.lr0;
  for (std::int64_t drop : config.lr_drop_steps) {
    if (iteration >= drop) lr /= config.lr_drop_factor;
  }
  return lr;
}

PreparedBatch prepare_batch(std::span<const VideoClip> hr_clips,
                            const DegradeConfig& degradation) {
  if (hr_clips.empty()) throw ShapeError("prepare_batch: empty batch");
  const std::size_t frames = hr_clips.front().size();
  if (frames < 3) {
    throw ShapeError("prepare_batch: clips need at least 3 frames, got " + std::to_string(frames));
  }
  std::vector<VideoClip> lr;
  lr.reserve(hr_clips.size());
  for (const auto& clip : hr_clips) {
    if (clip.size() != frames) {
      throw ShapeError("prepare_batch: clips have " + std::to_string(clip.size()) + " and " +
                       std::to_string(frames) + " frames");
    }
    if (clip.color_space != ColorSpace::kRgb) throw ShapeError("prepare_batch: clips must be RGB");
    lr.push_back(degrade(clip, degradation));
  }
  PreparedBatch batch;
  std::vector<Tensor> items(hr_clips.size());
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t b = 0; b < lr.size(); ++b) items[b] = lr[b].frames[t];
    batch.lr_frames.push_back(stack_batch(items));
  }
  for (std::size_t t = 1; t + 1 < frames; ++t) {
    for (std::size_t b = 0; b < hr_clips.size(); ++b) items[b] = hr_clips[b].frames[t];
    batch.targets.push_back(rgb_to_y(stack_batch(items)));
  }
  return batch;
}

ClipGradient clip_loss_and_gradient(const PreparedBatch& batch, const CellWeights& weights,
                                    const CellConfig& config) {
  Trajectory traj = unroll(batch.lr_frames, weights, config);
  SequenceLoss loss = mse_loss(traj.outputs, batch.targets);
  ClipGradient result;
  result.loss = loss.loss;
  result.grads = cell_backward_through_time(traj, loss.grads, weights);
  result.outputs = std::move(traj.outputs);
  return result;
}

LossReport train_clip(std::span<const VideoClip> hr_clips, CellWeights& weights, AdamState& adam,
                      const TrainConfig& train, const CellConfig& cell,
                      const DegradeConfig& degradation) {
  for (const auto& clip : hr_clips) {
    if (static_cast<int>(clip.size()) < train.sampled_frames()) {
      throw ShapeError("train_clip: clip has " + std::to_string(clip.size()) +
                       " frames, need T + 2 = " + std::to_string(train.sampled_frames()));
    }
  }
  std::vector<VideoClip> windows;
  windows.reserve(hr_clips.size());
  for (const auto& clip : hr_clips) {
    VideoClip w;
    w.color_space = clip.color_space;
    w.frames.assign(clip.frames.begin(), clip.frames.begin() + train.sampled_frames());
    windows.push_back(std::move(w));
  }
  const PreparedBatch batch = prepare_batch(windows, degradation);
  ClipGradient cg = clip_loss_and_gradient(batch, weights, cell);
  LossReport report;
  report.lr = lr_schedule(adam.step, train);
  report.train_mse = cg.loss;
  adam_step(weights, cg.grads, adam, report.lr);
  report.iteration = adam.step;
  return report;
}

ValidationScore validate_model(std::span<const VideoClip> hr_sequences, const CellWeights& weights,
                               const CellConfig& cell, const DegradeConfig& degradation) {
  if (hr_sequences.empty()) throw ShapeError("validate_model: no sequences");
  ValidationScore score;
  for (const auto& hr : hr_sequences) {
    const VideoClip lr = degrade(hr, degradation);
    const auto outputs = run_sequence(lr.frames, weights, cell);
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t t = 0; t < outputs.size(); ++t) {
      const Tensor target = rgb_to_y(hr.frames[t]);
      auto y = outputs[t].data();
      auto g = target.data();
      for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = static_cast<double>(y[i]) - g[i];
        sum += d * d;
      }
      count += y.size();
    }
    const double mse = sum / static_cast<double>(count);
    score.mse += mse;
    score.psnr_db += 10.0 * std::log10(1.0 / mse);
  }
  score.mse /= static_cast<double>(hr_sequences.size());
  score.psnr_db /= static_cast<double>(hr_sequences.size());
  return score;
}

Trainer::Trainer(CellConfig cell, TrainConfig train, DegradeConfig degrade,
                 std::vector<VideoClip> train_set, std::vector<VideoClip> val_set)
    : cell_(cell),
      train_(std::move(train)),
      degrade_(degrade),
      train_set_(std::move(train_set)),
      val_set_(std::move(val_set)) {
  cell_.validate();
  train_.validate();
  degrade_.validate();
  if (degrade_.scale != cell_.scale) {
    throw FormatError("degradation scale " + std::to_string(degrade_.scale) +
                      " differs from cell scale " + std::to_string(cell_.scale));
  }
  if (train_set_.empty()) throw ShapeError("Trainer: empty training set");
  initialize();
}

void Trainer::initialize() {
  std::mt19937_64 rng(train_.seed);
  weights_ = xavier_init(cell_, rng);
  adam_ = AdamState::for_weights(cell_);
  val_history_.clear();
  has_best_ = false;
}

void Trainer::resume(CellWeights weights, AdamState adam) {
  weights.check(cell_);
  adam.first_moment.check(cell_);
  adam.second_moment.check(cell_);
  weights_ = std::move(weights);
  adam_ = std::move(adam);
}

LossReport Trainer::step() {
  auto rng = iteration_rng(train_.seed, adam_.step);
  const ClipSampling sampling{train_.sampled_frames(), train_.crop, cell_.scale};
  std::vector<VideoClip> batch;
  batch.reserve(static_cast<std::size_t>(train_.batch));
  for (int b = 0; b < train_.batch; ++b) {
    batch.push_back(sample_training_clip(train_set_, rng, sampling).clip);
  }
  LossReport report = train_clip(batch, weights_, adam_, train_, cell_, degrade_);
  if (!val_set_.empty() && adam_.step % train_.val_every == 0) {
    const ValidationScore score = validate_model(val_set_, weights_, cell_, degrade_);
    report.val_mse = score.mse;
    report.val_psnr = score.psnr_db;
    val_history_.push_back(score.mse);
    if (val_history_.size() > static_cast<std::size_t>(train_.val_window)) val_history_.pop_front();
    const double avg = std::accumulate(val_history_.begin(), val_history_.end(), 0.0) /
                       static_cast<double>(val_history_.size());
    if (!has_best_ || avg < best_average_) {
      best_average_ = avg;
      best_weights_ = weights_;
      has_best_ = true;
    }
  }
  return report;
}

std::optional<double> Trainer::best_moving_average() const {
  if (!has_best_) return std::nullopt;
  return best_average_;
}

}  // namespace rlsp
