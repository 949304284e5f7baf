// Copyright 2026 The RLSP Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "rlsp/cell.hpp"
#include "rlsp/dataset.hpp"
#include "rlsp/degrade.hpp"
#include "rlsp/tensor.hpp"
#include "rlsp/video.hpp"

namespace rlsp {

struct TrainConfig {
  int unroll = 10;  // T; each sample holds T + 2 frames
  int batch = 4;
  double lr0 = 1e-4;
  std::vector<std::int64_t> lr_drop_steps{2'000'000, 4'000'000};
  double lr_drop_factor = 10.0;
  std::int64_t max_iters = 1000;
  std::uint64_t seed = 1;
  int crop = 16;  // LR crop edge; HR crop is crop * scale
  int val_every = 500;
  int val_window = 50;
  int log_every = 10;

  int sampled_frames() const { return unroll + 2; }
  /// Throws FormatError on out-of-range fields.
  void validate() const;
};

struct LossReport {
  std::int64_t iteration = 0;  // iterations completed, counting this one
  double train_mse = 0.0;      // measured before this iteration's update
  std::optional<double> val_mse;
  std::optional<double> val_psnr;
  double lr = 0.0;
};

struct LossAndGradient {
  double loss = 0.0;
  Tensor grad;
};

/// L = (1/k) * sum (y* - y)^2 over all k elements; grad = (2/k) * (y - y*).
LossAndGradient mse_loss(const Tensor& y, const Tensor& y_star);

/// Joint loss over a sequence of outputs; k counts the elements of every frame.
struct SequenceLoss {
  double loss = 0.0;
  std::vector<Tensor> grads;
};
SequenceLoss mse_loss(std::span<const Tensor> outputs, std::span<const Tensor> targets);

/// Uniform Xavier/Glorot initialisation: U(-a, a) with a = sqrt(6 / (fan_in + fan_out)),
/// fan_in = in_ch * 9 and fan_out = out_ch * 9 for a (out_ch, in_ch, 3, 3) shape.
Tensor xavier_init(const Shape& weight_shape, std::mt19937_64& rng);
/// Xavier weights for every layer, zero biases.
CellWeights xavier_init(const CellConfig& config, std::mt19937_64& rng);

struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::int64_t step = 0;
  CellWeights first_moment;
  CellWeights second_moment;

  static AdamState for_weights(const CellConfig& config);
};

/// One bias-corrected Adam update of every parameter; increments `state.step`.
void adam_step(CellWeights& params, const CellWeights& grads, AdamState& state, double lr);

/// Piecewise-constant: lr0 divided by lr_drop_factor once per drop step already passed.
double lr_schedule(std::int64_t iteration, const TrainConfig& config);

/// HR -> (LR frames per time step stacked over the batch, Y targets for frames 1..T).
struct PreparedBatch {
  std::vector<Tensor> lr_frames;  // T + 2 tensors (B, 3, h, w)
  std::vector<Tensor> targets;    // T tensors (B, 1, H, W)
};
PreparedBatch prepare_batch(std::span<const VideoClip> hr_clips,
                            const DegradeConfig& degradation);

struct ClipGradient {
  double loss = 0.0;
  CellWeights grads;
  std::vector<Tensor> outputs;
};

/// Loss over all T unrolled outputs and its gradient by backpropagation through time.
ClipGradient clip_loss_and_gradient(const PreparedBatch& batch, const CellWeights& weights,
                                    const CellConfig& config);

/// One optimisation step on a batch of HR clips, each with T + 2 frames.
LossReport train_clip(std::span<const VideoClip> hr_clips, CellWeights& weights, AdamState& adam,
                      const TrainConfig& train, const CellConfig& cell,
                      const DegradeConfig& degradation);

/// Pooled-MSE score of the model on full HR validation sequences.
struct ValidationScore {
  double mse = 0.0;       // mean over sequences of each sequence's pooled MSE
  double psnr_db = 0.0;   // mean over sequences of each sequence's PSNR
};
ValidationScore validate_model(std::span<const VideoClip> hr_sequences, const CellWeights& weights,
                               const CellConfig& cell, const DegradeConfig& degradation);

/// Owns the model, optimiser and data of one training run. Iteration i always draws its
/// batch from iteration_rng(seed, i), so resumed runs reproduce uninterrupted ones.
class Trainer {
 public:
  Trainer(CellConfig cell, TrainConfig train, DegradeConfig degrade,
          std::vector<VideoClip> train_set, std::vector<VideoClip> val_set = {});

  /// Fresh Xavier weights from the seed.
  void initialize();
  /// Continue from saved weights and optimiser state.
  void resume(CellWeights weights, AdamState adam);

  /// Runs one iteration; validates when the iteration count hits the cadence.
  LossReport step();
  bool done() const { return adam_.step >= train_.max_iters; }
  std::int64_t iteration() const { return adam_.step; }

  const CellWeights& weights() const { return weights_; }
  const AdamState& adam() const { return adam_; }
  const CellConfig& cell_config() const { return cell_; }
  const TrainConfig& train_config() const { return train_; }

  /// Weights with the lowest moving-average validation loss so far (current weights if
  /// no validation ran).
  const CellWeights& best_weights() const { return has_best_ ? best_weights_ : weights_; }
  std::optional<double> best_moving_average() const;

 private:
  CellConfig cell_;
  TrainConfig train_;
  DegradeConfig degrade_;
  std::vector<VideoClip> train_set_;
  std::vector<VideoClip> val_set_;
  CellWeights weights_;
  AdamState adam_;
  std::deque<double> val_history_;
  CellWeights best_weights_;
  double best_average_ = 0.0;
  bool has_best_ = false;
};

}  // namespace rlsp
