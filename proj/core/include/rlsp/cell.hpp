// Copyright 2026 The RLSP Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <vector>

#include "rlsp/tensor.hpp"

namespace rlsp {

/// Architecture of the recurrent cell. The four ablation variants differ only in the flags.
struct CellConfig {
  int layers = 7;    // n
  int filters = 64;  // f
  int scale = 4;     // r
  bool use_neighbors = true;
  bool use_feedback = true;
  bool use_hidden = true;

  int input_channels() const;
  int residual_channels() const { return scale * scale; }
  int output_channels() const;
  /// Throws ShapeError if any field is out of range.
  void validate() const;

  friend bool operator==(const CellConfig&, const CellConfig&) = default;
};

/// "RLSP n-f", e.g. "RLSP 7-64".
std::string describe(const CellConfig& config);

/// Table rows of the ablation study: x_t, x_{t-1:t+1}, +y_{t-1}, +h_{t-1}.
enum class AblationVariant { kSingleFrame, kMultiFrame, kFeedback, kHiddenState };
CellConfig make_variant(AblationVariant variant, int layers, int filters, int scale = 4);
std::string variant_label(AblationVariant variant);
inline constexpr AblationVariant kAllVariants[] = {
    AblationVariant::kSingleFrame, AblationVariant::kMultiFrame, AblationVariant::kFeedback,
    AblationVariant::kHiddenState};

struct CellWeights {
  std::vector<ConvParams> layers;

  /// Zero-initialised weights sized for `config`.
  static CellWeights zeros(const CellConfig& config);
  std::size_t parameter_count() const;
  /// Throws ShapeError if the layer shapes do not match `config`.
  void check(const CellConfig& config) const;

  friend bool operator==(const CellWeights&, const CellWeights&) = default;
};

/// Recurrent carry: hidden features in LR space and the previous Y output in HR space.
/// `hidden` is empty when the config does not use a hidden state.
struct CellState {
  Tensor hidden;  // (B, f, H, W)
  Tensor y_prev;  // (B, 1, rH, rW)
};

struct CellOutput {
  Tensor y;  // (B, 1, rH, rW)
  CellState next_state;
};

CellState init_state(int batch, int height, int width, const CellConfig& config);

/// Y channel of an RGB LR frame replicated into r^2 channels. Shuffled up, this is the
/// nearest-neighbour upsampled luma.
Tensor residual_base(const Tensor& x_rgb, int r);

/// Channel layout: [x_{t-1} | x_t | x_{t+1} | shuffle_down(y_{t-1}) | h_{t-1}], with the
/// blocks disabled by `config` omitted.
Tensor assemble_input(const Tensor& x_prev, const Tensor& x_cur, const Tensor& x_next,
                      const CellState& state, const CellConfig& config);

/// Intermediate values of one cell step, kept for backpropagation through time.
struct StepRecord {
  std::vector<Tensor> layer_inputs;  // input to each conv layer
  std::vector<Tensor> pre_activations;  // conv output of each layer
};

CellOutput cell_forward(const Tensor& x_prev, const Tensor& x_cur, const Tensor& x_next,
                        const CellState& state, const CellWeights& weights,
                        const CellConfig& config, StepRecord* record = nullptr);

/// Inference over a whole sequence of (B, 3, H, W) LR frames starting from `initial`
/// (zero state when null). The first and last frames are edge-replicated as their own
/// missing neighbours. Returns one (B, 1, rH, rW) output per frame.
std::vector<Tensor> run_sequence(std::span<const Tensor> lr_frames, const CellWeights& weights,
                                 const CellConfig& config, const CellState* initial = nullptr);

/// Forward trajectory of an unrolled cell over a clip.
struct Trajectory {
  CellConfig config;
  std::vector<StepRecord> steps;
  std::vector<Tensor> outputs;  // y_1 .. y_T
};

/// Runs the cell over frames[1 .. size-2], with frames[0] and frames[size-1] feeding only
/// the neighbour inputs. State starts at zero. Requires at least 3 frames.
Trajectory unroll(std::span<const Tensor> lr_frames, const CellWeights& weights,
                  const CellConfig& config);

/// Gradient of a loss with respect to the weights, given dL/dy_t for every unrolled output.
/// Gradients flow through both the hidden and feedback carries; gradients reaching the
/// initial zero state and the LR inputs are discarded.
CellWeights cell_backward_through_time(const Trajectory& trajectory,
                                       std::span<const Tensor> grad_outputs,
                                       const CellWeights& weights);

}  // namespace rlsp
