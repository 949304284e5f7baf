// Copyright 2026 The RLSP Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rlsp/cell.hpp"
#include "rlsp/degrade.hpp"
#include "rlsp/training.hpp"
#include "rlsp/video.hpp"

namespace rlsp {

struct AblationRow {
  AblationVariant variant = AblationVariant::kSingleFrame;
  std::string label;
  CellConfig config;
  std::int64_t iterations = 0;
  double seconds = 0.0;
  double val_mse = 0.0;
  double val_psnr_db = 0.0;
};

/// Stops a variant at train.max_iters iterations or after `max_seconds` of wall time,
/// whichever comes first. A non-positive `max_seconds` disables the time limit.
struct AblationBudget {
  double max_seconds = 0.0;
};

using AblationProgress = std::function<void(const AblationRow& row, const LossReport& report)>;

/// Trains every variant in kAllVariants with the same seed, data and budget, then scores
/// the final weights on `val_set`.
std::vector<AblationRow> run_ablation(int layers, int filters, const TrainConfig& train,
                                      const DegradeConfig& degradation,
                                      std::span<const VideoClip> train_set,
                                      std::span<const VideoClip> val_set,
                                      const AblationBudget& budget = {},
                                      const AblationProgress& progress = {});

/// CSV: configuration,layers,filters,iterations,seconds,val_mse,val_psnr_db
void write_ablation_csv(std::ostream& os, std::span<const AblationRow> rows);

}  // namespace rlsp
