// Copyright 2026 The RLSP Authors
// SPDX-License-Identifier: Apache-2.0

#include "rlsp/ablation.hpp"

#include <chrono>
#include <cstdio>
#include <ostream>

#include "rlsp/error.hpp"

namespace rlsp {

std::vector<AblationRow> run_ablation(int layers, int filters, const TrainConfig& train,
                                      const DegradeConfig& degradation,
                                      std::span<const VideoClip> train_set,
                                      std::span<const VideoClip> val_set,
                                      const AblationBudget& budget,
                                      const AblationProgress& progress) {
  if (val_set.empty()) throw ShapeError("run_ablation: empty validation set");
  std::vector<AblationRow> rows;
  for (AblationVariant variant : kAllVariants) {
    AblationRow row;
    row.variant = variant;
    row.label = variant_label(variant);
    row.config = make_variant(variant, layers, filters, degradation.scale);

    // Validation inside the loop is not needed; the final weights are scored below.
    Trainer trainer(row.config, train, degradation,
                    std::vector<VideoClip>(train_set.begin(), train_set.end()));
    const auto start = std::chrono::steady_clock::now();
    while (!trainer.done()) {
      const LossReport report = trainer.step();
      row.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      row.iterations = trainer.iteration();
      if (progress) progress(row, report);
      if (budget.max_seconds > 0.0 && row.seconds >= budget.max_seconds) break;
    }
    const ValidationScore score = validate_model(val_set, trainer.weights(), row.config, degradation);
    row.val_mse = score.mse;
    row.val_psnr_db = score.psnr_db;
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_ablation_csv(std::ostream& os, std::span<const AblationRow> rows) {
  os << "configuration,layers,filters,iterations,seconds,val_mse,val_psnr_db\n";
  char buf[128];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%.3f,%.9g,%.6f", row.seconds, row.val_mse, row.val_psnr_db);
    os << '"' << row.label << "\"," << row.config.layers << ',' << row.config.filters << ','
       << row.iterations << ',' << buf << '\n';
  }
}

}  // namespace rlsp
