// Copyright 2026 The RLSP Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rlsp/cell.hpp"
#include "rlsp/degrade.hpp"
#include "rlsp/training.hpp"

namespace rlsp {

/// Everything a command needs, read from plain-text `key = value` files.
///
///   # comment
///   layers = 7
///   filters = 64
///   lr_drop_steps = 2000000, 4000000
///
/// Keys mirror the fields of CellConfig, TrainConfig and DegradeConfig; `scale` sets both
/// the cell and the degradation factor. Unknown keys are rejected.
struct RunConfig {
  CellConfig cell;
  TrainConfig train;
  DegradeConfig degrade;
  int threads = 0;  // 0 = runtime default

  /// Applies one `key = value` assignment. Throws FormatError for unknown keys or bad values.
  void set(std::string_view key, std::string_view value);
  /// Applies "key=value" (whitespace around '=' allowed).
  void apply_override(std::string_view assignment);
  void validate() const;

  /// Canonical text form; parsing it back yields an identical config.
  std::string to_text() const;

  static RunConfig parse(std::string_view text, std::string_view source = "<config>");
  static RunConfig load(const std::filesystem::path& path);

  static const std::vector<std::string>& keys();

  friend bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.to_text() == b.to_text();
  }
};

}  // namespace rlsp
