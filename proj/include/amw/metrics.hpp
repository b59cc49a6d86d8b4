// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The amw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "amw/dataset.hpp"
#include "amw/heads.hpp"
#include "amw/types.hpp"

namespace amw {

using LabelMatrix = Matrix<std::uint8_t>;

// All metric functions take an optional observation mask; cells with m == 0
// are excluded from every count. Passing nullptr means fully observed.

// Prediction is positive when p >= threshold.
LabelMatrix binarize(const MatrixD& p, const std::vector<double>& thresholds);

double hamming_loss(const LabelMatrix& y, const LabelMatrix& y_hat,
                    const LabelMatrix* mask = nullptr);

struct RankingLoss {
  std::optional<double> value;  // nullopt when every instance was skipped
  std::size_t skipped = 0;      // instances with no positive or no negative
};
RankingLoss ranking_loss(const LabelMatrix& y, const MatrixD& p,
                         const LabelMatrix* mask = nullptr);

struct Jaccard {
  double value = 0.0;
  std::size_t both_empty = 0;  // instances scored 1 by convention
};
Jaccard jaccard(const LabelMatrix& y, const LabelMatrix& y_hat,
                const LabelMatrix* mask = nullptr);

double micro_f1(const LabelMatrix& y, const LabelMatrix& y_hat,
                const LabelMatrix* mask = nullptr);

struct MacroF1 {
  double value = 0.0;
  std::vector<double> per_label;
  std::vector<std::size_t> degenerate;  // labels with TP = FP = FN = 0
};
MacroF1 macro_f1(const LabelMatrix& y, const LabelMatrix& y_hat,
                 const LabelMatrix* mask = nullptr);

struct AveragePrecision {
  std::optional<double> value;  // nullopt when no label has a positive
  std::vector<double> per_label;  // NaN for excluded labels
  std::size_t excluded = 0;
};
AveragePrecision average_precision(const LabelMatrix& y, const MatrixD& p,
                                   const LabelMatrix* mask = nullptr);

// ---------------------------------------------------------------------------
// Threshold tuning on the grid {0.05, 0.06, ..., 0.95}
// ---------------------------------------------------------------------------

std::vector<double> threshold_grid();

// Maximizes micro-F1; ties resolve to the smallest threshold.
double tune_threshold_global(const LabelMatrix& y, const MatrixD& p,
                             const LabelMatrix* mask = nullptr);
double tune_threshold_global(const ModelBundle& model, const Dataset& dev);

struct PerLabelThresholds {
  std::vector<double> thresholds;
  std::vector<std::size_t> flagged;  // labels without dev positives (t = 0.5)
};
// Maximizes each label's F1 independently; ties resolve to the smallest.
PerLabelThresholds tune_thresholds_per_label(const LabelMatrix& y,
                                             const MatrixD& p,
                                             const LabelMatrix* mask = nullptr);
PerLabelThresholds tune_thresholds_per_label(const ModelBundle& model,
                                             const Dataset& dev);

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

enum class ThresholdPolicy { kFixed, kGlobalTuned, kPerLabelTuned };

std::string_view to_string(ThresholdPolicy policy);
ThresholdPolicy parse_threshold_policy(std::string_view text);

struct MetricsReport {
  double hl = 0.0;
  std::optional<double> rl;
  double jaccard = 0.0;
  double mif1 = 0.0;
  double maf1 = 0.0;
  std::optional<double> ap;

  ThresholdPolicy policy = ThresholdPolicy::kFixed;
  std::vector<double> thresholds = {0.5};

  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t observed_cells = 0;
  std::size_t rl_skipped = 0;
  std::size_t ap_excluded = 0;
  std::size_t jaccard_both_empty = 0;
  std::vector<std::size_t> maf1_degenerate;
  std::vector<std::size_t> threshold_flagged;
  std::string split;
};

MetricsReport compute_metrics(const LabelMatrix& y, const MatrixD& p,
                              const LabelMatrix* mask,
                              const std::vector<double>& thresholds,
                              ThresholdPolicy policy);

// Evaluates `model` on `data`. Tuned policies fit their thresholds on `dev`,
// which is required for them.
MetricsReport evaluate(const ModelBundle& model, const Dataset& data,
                       ThresholdPolicy policy, const Dataset* dev = nullptr);

}  // namespace amw
