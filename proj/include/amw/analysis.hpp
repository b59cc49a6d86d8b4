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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "amw/dataset.hpp"
#include "amw/heads.hpp"
#include "amw/metrics.hpp"

namespace amw {

// Performance stratified by observed-label entropy.
struct EntropyBin {
  double h_lo = 0.0;  // smallest entropy in the bin
  double h_hi = 0.0;  // smallest entropy of the next bin; max for the last
  std::size_t count = 0;
  double h_mean = 0.0;
  double w_mean = 0.0;
  double mif1 = 0.0;
  std::optional<double> ap;
};

struct EntropyBinReport {
  double tau = 0.0;
  std::size_t skipped = 0;  // instances with no observed label
  std::vector<EntropyBin> bins;
};

EntropyBinReport entropy_bins(const ModelBundle& model, const Dataset& data,
                              std::size_t n_bins = 5, double tau = 2.0,
                              double epsilon = 1e-7);

struct LabelUncertainty {
  std::size_t label = 0;
  std::string name;
  double h_mean = 0.0;
  double h_std = 0.0;
  double p_mean = 0.0;
  double p_std = 0.0;
};

// Sorted by mean entropy, descending.
struct LabelUncertaintyReport {
  std::vector<LabelUncertainty> labels;
};

LabelUncertaintyReport label_uncertainty(const ModelBundle& model,
                                         const Dataset& data,
                                         double epsilon = 1e-7);
// Same statistics from a precomputed probability matrix.
LabelUncertaintyReport label_uncertainty(const LabelSpace& space,
                                         const MatrixD& p,
                                         double epsilon = 1e-7);

// One trained run entering the stability aggregation.
struct RunSummary {
  std::string train_name;
  Mode mode = Mode::kBaseline;
  LabelSpace space = LabelSpace({"label"});
  MetricsReport report;
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
};

struct StabilityRow {
  std::string train_name;
  Mode mode = Mode::kBaseline;
  std::size_t n = 0;
  MeanStd hl, rl, jaccard, mif1, maf1, ap;
};

struct StabilityReport {
  std::vector<StabilityRow> rows;  // ordered by train name, then mode
};

MeanStd mean_std(std::vector<double> values);

// Groups by (train name, mode). Members of a group must share a LabelSpace.
StabilityReport aggregate_seeds(const std::vector<RunSummary>& runs);

struct Neighbor {
  std::size_t bank_index = 0;
  std::string bank_id;
  double similarity = 0.0;
  std::vector<std::string> labels;  // observed positives of the bank row
};

struct NeighborResult {
  std::size_t query_index = 0;
  std::string query_id;
  std::vector<Neighbor> neighbors;
};

double cosine_similarity(std::span<const float> a, std::span<const float> b);

// Exact top-k by cosine similarity, ties to the lower bank index.
std::vector<NeighborResult> nearest_neighbors(const Dataset& query,
                                              const Dataset& bank,
                                              std::size_t k = 1);

}  // namespace amw
