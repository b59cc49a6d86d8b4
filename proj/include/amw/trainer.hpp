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
#include <span>
#include <string>
#include <vector>

#include "amw/dataset.hpp"
#include "amw/heads.hpp"
#include "amw/metrics.hpp"
#include "amw/objective.hpp"
#include "amw/optimizer.hpp"

namespace amw {

struct TrainConfig {
  std::size_t epochs = 5;
  std::size_t batch_size = 16;
  std::uint64_t seed = 42;
  ObjectiveConfig objective;  // objective.mode selects the head
  OptimizerConfig optimizer;
  double dropout = 0.1;
  // Final coefficient of the evidential KL term, reached linearly at the end
  // of the first epoch.
  double kl_coef = 0.1;
  // Stored verbatim in the returned bundle.
  std::string snapshot_json = "{}";

  Mode mode() const { return objective.mode; }
};

void validate(const TrainConfig& cfg);

std::size_t steps_per_epoch(std::size_t n, std::size_t batch_size);

// Permutation of [0, n) used in epoch `epoch`; a pure function of the seed.
std::vector<std::size_t> epoch_permutation(std::size_t n, std::uint64_t seed,
                                           std::size_t epoch);

// Loss and parameter gradients for a batch of embeddings, without dropout.
// `frozen_weights` overrides the ambiguity weights (see loss_amb).
struct BatchGradient {
  LossReport report;
  HeadParams grad;
};
BatchGradient batch_loss_and_gradient(
    const HeadParams& head, const MatrixD& h, const Matrix<std::uint8_t>& y,
    const Matrix<std::uint8_t>& m, const ObjectiveConfig& cfg,
    const std::vector<double>* frozen_weights = nullptr);

struct StepRecord {
  std::size_t step = 0;
  std::size_t epoch = 0;
  double lr = 0.0;
  double grad_norm = 0.0;
  LossReport loss;
};

struct EpochRecord {
  std::size_t epoch = 0;
  std::size_t step = 0;  // optimizer steps completed at evaluation time
  MetricsReport dev;
  double seconds = 0.0;
};

struct TrainLog {
  std::vector<StepRecord> steps;
  std::vector<EpochRecord> epochs;
  std::size_t selected_epoch = 0;
  std::size_t selected_step = 0;
  double selected_mif1 = 0.0;
};

struct TrainResult {
  ModelBundle model;
  TrainLog log;
};

// Mini-batch training with per-epoch dev evaluation at threshold 0.5. The
// returned bundle holds the parameters of the epoch with the best dev
// micro-F1 (earliest on ties). Throws NumericError on a non-finite loss.
TrainResult train(const Dataset& train_data, const Dataset& dev_data,
                  const TrainConfig& cfg);

struct SeedRun {
  std::uint64_t seed = 0;
  TrainResult result;
  MetricsReport test;
};

// Independent runs of `cfg` with each seed, evaluated on `test_data` with
// `policy` (tuned policies fit on `dev_data`).
std::vector<SeedRun> run_seeds(const Dataset& train_data,
                               const Dataset& dev_data,
                               const Dataset& test_data, TrainConfig cfg,
                               std::span<const std::uint64_t> seeds,
                               ThresholdPolicy policy = ThresholdPolicy::kFixed);

}  // namespace amw
