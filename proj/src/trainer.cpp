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

#include "amw/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "amw/error.hpp"
#include "amw/rng.hpp"

namespace amw {

void validate(const TrainConfig& cfg) {
  if (cfg.epochs < 1) throw ValidationError("epochs must be >= 1");
  if (cfg.batch_size < 1) throw ValidationError("batch_size must be >= 1");
  if (!(cfg.dropout >= 0.0 && cfg.dropout < 1.0)) {
    throw ValidationError("dropout must lie in [0, 1)");
  }
  if (!(cfg.kl_coef >= 0.0) || !std::isfinite(cfg.kl_coef)) {
    throw ValidationError("kl_coef must be a finite value >= 0");
  }
  validate(cfg.objective);
  validate(cfg.optimizer);
}

std::size_t steps_per_epoch(std::size_t n, std::size_t batch_size) {
  return (n + batch_size - 1) / batch_size;
}

std::vector<std::size_t> epoch_permutation(std::size_t n, std::uint64_t seed,
                                           std::size_t epoch) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(hash_combine(hash_combine(seed, stream::kShuffle), epoch));
  rng.shuffle(order.begin(), order.end());
  return order;
}

BatchGradient batch_loss_and_gradient(const HeadParams& head, const MatrixD& h,
                                      const Matrix<std::uint8_t>& y,
                                      const Matrix<std::uint8_t>& m,
                                      const ObjectiveConfig& cfg,
                                      const std::vector<double>* frozen_weights) {
  const auto n = h.rows();
  const auto outputs = head.outputs();
  if (n == 0) throw ValidationError("batch must not be empty");
  if (outputs != head_outputs(cfg.mode, m.cols())) {
    throw ValidationError("head outputs do not match mode and label count");
  }
  MatrixD pre(n, outputs);
  for (std::size_t i = 0; i < n; ++i) affine_forward(head, h.row(i), pre.row(i));

  const bool evidential = cfg.mode == Mode::kEvidential;
  MatrixD evidence;
  if (evidential) {
    evidence = MatrixD(n, outputs);
    for (std::size_t i = 0; i < pre.data().size(); ++i) {
      evidence.data()[i] = softplus(pre.data()[i]);
    }
  }
  const auto loss =
      loss_total(evidential ? evidence : pre, y, m, cfg, frozen_weights);

  BatchGradient out;
  out.report = loss.report;
  out.grad = HeadParams(outputs, head.dim());
  for (std::size_t i = 0; i < n; ++i) {
    head_backward(cfg.mode, h.row(i), loss.grad.row(i), pre.row(i), out.grad);
  }
  return out;
}

namespace {

bool all_finite(const HeadParams& head) {
  return std::all_of(head.weight.data().begin(), head.weight.data().end(),
                     [](double v) { return std::isfinite(v); }) &&
         std::all_of(head.bias.begin(), head.bias.end(),
                     [](double v) { return std::isfinite(v); });
}

}  // namespace

TrainResult train(const Dataset& train_data, const Dataset& dev_data,
                  const TrainConfig& cfg) {
  validate(cfg);
  if (!(train_data.space() == dev_data.space())) {
    throw ValidationError("train and dev label spaces differ");
  }
  if (train_data.dim() != dev_data.dim()) {
    throw ValidationError("train and dev embedding dimensions differ");
  }
  const auto n = train_data.size();
  const auto dim = train_data.dim();
  const auto k = train_data.num_labels();
  const auto mode = cfg.mode();

  ModelBundle current;
  current.mode = mode;
  current.space = train_data.space();
  current.head = init_head(mode, k, dim, cfg.seed);
  current.thresholds = {0.5};
  current.config_json = cfg.snapshot_json;

  const auto per_epoch = steps_per_epoch(n, cfg.batch_size);
  const auto total_steps = cfg.epochs * per_epoch;
  AdamW optimizer(cfg.optimizer);
  ObjectiveConfig objective = cfg.objective;
  const double keep_scale = 1.0 / (1.0 - cfg.dropout);

  TrainResult result;
  HeadParams best_head = current.head;
  double best_mif1 = -1.0;
  std::size_t step = 0;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto started = std::chrono::steady_clock::now();
    const auto order = epoch_permutation(n, cfg.seed, epoch);
    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const auto rows = std::min(cfg.batch_size, n - start);
      MatrixD h(rows, dim);
      Matrix<std::uint8_t> y(rows, k), m(rows, k);
      const auto step_seed = hash_combine(cfg.seed, step);
      for (std::size_t r = 0; r < rows; ++r) {
        const auto i = order[start + r];
        const auto src = train_data.embeddings().row(i);
        for (std::size_t j = 0; j < dim; ++j) {
          double v = src[j];
          if (cfg.dropout > 0.0) {
            const bool drop =
                counter_uniform(step_seed, stream::kDropout, i, j) < cfg.dropout;
            v = drop ? 0.0 : v * keep_scale;
          }
          h(r, j) = v;
        }
        std::copy_n(train_data.labels().row(i).begin(), k, y.row(r).begin());
        std::copy_n(train_data.mask().row(i).begin(), k, m.row(r).begin());
      }

      objective.kl_coef =
          cfg.kl_coef * std::min(1.0, static_cast<double>(step) /
                                          static_cast<double>(per_epoch));
      auto batch = batch_loss_and_gradient(current.head, h, y, m, objective);
      if (!std::isfinite(batch.report.total)) {
        throw NumericError("non-finite loss at step " + std::to_string(step));
      }

      const ParamBlock blocks[] = {
          {"weight", current.head.weight.data(), batch.grad.weight.data(), true},
          {"bias", current.head.bias, batch.grad.bias, false},
      };
      StepRecord record;
      record.step = step;
      record.epoch = epoch;
      record.grad_norm = clip_global_norm(blocks, cfg.optimizer.clip_norm);
      record.lr = lr_at(step, total_steps, cfg.optimizer.lr,
                        cfg.optimizer.warmup_ratio);
      record.loss = batch.report;
      optimizer.step(blocks, record.lr);
      if (!all_finite(current.head)) {
        throw NumericError("non-finite parameters after step " +
                           std::to_string(step));
      }
      result.log.steps.push_back(record);
      ++step;
    }

    EpochRecord epoch_record;
    epoch_record.epoch = epoch;
    epoch_record.step = step;
    epoch_record.dev = evaluate(current, dev_data, ThresholdPolicy::kFixed);
    epoch_record.seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - started)
                               .count();
    if (epoch_record.dev.mif1 > best_mif1) {
      best_mif1 = epoch_record.dev.mif1;
      best_head = current.head;
      result.log.selected_epoch = epoch;
      result.log.selected_step = step;
      result.log.selected_mif1 = best_mif1;
    }
    result.log.epochs.push_back(std::move(epoch_record));
  }

  current.head = std::move(best_head);
  result.model = std::move(current);
  return result;
}

std::vector<SeedRun> run_seeds(const Dataset& train_data,
                               const Dataset& dev_data,
                               const Dataset& test_data, TrainConfig cfg,
                               std::span<const std::uint64_t> seeds,
                               ThresholdPolicy policy) {
  if (seeds.empty()) throw ValidationError("need at least one seed");
  std::vector<SeedRun> runs;
  for (const auto seed : seeds) {
    cfg.seed = seed;
    SeedRun run;
    run.seed = seed;
    run.result = train(train_data, dev_data, cfg);
    run.test = evaluate(run.result.model, test_data, policy, &dev_data);
    runs.push_back(std::move(run));
  }
  return runs;
}

}  // namespace amw
