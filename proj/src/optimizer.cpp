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

#include "amw/optimizer.hpp"

#include <cmath>

#include "amw/error.hpp"

namespace amw {

void validate(const OptimizerConfig& cfg) {
  if (!(cfg.lr >= 0.0) || !std::isfinite(cfg.lr)) {
    throw ValidationError("lr must be a finite value >= 0");
  }
  if (!(cfg.beta1 >= 0.0 && cfg.beta1 < 1.0) ||
      !(cfg.beta2 >= 0.0 && cfg.beta2 < 1.0)) {
    throw ValidationError("Adam betas must lie in [0, 1)");
  }
  if (!(cfg.eps > 0.0)) throw ValidationError("Adam eps must be > 0");
  if (!(cfg.weight_decay >= 0.0)) {
    throw ValidationError("weight_decay must be >= 0");
  }
  if (!(cfg.warmup_ratio >= 0.0 && cfg.warmup_ratio <= 1.0)) {
    throw ValidationError("warmup_ratio must lie in [0, 1]");
  }
  if (!(cfg.clip_norm > 0.0)) throw ValidationError("clip_norm must be > 0");
}

std::size_t warmup_steps(std::size_t total_steps, double warmup_ratio) {
  return static_cast<std::size_t>(
      std::ceil(warmup_ratio * static_cast<double>(total_steps)));
}

double lr_at(std::size_t step, std::size_t total_steps, double base_lr,
             double warmup_ratio) {
  if (total_steps == 0) throw ValidationError("total_steps must be >= 1");
  if (step > total_steps) throw ValidationError("step beyond total_steps");
  const auto warmup = warmup_steps(total_steps, warmup_ratio);
  if (step < warmup) {
    return base_lr * static_cast<double>(step) / static_cast<double>(warmup);
  }
  if (warmup == total_steps) return base_lr;
  return base_lr * static_cast<double>(total_steps - step) /
         static_cast<double>(total_steps - warmup);
}

double clip_global_norm(std::span<const ParamBlock> blocks, double max_norm) {
  double sq = 0.0;
  for (const auto& block : blocks) {
    for (double g : block.grads) {
      if (!std::isfinite(g)) {
        throw NumericError("non-finite gradient in parameter block '" +
                           block.name + "'");
      }
      sq += g * g;
    }
  }
  const double norm = std::sqrt(sq);
  if (norm > max_norm) {
    const double scale = max_norm / norm;
    for (const auto& block : blocks) {
      for (double& g : block.grads) g *= scale;
    }
  }
  return norm;
}

void AdamW::step(std::span<const ParamBlock> blocks, double lr) {
  if (m_.empty()) {
    for (const auto& block : blocks) {
      m_.emplace_back(block.values.size(), 0.0);
      v_.emplace_back(block.values.size(), 0.0);
    }
  }
  if (m_.size() != blocks.size()) {
    throw ValidationError("AdamW: parameter block count changed");
  }
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].values.size() != m_[b].size() ||
        blocks[b].grads.size() != m_[b].size()) {
      throw ValidationError("AdamW: shape mismatch in block '" +
                            blocks[b].name + "'");
    }
  }
  ++t_;
  const double t = static_cast<double>(t_);
  const double bias1 = 1.0 - std::pow(cfg_.beta1, t);
  const double bias2 = 1.0 - std::pow(cfg_.beta2, t);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& block = blocks[b];
    auto& m = m_[b];
    auto& v = v_[b];
    const double decay = block.decay ? lr * cfg_.weight_decay : 0.0;
    for (std::size_t i = 0; i < block.values.size(); ++i) {
      const double g = block.grads[i];
      m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g;
      v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g * g;
      const double m_hat = m[i] / bias1;
      const double v_hat = v[i] / bias2;
      double x = block.values[i];
      x -= decay * x;
      x -= lr * m_hat / (std::sqrt(v_hat) + cfg_.eps);
      block.values[i] = x;
    }
  }
}

}  // namespace amw
