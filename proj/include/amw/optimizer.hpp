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
#include <span>
#include <string>
#include <vector>

namespace amw {

struct OptimizerConfig {
  double lr = 2e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.01;
  double warmup_ratio = 0.06;
  double clip_norm = 1.0;
};

void validate(const OptimizerConfig& cfg);

std::size_t warmup_steps(std::size_t total_steps, double warmup_ratio);

// Linear ramp from 0 to base_lr over the warmup steps, then linear decay to 0
// at total_steps.
double lr_at(std::size_t step, std::size_t total_steps, double base_lr,
             double warmup_ratio);

// A named parameter block with its gradient. Blocks with decay == false
// (biases) are exempt from weight decay.
struct ParamBlock {
  std::string name;
  std::span<double> values;
  std::span<double> grads;
  bool decay = true;
};

// Scales all gradients so their joint L2 norm is at most max_norm and returns
// the norm before clipping. Throws NumericError naming the first block that
// holds a non-finite entry; nothing is modified in that case.
double clip_global_norm(std::span<const ParamBlock> blocks, double max_norm);

// AdamW with decoupled weight decay and bias-corrected moments.
class AdamW {
 public:
  explicit AdamW(OptimizerConfig cfg) : cfg_(cfg) {}

  // Applies one update at learning rate lr. Moment buffers are created on the
  // first call and must keep their shapes afterwards.
  void step(std::span<const ParamBlock> blocks, double lr);

  std::size_t steps_taken() const { return t_; }
  const OptimizerConfig& config() const { return cfg_; }

 private:
  OptimizerConfig cfg_;
  std::size_t t_ = 0;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
};

}  // namespace amw
