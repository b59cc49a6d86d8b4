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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "amw/dataset.hpp"
#include "amw/types.hpp"

namespace amw {

// Affine map from an embedding to per-output scores. For the linear head the
// outputs are K logits; for the evidential head they are 2K evidence
// pre-activations, interleaved as (positive, negative) per label.
struct HeadParams {
  MatrixD weight;             // outputs x d
  std::vector<double> bias;   // outputs

  HeadParams() = default;
  HeadParams(std::size_t outputs, std::size_t dim)
      : weight(outputs, dim), bias(outputs, 0.0) {}

  std::size_t outputs() const { return bias.size(); }
  std::size_t dim() const { return weight.cols(); }
  bool operator==(const HeadParams&) const = default;
};

std::size_t head_outputs(Mode mode, std::size_t num_labels);

// Weights ~ N(0, 1/d) from the seed, biases zero.
HeadParams init_head(Mode mode, std::size_t num_labels, std::size_t dim,
                     std::uint64_t seed);

double sigmoid(double z);
double softplus(double a);

// Pre-activation scores W h + b written into `out` (size outputs()).
void affine_forward(const HeadParams& head, std::span<const double> h,
                    std::span<double> out);

struct LinearOutput {
  std::vector<double> z;
  std::vector<double> p;
};

struct EvidentialOutput {
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<double> p;
};

LinearOutput linear_forward(const HeadParams& head, std::span<const double> h);
EvidentialOutput evidential_forward(const HeadParams& head,
                                    std::span<const double> h);

// Accumulates parameter gradients for one instance into `grad`.
// `upstream` is dL/dz for the linear head, or dL/d(evidence) for the
// evidential head; in the latter case it is chained through softplus, which
// needs the pre-activations `pre` (ignored for the linear head).
void head_backward(Mode mode, std::span<const double> h,
                   std::span<const double> upstream,
                   std::span<const double> pre, HeadParams& grad);

// ---------------------------------------------------------------------------
// Model bundle
// ---------------------------------------------------------------------------

struct ModelBundle {
  Mode mode = Mode::kBaseline;
  HeadParams head;
  LabelSpace space = LabelSpace({"label"});
  // One global threshold or one per label.
  std::vector<double> thresholds = {0.5};
  // JSON text describing the training configuration.
  std::string config_json = "{}";

  std::size_t dim() const { return head.dim(); }
  std::size_t num_labels() const { return space.size(); }
  double threshold(std::size_t k) const {
    return thresholds.size() == 1 ? thresholds[0] : thresholds.at(k);
  }
};

void validate(const ModelBundle& bundle);

// Per-label probabilities for every instance (no dropout).
MatrixD predict_proba(const ModelBundle& bundle, const Dataset& data);

// Rounds all stored reals to float32, as persisted on disk.
ModelBundle round_to_storage(ModelBundle bundle);

void save_model(const ModelBundle& bundle, const std::filesystem::path& path);
ModelBundle load_model(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_model(const ModelBundle& bundle);
ModelBundle decode_model(std::span<const std::uint8_t> bytes);

}  // namespace amw
