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
#include <span>
#include <vector>

#include "amw/types.hpp"

namespace amw {

struct ObjectiveConfig {
  double tau = 2.0;
  double lambda_pu = 0.1;
  double epsilon = 1e-7;
  Mode mode = Mode::kAmbiguity;
  bool pu_enabled = false;
  // Current coefficient of the evidential misleading-evidence KL term. The
  // trainer anneals it; it is unused outside evidential mode.
  double kl_coef = 0.0;
};

void validate(const ObjectiveConfig& cfg);

// Stable binary cross-entropy on a logit: max(z,0) - z y + log1p(exp(-|z|)).
double bce_from_logit(double z, int y);

// Binary entropy (natural log) of clamp(p, eps, 1 - eps).
double binary_entropy(double p, double epsilon);

// Mean binary entropy over observed labels; nullopt when nothing is observed.
std::optional<double> entropy_observed(std::span<const double> p,
                                       std::span<const std::uint8_t> m,
                                       double epsilon);

// exp(-tau H).
double ambiguity_weight(double entropy, double tau);

// Evidential Bayes-risk cross-entropy for one label under Beta(alpha, beta),
// plus kl_coef times KL of the misleading evidence against Beta(1,1).
struct EvidentialLabelLoss {
  double value;
  double d_alpha;
  double d_beta;
};
EvidentialLabelLoss evidential_label_loss(double alpha, double beta, int y,
                                          double kl_coef);

// Per-label probabilities implied by the head scores: sigmoid of logits, or
// alpha / (alpha + beta) for evidence pre-activations (N x 2K).
MatrixD scores_to_proba(Mode mode, const MatrixD& scores);

// One loss term with its gradient on the scores. In evidential mode the
// scores are evidence values e >= 0 (N x 2K) and the gradient is dL/de.
struct LossTerm {
  double value = 0.0;
  MatrixD grad;
  std::vector<double> entropy;  // per instance; NaN where nothing observed
  std::vector<double> weight;   // per instance
};

// Ambiguity-weighted masked loss. Weights are treated as constants for
// differentiation. `frozen_weights`, when given, replaces the weights
// computed from the current predictions.
LossTerm loss_amb(const MatrixD& scores, const Matrix<std::uint8_t>& y,
                  const Matrix<std::uint8_t>& m, const ObjectiveConfig& cfg,
                  const std::vector<double>* frozen_weights = nullptr);

// Weak negative penalty on unobserved labels.
LossTerm loss_pu(const MatrixD& scores, const Matrix<std::uint8_t>& m,
                 const ObjectiveConfig& cfg);

struct LossReport {
  double total = 0.0;
  double l_amb = 0.0;
  double l_pu = 0.0;
  double mean_entropy = 0.0;
  double mean_weight = 0.0;
  std::size_t n_effective = 0;
  double lambda_pu = 0.0;
  bool pu_enabled = false;
};

struct LossResult {
  LossReport report;
  MatrixD grad;
  std::vector<double> entropy;
  std::vector<double> weight;
};

LossResult loss_total(const MatrixD& scores, const Matrix<std::uint8_t>& y,
                      const Matrix<std::uint8_t>& m, const ObjectiveConfig& cfg,
                      const std::vector<double>* frozen_weights = nullptr);

}  // namespace amw
