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

#include "amw/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "amw/error.hpp"
#include "amw/heads.hpp"
#include "amw/special_functions.hpp"

namespace amw {

namespace {

void check_shapes(const MatrixD& scores, const Matrix<std::uint8_t>& m,
                  Mode mode) {
  if (scores.rows() == 0) throw ValidationError("batch must not be empty");
  if (m.rows() != scores.rows() ||
      scores.cols() != head_outputs(mode, m.cols())) {
    throw ValidationError("scores do not match the label/mask shape");
  }
}

std::size_t observed_count(std::span<const std::uint8_t> m) {
  std::size_t n = 0;
  for (auto v : m) n += v;
  return n;
}

}  // namespace

void validate(const ObjectiveConfig& cfg) {
  if (!(cfg.tau >= 0.0) || !std::isfinite(cfg.tau)) {
    throw ValidationError("tau must be a finite value >= 0");
  }
  if (!(cfg.lambda_pu >= 0.0) || !std::isfinite(cfg.lambda_pu)) {
    throw ValidationError("lambda_pu must be a finite value >= 0");
  }
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 0.5)) {
    throw ValidationError("epsilon must lie in (0, 0.5)");
  }
  if (!(cfg.kl_coef >= 0.0) || !std::isfinite(cfg.kl_coef)) {
    throw ValidationError("kl_coef must be a finite value >= 0");
  }
}

double bce_from_logit(double z, int y) {
  return std::max(z, 0.0) - z * static_cast<double>(y) +
         std::log1p(std::exp(-std::abs(z)));
}

double binary_entropy(double p, double epsilon) {
  const double q = std::clamp(p, epsilon, 1.0 - epsilon);
  return -(q * std::log(q) + (1.0 - q) * std::log1p(-q));
}

std::optional<double> entropy_observed(std::span<const double> p,
                                       std::span<const std::uint8_t> m,
                                       double epsilon) {
  if (p.size() != m.size()) throw ValidationError("entropy: shape mismatch");
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (m[k] == 0) continue;
    sum += binary_entropy(p[k], epsilon);
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

double ambiguity_weight(double entropy, double tau) {
  return std::exp(-tau * entropy);
}

EvidentialLabelLoss evidential_label_loss(double alpha, double beta, int y,
                                          double kl_coef) {
  const double s = alpha + beta;
  const double psi_s = digamma(s);
  const double psi1_s = trigamma(s);
  EvidentialLabelLoss out{};
  if (y != 0) {
    out.value = psi_s - digamma(alpha);
    out.d_alpha = psi1_s - trigamma(alpha);
    out.d_beta = psi1_s;
  } else {
    out.value = psi_s - digamma(beta);
    out.d_alpha = psi1_s;
    out.d_beta = psi1_s - trigamma(beta);
  }
  if (kl_coef > 0.0) {
    // Evidence for the true outcome is removed before the KL term.
    if (y != 0) {
      const auto kl = beta_kl_uniform(1.0, beta);
      out.value += kl_coef * kl.value;
      out.d_beta += kl_coef * kl.d_b;
    } else {
      const auto kl = beta_kl_uniform(alpha, 1.0);
      out.value += kl_coef * kl.value;
      out.d_alpha += kl_coef * kl.d_a;
    }
  }
  return out;
}

MatrixD scores_to_proba(Mode mode, const MatrixD& scores) {
  if (mode != Mode::kEvidential) {
    MatrixD p(scores.rows(), scores.cols());
    for (std::size_t i = 0; i < p.data().size(); ++i) {
      p.data()[i] = sigmoid(scores.data()[i]);
    }
    return p;
  }
  const auto k = scores.cols() / 2;
  MatrixD p(scores.rows(), k);
  for (std::size_t i = 0; i < scores.rows(); ++i) {
    for (std::size_t l = 0; l < k; ++l) {
      const double a = scores(i, 2 * l) + 1.0;
      const double b = scores(i, 2 * l + 1) + 1.0;
      p(i, l) = a / (a + b);
    }
  }
  return p;
}

LossTerm loss_amb(const MatrixD& scores, const Matrix<std::uint8_t>& y,
                  const Matrix<std::uint8_t>& m, const ObjectiveConfig& cfg,
                  const std::vector<double>* frozen_weights) {
  check_shapes(scores, m, cfg.mode);
  if (y.rows() != m.rows() || y.cols() != m.cols()) {
    throw ValidationError("labels and mask differ in shape");
  }
  const auto n = scores.rows();
  const auto k = m.cols();
  if (frozen_weights && frozen_weights->size() != n) {
    throw ValidationError("frozen weights do not match the batch");
  }
  const bool evidential = cfg.mode == Mode::kEvidential;
  const auto p = scores_to_proba(cfg.mode, scores);

  LossTerm out;
  out.grad = MatrixD(scores.rows(), scores.cols(), 0.0);
  out.entropy.assign(n, std::numeric_limits<double>::quiet_NaN());
  out.weight.assign(n, 1.0);
  const double inv_n = 1.0 / static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto mi = m.row(i);
    const auto observed = observed_count(mi);
    const auto h = entropy_observed(p.row(i), mi, cfg.epsilon);
    if (h) out.entropy[i] = *h;
    if (frozen_weights) {
      out.weight[i] = (*frozen_weights)[i];
    } else if (cfg.mode == Mode::kAmbiguity && h) {
      out.weight[i] = ambiguity_weight(*h, cfg.tau);
    }
    if (observed == 0) continue;

    const double w = out.weight[i];
    const double inv_obs = 1.0 / static_cast<double>(observed);
    const double scale = w * inv_obs * inv_n;
    double label_sum = 0.0;
    for (std::size_t l = 0; l < k; ++l) {
      if (mi[l] == 0) continue;
      if (evidential) {
        const auto e = evidential_label_loss(scores(i, 2 * l) + 1.0,
                                             scores(i, 2 * l + 1) + 1.0,
                                             y(i, l), cfg.kl_coef);
        label_sum += e.value;
        out.grad(i, 2 * l) = scale * e.d_alpha;
        out.grad(i, 2 * l + 1) = scale * e.d_beta;
      } else {
        const double z = scores(i, l);
        label_sum += bce_from_logit(z, y(i, l));
        out.grad(i, l) = scale * (p(i, l) - static_cast<double>(y(i, l)));
      }
    }
    sum += w * (label_sum * inv_obs);
  }
  out.value = sum * inv_n;
  return out;
}

LossTerm loss_pu(const MatrixD& scores, const Matrix<std::uint8_t>& m,
                 const ObjectiveConfig& cfg) {
  check_shapes(scores, m, cfg.mode);
  const auto n = scores.rows();
  const auto k = m.cols();
  const bool evidential = cfg.mode == Mode::kEvidential;
  LossTerm out;
  out.grad = MatrixD(scores.rows(), scores.cols(), 0.0);
  const double inv_n = 1.0 / static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < k; ++l) {
      if (m(i, l) != 0) continue;
      if (evidential) {
        const auto e = evidential_label_loss(scores(i, 2 * l) + 1.0,
                                             scores(i, 2 * l + 1) + 1.0, 0, 0.0);
        sum += e.value;
        out.grad(i, 2 * l) = e.d_alpha * inv_n;
        out.grad(i, 2 * l + 1) = e.d_beta * inv_n;
      } else {
        const double z = scores(i, l);
        sum += bce_from_logit(z, 0);
        out.grad(i, l) = sigmoid(z) * inv_n;
      }
    }
  }
  out.value = sum * inv_n;
  return out;
}

LossResult loss_total(const MatrixD& scores, const Matrix<std::uint8_t>& y,
                      const Matrix<std::uint8_t>& m, const ObjectiveConfig& cfg,
                      const std::vector<double>* frozen_weights) {
  validate(cfg);
  auto amb = loss_amb(scores, y, m, cfg, frozen_weights);
  const auto pu = loss_pu(scores, m, cfg);

  LossResult out;
  out.report.l_amb = amb.value;
  out.report.l_pu = pu.value;
  out.report.lambda_pu = cfg.lambda_pu;
  out.report.pu_enabled = cfg.pu_enabled;
  out.report.total =
      cfg.pu_enabled ? amb.value + cfg.lambda_pu * pu.value : amb.value;
  out.grad = std::move(amb.grad);
  if (cfg.pu_enabled) {
    for (std::size_t i = 0; i < out.grad.data().size(); ++i) {
      out.grad.data()[i] += cfg.lambda_pu * pu.grad.data()[i];
    }
  }
  double h_sum = 0.0;
  double w_sum = 0.0;
  std::size_t effective = 0;
  for (std::size_t i = 0; i < amb.entropy.size(); ++i) {
    if (std::isnan(amb.entropy[i])) continue;
    h_sum += amb.entropy[i];
    w_sum += amb.weight[i];
    ++effective;
  }
  out.report.n_effective = effective;
  if (effective > 0) {
    out.report.mean_entropy = h_sum / static_cast<double>(effective);
    out.report.mean_weight = w_sum / static_cast<double>(effective);
  }
  out.entropy = std::move(amb.entropy);
  out.weight = std::move(amb.weight);
  return out;
}

}  // namespace amw
