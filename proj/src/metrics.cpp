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

#include "amw/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "amw/error.hpp"

namespace amw {

namespace {

void check_same_shape(const LabelMatrix& y, std::size_t rows, std::size_t cols,
                      const LabelMatrix* mask) {
  if (y.rows() == 0 || y.cols() == 0) {
    throw ValidationError("metrics need a non-empty label matrix");
  }
  if (y.rows() != rows || y.cols() != cols) {
    throw ValidationError("metrics: prediction shape does not match labels");
  }
  if (mask && (mask->rows() != rows || mask->cols() != cols)) {
    throw ValidationError("metrics: mask shape does not match labels");
  }
}

bool observed(const LabelMatrix* mask, std::size_t i, std::size_t k) {
  return mask == nullptr || (*mask)(i, k) != 0;
}

struct Counts {
  std::size_t tp = 0, fp = 0, fn = 0;
};

double f1(const Counts& c) {
  const auto denom = 2 * c.tp + c.fp + c.fn;
  return denom == 0 ? 0.0
                    : 2.0 * static_cast<double>(c.tp) / static_cast<double>(denom);
}

Counts label_counts(const LabelMatrix& y, const LabelMatrix& y_hat,
                    const LabelMatrix* mask, std::size_t k) {
  Counts c;
  for (std::size_t i = 0; i < y.rows(); ++i) {
    if (!observed(mask, i, k)) continue;
    const bool t = y(i, k) != 0;
    const bool p = y_hat(i, k) != 0;
    c.tp += t && p;
    c.fp += !t && p;
    c.fn += t && !p;
  }
  return c;
}

// F1 of label k when thresholding its scores at t.
Counts label_counts_at(const LabelMatrix& y, const MatrixD& p,
                       const LabelMatrix* mask, std::size_t k, double t) {
  Counts c;
  for (std::size_t i = 0; i < y.rows(); ++i) {
    if (!observed(mask, i, k)) continue;
    const bool truth = y(i, k) != 0;
    const bool pred = p(i, k) >= t;
    c.tp += truth && pred;
    c.fp += !truth && pred;
    c.fn += truth && !pred;
  }
  return c;
}

}  // namespace

LabelMatrix binarize(const MatrixD& p, const std::vector<double>& thresholds) {
  if (thresholds.size() != 1 && thresholds.size() != p.cols()) {
    throw ValidationError("thresholds must have length 1 or K");
  }
  LabelMatrix out(p.rows(), p.cols());
  for (std::size_t i = 0; i < p.rows(); ++i) {
    for (std::size_t k = 0; k < p.cols(); ++k) {
      const double t = thresholds.size() == 1 ? thresholds[0] : thresholds[k];
      out(i, k) = p(i, k) >= t ? 1 : 0;
    }
  }
  return out;
}

double hamming_loss(const LabelMatrix& y, const LabelMatrix& y_hat,
                    const LabelMatrix* mask) {
  check_same_shape(y, y_hat.rows(), y_hat.cols(), mask);
  std::size_t wrong = 0, cells = 0;
  for (std::size_t i = 0; i < y.rows(); ++i) {
    for (std::size_t k = 0; k < y.cols(); ++k) {
      if (!observed(mask, i, k)) continue;
      ++cells;
      wrong += (y(i, k) != 0) != (y_hat(i, k) != 0);
    }
  }
  if (cells == 0) throw ValidationError("hamming loss: no observed cells");
  return static_cast<double>(wrong) / static_cast<double>(cells);
}

RankingLoss ranking_loss(const LabelMatrix& y, const MatrixD& p,
                         const LabelMatrix* mask) {
  check_same_shape(y, p.rows(), p.cols(), mask);
  RankingLoss out;
  double sum = 0.0;
  std::size_t used = 0;
  std::vector<double> pos, neg;
  for (std::size_t i = 0; i < y.rows(); ++i) {
    pos.clear();
    neg.clear();
    for (std::size_t k = 0; k < y.cols(); ++k) {
      if (!observed(mask, i, k)) continue;
      (y(i, k) != 0 ? pos : neg).push_back(p(i, k));
    }
    if (pos.empty() || neg.empty()) {
      ++out.skipped;
      continue;
    }
    std::size_t violations = 0;
    for (double a : pos) {
      for (double b : neg) violations += a <= b;
    }
    sum += static_cast<double>(violations) /
           static_cast<double>(pos.size() * neg.size());
    ++used;
  }
  if (used > 0) out.value = sum / static_cast<double>(used);
  return out;
}

Jaccard jaccard(const LabelMatrix& y, const LabelMatrix& y_hat,
                const LabelMatrix* mask) {
  check_same_shape(y, y_hat.rows(), y_hat.cols(), mask);
  Jaccard out;
  double sum = 0.0;
  for (std::size_t i = 0; i < y.rows(); ++i) {
    std::size_t inter = 0, uni = 0;
    for (std::size_t k = 0; k < y.cols(); ++k) {
      if (!observed(mask, i, k)) continue;
      const bool t = y(i, k) != 0;
      const bool p = y_hat(i, k) != 0;
      inter += t && p;
      uni += t || p;
    }
    if (uni == 0) {
      ++out.both_empty;
      sum += 1.0;
    } else {
      sum += static_cast<double>(inter) / static_cast<double>(uni);
    }
  }
  out.value = sum / static_cast<double>(y.rows());
  return out;
}

double micro_f1(const LabelMatrix& y, const LabelMatrix& y_hat,
                const LabelMatrix* mask) {
  check_same_shape(y, y_hat.rows(), y_hat.cols(), mask);
  Counts total;
  for (std::size_t k = 0; k < y.cols(); ++k) {
    const auto c = label_counts(y, y_hat, mask, k);
    total.tp += c.tp;
    total.fp += c.fp;
    total.fn += c.fn;
  }
  return f1(total);
}

MacroF1 macro_f1(const LabelMatrix& y, const LabelMatrix& y_hat,
                 const LabelMatrix* mask) {
  check_same_shape(y, y_hat.rows(), y_hat.cols(), mask);
  MacroF1 out;
  double sum = 0.0;
  for (std::size_t k = 0; k < y.cols(); ++k) {
    const auto c = label_counts(y, y_hat, mask, k);
    if (c.tp + c.fp + c.fn == 0) out.degenerate.push_back(k);
    out.per_label.push_back(f1(c));
    sum += out.per_label.back();
  }
  out.value = sum / static_cast<double>(y.cols());
  return out;
}

AveragePrecision average_precision(const LabelMatrix& y, const MatrixD& p,
                                   const LabelMatrix* mask) {
  check_same_shape(y, p.rows(), p.cols(), mask);
  AveragePrecision out;
  double sum = 0.0;
  std::size_t included = 0;
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < y.cols(); ++k) {
    order.clear();
    std::size_t positives = 0;
    for (std::size_t i = 0; i < y.rows(); ++i) {
      if (!observed(mask, i, k)) continue;
      order.push_back(i);
      positives += y(i, k) != 0;
    }
    if (positives == 0) {
      ++out.excluded;
      out.per_label.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return p(a, k) > p(b, k); });
    // Recall grows by 1/positives at each positive; precision is taken there.
    double ap = 0.0;
    std::size_t hits = 0;
    for (std::size_t r = 0; r < order.size(); ++r) {
      if (y(order[r], k) == 0) continue;
      ++hits;
      ap += static_cast<double>(hits) / static_cast<double>(r + 1);
    }
    ap /= static_cast<double>(positives);
    out.per_label.push_back(ap);
    sum += ap;
    ++included;
  }
  if (included > 0) out.value = sum / static_cast<double>(included);
  return out;
}

// ---------------------------------------------------------------------------

std::vector<double> threshold_grid() {
  std::vector<double> grid;
  for (int i = 5; i <= 95; ++i) grid.push_back(static_cast<double>(i) / 100.0);
  return grid;
}

double tune_threshold_global(const LabelMatrix& y, const MatrixD& p,
                             const LabelMatrix* mask) {
  check_same_shape(y, p.rows(), p.cols(), mask);
  double best_t = 0.0;
  double best = -1.0;
  for (double t : threshold_grid()) {
    Counts total;
    for (std::size_t k = 0; k < y.cols(); ++k) {
      const auto c = label_counts_at(y, p, mask, k, t);
      total.tp += c.tp;
      total.fp += c.fp;
      total.fn += c.fn;
    }
    const double score = f1(total);
    if (score > best) {
      best = score;
      best_t = t;
    }
  }
  return best_t;
}

PerLabelThresholds tune_thresholds_per_label(const LabelMatrix& y,
                                             const MatrixD& p,
                                             const LabelMatrix* mask) {
  check_same_shape(y, p.rows(), p.cols(), mask);
  PerLabelThresholds out;
  const auto grid = threshold_grid();
  for (std::size_t k = 0; k < y.cols(); ++k) {
    bool any_positive = false;
    for (std::size_t i = 0; i < y.rows() && !any_positive; ++i) {
      any_positive = observed(mask, i, k) && y(i, k) != 0;
    }
    if (!any_positive) {
      out.thresholds.push_back(0.5);
      out.flagged.push_back(k);
      continue;
    }
    double best_t = grid.front();
    double best = -1.0;
    for (double t : grid) {
      const double score = f1(label_counts_at(y, p, mask, k, t));
      if (score > best) {
        best = score;
        best_t = t;
      }
    }
    out.thresholds.push_back(best_t);
  }
  return out;
}

namespace {
const LabelMatrix* mask_of(const Dataset& data) {
  return data.fully_observed() ? nullptr : &data.mask();
}
}  // namespace

double tune_threshold_global(const ModelBundle& model, const Dataset& dev) {
  return tune_threshold_global(dev.labels(), predict_proba(model, dev),
                               mask_of(dev));
}

PerLabelThresholds tune_thresholds_per_label(const ModelBundle& model,
                                             const Dataset& dev) {
  return tune_thresholds_per_label(dev.labels(), predict_proba(model, dev),
                                   mask_of(dev));
}

// ---------------------------------------------------------------------------

std::string_view to_string(ThresholdPolicy policy) {
  switch (policy) {
    case ThresholdPolicy::kFixed:
      return "fixed_0.5";
    case ThresholdPolicy::kGlobalTuned:
      return "global_tuned";
    case ThresholdPolicy::kPerLabelTuned:
      return "per_label_tuned";
  }
  return "unknown";
}

ThresholdPolicy parse_threshold_policy(std::string_view text) {
  if (text == "fixed" || text == "fixed_0.5") return ThresholdPolicy::kFixed;
  if (text == "global" || text == "global_tuned") {
    return ThresholdPolicy::kGlobalTuned;
  }
  if (text == "per_label" || text == "per_label_tuned") {
    return ThresholdPolicy::kPerLabelTuned;
  }
  throw ValidationError("unknown threshold policy '" + std::string(text) +
                        "' (expected fixed, global or per_label)");
}

MetricsReport compute_metrics(const LabelMatrix& y, const MatrixD& p,
                              const LabelMatrix* mask,
                              const std::vector<double>& thresholds,
                              ThresholdPolicy policy) {
  check_same_shape(y, p.rows(), p.cols(), mask);
  const auto y_hat = binarize(p, thresholds);
  MetricsReport r;
  r.policy = policy;
  r.thresholds = thresholds;
  r.n = y.rows();
  r.k = y.cols();
  r.observed_cells =
      mask ? static_cast<std::size_t>(std::count(mask->data().begin(),
                                                 mask->data().end(), 1))
           : y.rows() * y.cols();
  r.hl = hamming_loss(y, y_hat, mask);
  const auto rl = ranking_loss(y, p, mask);
  r.rl = rl.value;
  r.rl_skipped = rl.skipped;
  const auto jac = jaccard(y, y_hat, mask);
  r.jaccard = jac.value;
  r.jaccard_both_empty = jac.both_empty;
  r.mif1 = micro_f1(y, y_hat, mask);
  const auto ma = macro_f1(y, y_hat, mask);
  r.maf1 = ma.value;
  r.maf1_degenerate = ma.degenerate;
  const auto ap = average_precision(y, p, mask);
  r.ap = ap.value;
  r.ap_excluded = ap.excluded;
  return r;
}

MetricsReport evaluate(const ModelBundle& model, const Dataset& data,
                       ThresholdPolicy policy, const Dataset* dev) {
  std::vector<double> thresholds = {0.5};
  std::vector<std::size_t> flagged;
  if (policy != ThresholdPolicy::kFixed) {
    if (dev == nullptr) {
      throw ValidationError("tuned threshold policies need a dev set");
    }
    if (!(dev->space() == model.space)) {
      throw ValidationError("dev label space does not match the model");
    }
    if (policy == ThresholdPolicy::kGlobalTuned) {
      thresholds = {tune_threshold_global(model, *dev)};
    } else {
      auto tuned = tune_thresholds_per_label(model, *dev);
      thresholds = std::move(tuned.thresholds);
      flagged = std::move(tuned.flagged);
    }
  }
  if (!(data.space() == model.space)) {
    throw ValidationError("data label space does not match the model");
  }
  auto report = compute_metrics(data.labels(), predict_proba(model, data),
                                mask_of(data), thresholds, policy);
  report.threshold_flagged = std::move(flagged);
  report.split = std::string(to_string(data.split()));
  return report;
}

}  // namespace amw
