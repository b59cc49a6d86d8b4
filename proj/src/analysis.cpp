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

#include "amw/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

#include "amw/error.hpp"
#include "amw/objective.hpp"

namespace amw {

EntropyBinReport entropy_bins(const ModelBundle& model, const Dataset& data,
                              std::size_t n_bins, double tau, double epsilon) {
  if (n_bins == 0) throw ValidationError("need at least one bin");
  if (!(tau >= 0.0)) throw ValidationError("tau must be >= 0");
  const auto p = predict_proba(model, data);

  EntropyBinReport report;
  report.tau = tau;
  std::vector<std::size_t> members;
  std::vector<double> entropy(data.size(), 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto h = entropy_observed(p.row(i), data.mask().row(i), epsilon);
    if (!h) {
      ++report.skipped;
      continue;
    }
    entropy[i] = *h;
    members.push_back(i);
  }
  if (members.size() < n_bins) {
    throw ValidationError("fewer evaluable instances (" +
                          std::to_string(members.size()) + ") than bins (" +
                          std::to_string(n_bins) + ")");
  }
  std::stable_sort(members.begin(), members.end(),
                   [&](std::size_t a, std::size_t b) {
                     return entropy[a] < entropy[b];
                   });

  const auto total = members.size();
  const auto k = data.num_labels();
  for (std::size_t b = 0; b < n_bins; ++b) {
    const auto lo = b * total / n_bins;
    const auto hi = (b + 1) * total / n_bins;
    EntropyBin bin;
    bin.count = hi - lo;
    bin.h_lo = entropy[members[lo]];
    bin.h_hi = hi < total ? entropy[members[hi]] : entropy[members[total - 1]];

    LabelMatrix y(bin.count, k), m(bin.count, k);
    MatrixD pb(bin.count, k);
    double h_sum = 0.0;
    double w_sum = 0.0;
    for (std::size_t r = 0; r < bin.count; ++r) {
      const auto i = members[lo + r];
      h_sum += entropy[i];
      w_sum += ambiguity_weight(entropy[i], tau);
      for (std::size_t l = 0; l < k; ++l) {
        y(r, l) = data.labels()(i, l);
        m(r, l) = data.mask()(i, l);
        pb(r, l) = p(i, l);
      }
    }
    bin.h_mean = h_sum / static_cast<double>(bin.count);
    bin.w_mean = w_sum / static_cast<double>(bin.count);
    const auto y_hat = binarize(pb, {0.5});
    bin.mif1 = micro_f1(y, y_hat, &m);
    bin.ap = average_precision(y, pb, &m).value;
    report.bins.push_back(bin);
  }
  return report;
}

LabelUncertaintyReport label_uncertainty(const LabelSpace& space,
                                         const MatrixD& p, double epsilon) {
  if (p.rows() == 0) throw ValidationError("label uncertainty needs data");
  if (p.cols() != space.size()) {
    throw ValidationError("probability matrix does not match the label space");
  }
  LabelUncertaintyReport report;
  std::vector<double> hs(p.rows()), ps(p.rows());
  for (std::size_t k = 0; k < p.cols(); ++k) {
    for (std::size_t i = 0; i < p.rows(); ++i) {
      ps[i] = p(i, k);
      hs[i] = binary_entropy(p(i, k), epsilon);
    }
    const auto h = mean_std(hs);
    const auto pr = mean_std(ps);
    report.labels.push_back({k, space.name(k), h.mean, h.std, pr.mean, pr.std});
  }
  std::stable_sort(report.labels.begin(), report.labels.end(),
                   [](const LabelUncertainty& a, const LabelUncertainty& b) {
                     return a.h_mean > b.h_mean;
                   });
  return report;
}

LabelUncertaintyReport label_uncertainty(const ModelBundle& model,
                                         const Dataset& data, double epsilon) {
  return label_uncertainty(data.space(), predict_proba(model, data), epsilon);
}

MeanStd mean_std(std::vector<double> values) {
  if (values.empty()) throw ValidationError("mean_std of an empty set");
  // Fixed summation order makes the result independent of input order.
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return {mean, std::sqrt(sq / n)};
}

StabilityReport aggregate_seeds(const std::vector<RunSummary>& runs) {
  if (runs.empty()) throw ValidationError("no runs to aggregate");
  std::map<std::tuple<std::string, Mode>, std::vector<const RunSummary*>> groups;
  for (const auto& run : runs) {
    auto& group = groups[{run.train_name, run.mode}];
    if (!group.empty() && !(group.front()->space == run.space)) {
      throw ValidationError("inconsistent label space within group '" +
                            run.train_name + "/" +
                            std::string(to_string(run.mode)) + "'");
    }
    group.push_back(&run);
  }
  StabilityReport report;
  for (const auto& [key, members] : groups) {
    StabilityRow row;
    row.train_name = std::get<0>(key);
    row.mode = std::get<1>(key);
    row.n = members.size();
    auto collect = [&](auto get) {
      std::vector<double> v;
      for (const auto* m : members) {
        if (auto x = get(m->report)) v.push_back(*x);
      }
      return v.empty() ? MeanStd{std::nan(""), std::nan("")} : mean_std(v);
    };
    using R = MetricsReport;
    row.hl = collect([](const R& r) { return std::optional<double>(r.hl); });
    row.rl = collect([](const R& r) { return r.rl; });
    row.jaccard = collect([](const R& r) { return std::optional<double>(r.jaccard); });
    row.mif1 = collect([](const R& r) { return std::optional<double>(r.mif1); });
    row.maf1 = collect([](const R& r) { return std::optional<double>(r.maf1); });
    row.ap = collect([](const R& r) { return r.ap; });
    report.rows.push_back(std::move(row));
  }
  return report;
}

double cosine_similarity(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) throw ValidationError("cosine: dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    dot += static_cast<double>(a[j]) * b[j];
    na += static_cast<double>(a[j]) * a[j];
    nb += static_cast<double>(b[j]) * b[j];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<NeighborResult> nearest_neighbors(const Dataset& query,
                                              const Dataset& bank,
                                              std::size_t k) {
  if (query.dim() != bank.dim()) {
    throw ValidationError("query dimension " + std::to_string(query.dim()) +
                          " does not match bank dimension " +
                          std::to_string(bank.dim()));
  }
  if (k == 0) throw ValidationError("k must be >= 1");
  const auto top = std::min(k, bank.size());
  std::vector<NeighborResult> results;
  std::vector<double> sims(bank.size());
  std::vector<std::size_t> order(bank.size());
  for (std::size_t q = 0; q < query.size(); ++q) {
    const auto hq = query.embeddings().row(q);
    for (std::size_t b = 0; b < bank.size(); ++b) {
      sims[b] = cosine_similarity(hq, bank.embeddings().row(b));
    }
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top),
                      order.end(), [&](std::size_t a, std::size_t b) {
                        if (sims[a] != sims[b]) return sims[a] > sims[b];
                        return a < b;
                      });
    NeighborResult result;
    result.query_index = q;
    result.query_id = query.ids()[q];
    for (std::size_t r = 0; r < top; ++r) {
      const auto b = order[r];
      Neighbor nb;
      nb.bank_index = b;
      nb.bank_id = bank.ids()[b];
      nb.similarity = sims[b];
      for (std::size_t l = 0; l < bank.num_labels(); ++l) {
        if (bank.mask()(b, l) != 0 && bank.labels()(b, l) != 0) {
          nb.labels.push_back(bank.space().name(l));
        }
      }
      result.neighbors.push_back(std::move(nb));
    }
    results.push_back(std::move(result));
  }
  return results;
}

}  // namespace amw
