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

#include <cmath>

#include "amw/error.hpp"
#include "amw/metrics.hpp"
#include "amw/rng.hpp"
#include "doctest.h"
#include "metric_oracle.hpp"

using namespace amw;

namespace {

LabelMatrix lm(std::vector<std::vector<int>> rows) {
  LabelMatrix out(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < rows[0].size(); ++k) out(i, k) = rows[i][k];
  return out;
}

MatrixD pm(std::vector<std::vector<double>> rows) {
  MatrixD out(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < rows[0].size(); ++k) out(i, k) = rows[i][k];
  return out;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("hamming loss") {
  const auto y = lm({{1, 0}, {0, 1}});
  CHECK(hamming_loss(y, y) == 0.0);
  CHECK(hamming_loss(y, lm({{1, 1}, {0, 1}})) == 0.25);
  CHECK_THROWS_AS(hamming_loss(LabelMatrix(), LabelMatrix()), ValidationError);
}

TEST_CASE("ranking loss") {
  const auto y = lm({{1, 0, 0}});
  CHECK(*ranking_loss(y, pm({{0.9, 0.2, 0.1}})).value == 0.0);
  CHECK(*ranking_loss(y, pm({{0.1, 0.2, 0.3}})).value == 1.0);
  CHECK(*ranking_loss(y, pm({{0.4, 0.4, 0.1}})).value == 0.5);
  const auto skipped = ranking_loss(lm({{1, 1}, {0, 0}}), pm({{0.1, 0.2}, {0.3, 0.4}}));
  CHECK(!skipped.value);
  CHECK(skipped.skipped == 2);
}

TEST_CASE("jaccard") {
  CHECK(jaccard(lm({{1, 1, 0}}), lm({{1, 1, 0}})).value == 1.0);
  CHECK(jaccard(lm({{1, 0}}), lm({{0, 1}})).value == 0.0);
  CHECK(jaccard(lm({{1, 1, 0}}), lm({{0, 1, 1}})).value == doctest::Approx(1.0 / 3));
  const auto empty = jaccard(lm({{0, 0}}), lm({{0, 0}}));
  CHECK(empty.value == 1.0);
  CHECK(empty.both_empty == 1);
}

TEST_CASE("f1 scores") {
  const auto y = lm({{1, 0}, {0, 1}});
  CHECK(micro_f1(y, y) == 1.0);
  CHECK(macro_f1(y, y).value == 1.0);
  CHECK(micro_f1(lm({{1, 0}}), lm({{1, 1}})) == doctest::Approx(2.0 / 3));
  CHECK(macro_f1(lm({{1, 1}, {0, 0}}), lm({{1, 0}, {0, 1}})).value == 0.5);
  const auto degenerate = macro_f1(lm({{1, 0}}), lm({{1, 0}}));
  CHECK(degenerate.value == 0.5);
  REQUIRE(degenerate.degenerate.size() == 1);
  CHECK(degenerate.degenerate[0] == 1);
}

TEST_CASE("average precision") {
  CHECK(*average_precision(lm({{1}, {1}, {0}}), pm({{0.9}, {0.8}, {0.1}})).value == 1.0);
  CHECK(*average_precision(lm({{0}, {0}, {0}, {1}}), pm({{0.9}, {0.8}, {0.7}, {0.1}})).value ==
        0.25);
  // Ties are broken by instance index.
  CHECK(*average_precision(lm({{0}, {1}}), pm({{0.5}, {0.5}})).value == 0.5);
  const auto none = average_precision(lm({{0, 1}, {0, 0}}), pm({{0.3, 0.4}, {0.2, 0.1}}));
  CHECK(none.excluded == 1);
  CHECK(*none.value == 1.0);
  CHECK(!average_precision(lm({{0}}), pm({{0.3}})).value);
}

TEST_CASE("masked cells are excluded") {
  const auto y = lm({{1, 0}, {0, 1}});
  const auto yh = lm({{1, 1}, {0, 0}});
  const auto m = lm({{1, 0}, {1, 0}});
  CHECK(hamming_loss(y, yh, &m) == 0.0);
  CHECK(micro_f1(y, yh, &m) == 1.0);
  CHECK(jaccard(y, yh, &m).value == 1.0);
  const auto p = pm({{0.9, 0.95}, {0.1, 0.0}});
  CHECK(*average_precision(y, p, &m).value == 1.0);
}

TEST_CASE("brute-force oracle on small exhaustive cases") {
  for (std::size_t n = 1; n <= 2; ++n) {
    for (std::size_t k = 1; k <= 2; ++k) {
      const std::size_t cells = n * k;
      for (unsigned a = 0; a < (1u << cells); ++a) {
        for (unsigned b = 0; b < (1u << cells); ++b) {
          LabelMatrix y(n, k), yh(n, k);
          MatrixD p(n, k);
          oracle::Bin oy(n, std::vector<int>(k)), oyh = oy;
          oracle::Real op(n, std::vector<double>(k));
          for (std::size_t c = 0; c < cells; ++c) {
            y.data()[c] = (a >> c) & 1;
            yh.data()[c] = (b >> c) & 1;
            p.data()[c] = yh.data()[c] ? 0.75 : 0.25;
            oy[c / k][c % k] = y.data()[c];
            oyh[c / k][c % k] = yh.data()[c];
            op[c / k][c % k] = p.data()[c];
          }
          const auto want = oracle::metrics(oy, oyh, op);
          CHECK(hamming_loss(y, yh) == want.hl);
          CHECK(jaccard(y, yh).value == want.jaccard);
          CHECK(micro_f1(y, yh) == want.mif1);
          CHECK(macro_f1(y, yh).value == want.maf1);
          CHECK(ranking_loss(y, p).value == want.rl);
          CHECK(average_precision(y, p).value == want.ap);
        }
      }
    }
  }
}

TEST_CASE("global threshold tuning") {
  const auto grid = threshold_grid();
  CHECK(grid.size() == 91);
  CHECK(grid.front() == 0.05);
  CHECK(grid.back() == 0.95);
  // Everything separable beyond the grid: the smallest threshold wins ties.
  CHECK(tune_threshold_global(lm({{1, 0}, {0, 1}}), pm({{0.99, 0.01}, {0.02, 0.98}})) == 0.05);
  // 0.30 is the unique optimum: 0.305 must be positive, 0.295 negative.
  const auto y = lm({{1}, {0}, {1}, {0}});
  const auto p = pm({{0.305}, {0.295}, {0.9}, {0.1}});
  CHECK(tune_threshold_global(y, p) == 0.30);
  Rng rng(5);
  LabelMatrix ry(30, 3);
  MatrixD rp(30, 3);
  for (auto& v : ry.data()) v = rng.uniform() < 0.4;
  for (auto& v : rp.data()) v = rng.uniform();
  const double t = tune_threshold_global(ry, rp);
  CHECK(micro_f1(ry, binarize(rp, {t})) >= micro_f1(ry, binarize(rp, {0.5})));
}

TEST_CASE("per-label threshold tuning") {
  const auto y = lm({{1, 1}, {0, 0}, {1, 1}, {0, 0}});
  const auto p = pm({{0.205, 0.705}, {0.195, 0.695}, {0.8, 0.9}, {0.01, 0.05}});
  const auto t = tune_thresholds_per_label(y, p);
  REQUIRE(t.thresholds.size() == 2);
  CHECK(t.thresholds[0] == 0.2);
  CHECK(t.thresholds[1] == 0.7);
  CHECK(t.flagged.empty());
  const auto flagged = tune_thresholds_per_label(lm({{1, 0}, {0, 0}}), pm({{0.8, 0.3}, {0.1, 0.2}}));
  CHECK(flagged.thresholds[1] == 0.5);
  REQUIRE(flagged.flagged.size() == 1);
  CHECK(flagged.flagged[0] == 1);
}

TEST_CASE("policy names") {
  CHECK(to_string(ThresholdPolicy::kFixed) == "fixed_0.5");
  CHECK(parse_threshold_policy("global") == ThresholdPolicy::kGlobalTuned);
  CHECK(parse_threshold_policy("per_label_tuned") == ThresholdPolicy::kPerLabelTuned);
  CHECK_THROWS_AS(parse_threshold_policy("best"), ValidationError);
}

TEST_CASE("compute_metrics collects everything") {
  const auto y = lm({{1, 0}, {0, 0}});
  const auto p = pm({{0.7, 0.2}, {0.1, 0.6}});
  const auto r = compute_metrics(y, p, nullptr, {0.5}, ThresholdPolicy::kFixed);
  CHECK(r.n == 2);
  CHECK(r.k == 2);
  CHECK(r.hl == 0.25);
  CHECK(r.rl_skipped == 1);
  CHECK(r.ap_excluded == 1);
  CHECK(r.observed_cells == 4);
  CHECK(r.maf1_degenerate.empty());
}

}
