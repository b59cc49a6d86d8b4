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

#include <algorithm>
#include <cmath>

#include "amw/analysis.hpp"
#include "amw/error.hpp"
#include "amw/rng.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace amw;
using amw::testing::numbered_space;
using amw::testing::random_dataset;

namespace {

ModelBundle random_model(std::size_t k, std::size_t d, std::uint64_t seed) {
  ModelBundle model;
  model.mode = Mode::kBaseline;
  model.space = numbered_space(k);
  model.head = HeadParams(k, d);
  Rng rng(seed);
  for (auto& w : model.head.weight.data()) w = rng.normal();
  for (auto& b : model.head.bias) b = 0.5 * rng.normal();
  return model;
}

RunSummary run(std::string name, Mode mode, double mif1, double hl) {
  RunSummary r;
  r.train_name = std::move(name);
  r.mode = mode;
  r.space = numbered_space(2);
  r.report.mif1 = mif1;
  r.report.hl = hl;
  r.report.maf1 = mif1;
  r.report.jaccard = mif1;
  r.report.rl = 0.1;
  r.report.ap = 0.5;
  return r;
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("entropy bins are equal frequency and ordered") {
  const auto data = random_dataset(103, 6, 4, 2, 0.8);
  const auto model = random_model(4, 6, 3);
  const auto r = entropy_bins(model, data, 5, 2.0);
  REQUIRE(r.bins.size() == 5);
  std::size_t total = r.skipped;
  std::size_t lo = r.bins[0].count, hi = lo;
  for (std::size_t b = 0; b < 5; ++b) {
    total += r.bins[b].count;
    lo = std::min(lo, r.bins[b].count);
    hi = std::max(hi, r.bins[b].count);
    CHECK(r.bins[b].h_lo <= r.bins[b].h_mean);
    if (b > 0) {
      CHECK(r.bins[b].h_mean > r.bins[b - 1].h_mean);
      CHECK(r.bins[b].w_mean < r.bins[b - 1].w_mean);
      CHECK(r.bins[b].h_lo == r.bins[b - 1].h_hi);
    }
  }
  CHECK(total == 103);
  CHECK(hi - lo <= 1);
}

TEST_CASE("entropy bins skip unobserved instances and need enough data") {
  auto data = random_dataset(12, 3, 2, 4);
  auto m = data.mask();
  m(0, 0) = m(0, 1) = 0;
  m(5, 0) = m(5, 1) = 0;
  const auto model = random_model(2, 3, 1);
  const auto r = entropy_bins(model, data.with_mask(m), 2);
  CHECK(r.skipped == 2);
  CHECK(r.bins[0].count + r.bins[1].count == 10);
  CHECK_THROWS_AS(entropy_bins(model, data, 13), ValidationError);
  CHECK_THROWS_AS(entropy_bins(model, data, 0), ValidationError);
}

TEST_CASE("label uncertainty of constant one half") {
  MatrixD p(10, 3, 0.5);
  const auto r = label_uncertainty(numbered_space(3), p);
  REQUIRE(r.labels.size() == 3);
  for (const auto& l : r.labels) {
    CHECK(l.h_mean == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(l.h_std == doctest::Approx(0.0));
    CHECK(l.p_mean == 0.5);
  }
  // Ties keep label order.
  CHECK(r.labels[0].name == "l0");
  CHECK(r.labels[2].name == "l2");
}

TEST_CASE("label uncertainty sorts by descending entropy") {
  MatrixD p(2, 3);
  p(0, 0) = 0.9;
  p(1, 0) = 0.95;
  p(0, 1) = 0.5;
  p(1, 1) = 0.45;
  p(0, 2) = 0.7;
  p(1, 2) = 0.3;
  const auto r = label_uncertainty(numbered_space(3), p);
  CHECK(r.labels[0].name == "l1");
  CHECK(r.labels[1].name == "l2");
  CHECK(r.labels[2].name == "l0");
  CHECK(r.labels[1].p_mean == doctest::Approx(0.5));
  CHECK(r.labels[1].p_std == doctest::Approx(0.2));
}

TEST_CASE("mean and population standard deviation") {
  const auto r = mean_std({0.80, 0.80, 0.86});
  CHECK(r.mean == doctest::Approx(0.82).epsilon(1e-12));
  CHECK(r.std == doctest::Approx(0.0282842712474619).epsilon(1e-9));
  const auto one = mean_std({0.4});
  CHECK(one.std == 0.0);
  CHECK_THROWS_AS(mean_std({}), ValidationError);
}

TEST_CASE("seed aggregation is permutation invariant") {
  std::vector<RunSummary> runs = {
      run("a", Mode::kAmbiguity, 0.80, 0.1), run("a", Mode::kAmbiguity, 0.86, 0.2),
      run("a", Mode::kAmbiguity, 0.80, 0.3), run("a", Mode::kBaseline, 0.7, 0.2),
      run("b", Mode::kBaseline, 0.6, 0.2)};
  const auto r = aggregate_seeds(runs);
  REQUIRE(r.rows.size() == 3);
  CHECK(r.rows[0].train_name == "a");
  CHECK(r.rows[0].mode == Mode::kBaseline);
  CHECK(r.rows[1].mode == Mode::kAmbiguity);
  CHECK(r.rows[1].n == 3);
  CHECK(r.rows[1].mif1.mean == doctest::Approx(0.82));
  CHECK(r.rows[2].train_name == "b");
  std::reverse(runs.begin(), runs.end());
  const auto again = aggregate_seeds(runs);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(again.rows[i].mif1.mean == r.rows[i].mif1.mean);
    CHECK(again.rows[i].mif1.std == r.rows[i].mif1.std);
    CHECK(again.rows[i].hl.mean == r.rows[i].hl.mean);
  }
  runs[2].space = numbered_space(3);
  CHECK_THROWS_AS(aggregate_seeds(runs), ValidationError);
  CHECK_THROWS_AS(aggregate_seeds({}), ValidationError);
}

TEST_CASE("cosine similarity") {
  const float a[] = {1, 0, 0}, b[] = {0, 2, 0}, c[] = {3, 0, 0}, z[] = {0, 0, 0};
  CHECK(cosine_similarity(a, b) == 0.0);
  CHECK(cosine_similarity(a, c) == doctest::Approx(1.0));
  CHECK(cosine_similarity(a, z) == 0.0);
  const float d[] = {1, 0};
  CHECK_THROWS_AS(cosine_similarity(a, d), ValidationError);
}

TEST_CASE("nearest neighbours match brute force") {
  const auto bank = random_dataset(50, 5, 3, 8);
  const auto query = random_dataset(7, 5, 3, 9);
  const auto r = nearest_neighbors(query, bank, 3);
  REQUIRE(r.size() == 7);
  for (std::size_t q = 0; q < 7; ++q) {
    std::vector<std::pair<double, std::size_t>> all;
    for (std::size_t i = 0; i < 50; ++i) {
      all.emplace_back(-cosine_similarity(query.embeddings().row(q), bank.embeddings().row(i)), i);
    }
    std::sort(all.begin(), all.end());
    REQUIRE(r[q].neighbors.size() == 3);
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(r[q].neighbors[j].bank_index == all[j].second);
      CHECK(r[q].neighbors[j].similarity == -all[j].first);
      CHECK(r[q].neighbors[j].bank_id == bank.ids()[all[j].second]);
    }
  }
  const auto capped = nearest_neighbors(query, bank, 80);
  CHECK(capped[0].neighbors.size() == 50);
}

TEST_CASE("nearest neighbours are scale invariant") {
  const auto bank = random_dataset(20, 4, 2, 1);
  const auto query = random_dataset(3, 4, 2, 2);
  auto scaled = query.embeddings();
  for (auto& v : scaled.data()) v *= 4.0f;
  const Dataset big(query.space(), scaled, query.labels(), query.mask(), query.ids());
  const auto a = nearest_neighbors(query, bank, 2);
  const auto b = nearest_neighbors(big, bank, 2);
  for (std::size_t q = 0; q < 3; ++q) {
    CHECK(a[q].neighbors[0].bank_index == b[q].neighbors[0].bank_index);
    CHECK(a[q].neighbors[1].bank_index == b[q].neighbors[1].bank_index);
  }
}

TEST_CASE("nearest neighbour ties go to the lower bank index") {
  Matrix<float> e(3, 2);
  e(0, 1) = 1;
  e(1, 1) = -1;
  e(2, 1) = 1;
  Matrix<std::uint8_t> y(3, 1), m(3, 1, 1);
  y(2, 0) = 1;
  const Dataset bank(numbered_space(1), e, y, m, {"a", "b", "c"});
  Matrix<float> qe(1, 2);
  qe(0, 0) = 1;
  const Dataset query(numbered_space(1), qe, Matrix<std::uint8_t>(1, 1),
                      Matrix<std::uint8_t>(1, 1, 1), {"q"});
  const auto r = nearest_neighbors(query, bank, 2);
  CHECK(r[0].neighbors[0].bank_id == "a");
  CHECK(r[0].neighbors[1].bank_id == "b");
  const auto pos = nearest_neighbors(bank, bank, 1);
  CHECK(pos[2].neighbors[0].bank_id == "a");
  CHECK(pos[0].neighbors[0].labels.empty());
  const auto self = nearest_neighbors(bank.with_split(Split::kTest), bank, 3);
  CHECK(self[2].neighbors[1].labels == std::vector<std::string>{"l0"});
  const auto wrong = random_dataset(2, 3, 1, 1);
  CHECK_THROWS_AS(nearest_neighbors(wrong, bank, 1), ValidationError);
  CHECK_THROWS_AS(nearest_neighbors(query, bank, 0), ValidationError);
}

}
