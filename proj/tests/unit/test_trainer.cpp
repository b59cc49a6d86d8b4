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
#include <numeric>

#include "amw/error.hpp"
#include "amw/synthetic.hpp"
#include "amw/trainer.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace amw;
using amw::testing::random_dataset;

namespace {

TrainConfig small_config(Mode mode) {
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.batch_size = 16;
  cfg.seed = 7;
  cfg.objective.mode = mode;
  cfg.optimizer.lr = 0.05;
  return cfg;
}

struct Fixture {
  SyntheticData synth = generate_synthetic(200, 8, 3, 0.3, 11);
  Dataset train = simulate_mask(synth.sample.data, 0.8, 3);
  Dataset dev = sample_synthetic(synth.truth, synth.sample.data.space(), 80, 0.3, 12,
                                 Split::kValidation)
                    .data;
};

}  // namespace

TEST_SUITE("trainer") {

TEST_CASE("steps per epoch rounds up") {
  CHECK(steps_per_epoch(32, 16) == 2);
  CHECK(steps_per_epoch(33, 16) == 3);
  CHECK(steps_per_epoch(1, 16) == 1);
}

TEST_CASE("epoch permutations are seeded and differ across epochs") {
  const auto a = epoch_permutation(50, 3, 0);
  CHECK(a == epoch_permutation(50, 3, 0));
  CHECK(a != epoch_permutation(50, 3, 1));
  CHECK(a != epoch_permutation(50, 4, 0));
  auto sorted = a;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> iota(50);
  std::iota(iota.begin(), iota.end(), 0);
  CHECK(sorted == iota);
}

TEST_CASE("training is deterministic") {
  Fixture f;
  for (const auto mode : {Mode::kBaseline, Mode::kAmbiguity, Mode::kEvidential}) {
    const auto a = train(f.train, f.dev, small_config(mode));
    const auto b = train(f.train, f.dev, small_config(mode));
    CHECK(a.model.head == b.model.head);
    CHECK(a.log.selected_epoch == b.log.selected_epoch);
    REQUIRE(a.log.steps.size() == b.log.steps.size());
    for (std::size_t s = 0; s < a.log.steps.size(); ++s) {
      CHECK(a.log.steps[s].loss.total == b.log.steps[s].loss.total);
    }
  }
}

TEST_CASE("zero temperature reproduces the baseline bit for bit") {
  Fixture f;
  auto amb = small_config(Mode::kAmbiguity);
  amb.objective.tau = 0.0;
  const auto a = train(f.train, f.dev, amb);
  const auto b = train(f.train, f.dev, small_config(Mode::kBaseline));
  CHECK(a.model.head == b.model.head);
  for (std::size_t s = 0; s < a.log.steps.size(); ++s) {
    CHECK(a.log.steps[s].loss.total == b.log.steps[s].loss.total);
  }
}

TEST_CASE("partial final batch is processed") {
  const auto data = random_dataset(37, 4, 2, 1);
  auto cfg = small_config(Mode::kAmbiguity);
  cfg.epochs = 2;
  const auto r = train(data, data, cfg);
  CHECK(r.log.steps.size() == 6);
  CHECK(r.log.epochs.size() == 2);
  CHECK(r.log.epochs[1].step == 6);
}

TEST_CASE("selected checkpoint is the earliest best dev epoch") {
  Fixture f;
  auto cfg = small_config(Mode::kAmbiguity);
  cfg.epochs = 4;
  const auto r = train(f.train, f.dev, cfg);
  double best = -1.0;
  std::size_t best_epoch = 0;
  for (const auto& e : r.log.epochs) {
    if (e.dev.mif1 > best) {
      best = e.dev.mif1;
      best_epoch = e.epoch;
    }
  }
  CHECK(r.log.selected_epoch == best_epoch);
  CHECK(r.log.selected_mif1 == best);
  CHECK(evaluate(r.model, f.dev, ThresholdPolicy::kFixed).mif1 == best);
}

TEST_CASE("training learns the synthetic task") {
  Fixture f;
  auto cfg = small_config(Mode::kBaseline);
  cfg.epochs = 8;
  const auto r = train(f.train, f.dev, cfg);
  CHECK(r.log.steps.back().loss.total < r.log.steps.front().loss.total);
  CHECK(r.log.selected_mif1 > 0.5);
}

TEST_CASE("run_seeds trains independently per seed") {
  Fixture f;
  const std::uint64_t seeds[] = {1, 2};
  const auto runs = run_seeds(f.train, f.dev, f.dev, small_config(Mode::kAmbiguity), seeds);
  REQUIRE(runs.size() == 2);
  auto single = small_config(Mode::kAmbiguity);
  single.seed = 2;
  const auto alone = train(f.train, f.dev, single);
  CHECK(runs[1].result.model.head == alone.model.head);
  CHECK(!(runs[0].result.model.head == runs[1].result.model.head));
  CHECK_THROWS_AS(run_seeds(f.train, f.dev, f.dev, single, {}), ValidationError);
}

TEST_CASE("invalid configuration and mismatched data are rejected") {
  Fixture f;
  auto cfg = small_config(Mode::kAmbiguity);
  cfg.batch_size = 0;
  CHECK_THROWS_AS(train(f.train, f.dev, cfg), ValidationError);
  cfg = small_config(Mode::kAmbiguity);
  cfg.dropout = 1.0;
  CHECK_THROWS_AS(train(f.train, f.dev, cfg), ValidationError);
  const auto other = random_dataset(10, 8, 4, 1);
  CHECK_THROWS_AS(train(f.train, other, small_config(Mode::kBaseline)), ValidationError);
}

TEST_CASE("evidential mode trains two outputs per label") {
  Fixture f;
  auto cfg = small_config(Mode::kEvidential);
  cfg.epochs = 1;
  const auto r = train(f.train, f.dev, cfg);
  CHECK(r.model.head.outputs() == 6);
  CHECK(r.model.mode == Mode::kEvidential);
}

}
