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
#include <vector>

#include "amw/dataset.hpp"
#include "amw/heads.hpp"

namespace amw {

// Ground-truth logistic model: W* ~ N(0, 1/d), b* ~ N(0, 1/d).
HeadParams make_true_params(std::size_t dim, std::size_t num_labels,
                            std::uint64_t seed);

// Label probability for ambiguous instances: p* is pulled toward 0.5 by this
// mixing factor, p = (1 - f) p* + f / 2.
inline constexpr double kAmbiguityMix = 0.8;

struct SyntheticSample {
  Dataset data;
  MatrixD p_true;               // label probabilities actually sampled from
  std::vector<bool> ambiguous;  // flagged instances
};

// Draws n instances h ~ N(0, I) labelled by `truth`. Exactly
// round(ambiguity_fraction * n) instances are flagged ambiguous. All masks 1.
SyntheticSample sample_synthetic(const HeadParams& truth,
                                 const LabelSpace& space, std::size_t n,
                                 double ambiguity_fraction, std::uint64_t seed,
                                 Split split = Split::kTrain);

struct SyntheticData {
  SyntheticSample sample;
  HeadParams truth;
};

SyntheticData generate_synthetic(std::size_t n, std::size_t dim,
                                 std::size_t num_labels,
                                 double ambiguity_fraction, std::uint64_t seed);

// The first K emotion names when K <= 11, otherwise label_0 ... label_{K-1}.
LabelSpace synthetic_space(std::size_t num_labels);

}  // namespace amw
