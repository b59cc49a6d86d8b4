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

#include "amw/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "amw/error.hpp"
#include "amw/rng.hpp"

namespace amw {

LabelSpace synthetic_space(std::size_t num_labels) {
  if (num_labels == 0) throw ValidationError("need at least one label");
  const auto emotions = LabelSpace::emotions();
  std::vector<std::string> names;
  for (std::size_t k = 0; k < num_labels; ++k) {
    names.push_back(num_labels <= emotions.size() ? emotions.name(k)
                                                  : "label_" + std::to_string(k));
  }
  return LabelSpace(std::move(names));
}

HeadParams make_true_params(std::size_t dim, std::size_t num_labels,
                            std::uint64_t seed) {
  if (dim == 0 || num_labels == 0) {
    throw ValidationError("synthetic data needs d >= 1 and K >= 1");
  }
  HeadParams truth(num_labels, dim);
  Rng rng(hash_combine(seed, stream::kSynth));
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (double& w : truth.weight.data()) w = scale * rng.normal();
  for (double& b : truth.bias) b = scale * rng.normal();
  return truth;
}

SyntheticSample sample_synthetic(const HeadParams& truth,
                                 const LabelSpace& space, std::size_t n,
                                 double ambiguity_fraction, std::uint64_t seed,
                                 Split split) {
  if (n == 0) throw ValidationError("synthetic data needs n >= 1");
  if (!(ambiguity_fraction >= 0.0 && ambiguity_fraction <= 1.0)) {
    throw ValidationError("ambiguity_fraction must lie in [0, 1]");
  }
  if (truth.outputs() != space.size()) {
    throw ValidationError("ground truth does not match the label space");
  }
  const auto dim = truth.dim();
  const auto k = space.size();
  Rng rng(hash_combine(hash_combine(seed, stream::kSynth),
                       static_cast<std::uint64_t>(split) + 1));

  Matrix<float> h(n, dim);
  for (float& v : h.data()) v = static_cast<float>(rng.normal());

  std::vector<bool> ambiguous(n, false);
  const auto n_ambiguous = static_cast<std::size_t>(
      std::llround(ambiguity_fraction * static_cast<double>(n)));
  if (n_ambiguous > 0) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order.begin(), order.end());
    for (std::size_t i = 0; i < n_ambiguous; ++i) ambiguous[order[i]] = true;
  }

  MatrixD p(n, k);
  Matrix<std::uint8_t> y(n, k, 0);
  std::vector<double> x(dim);
  std::vector<double> z(k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < dim; ++j) x[j] = h(i, j);
    affine_forward(truth, x, z);
    for (std::size_t l = 0; l < k; ++l) {
      double prob = sigmoid(z[l]);
      if (ambiguous[i]) prob = (1.0 - kAmbiguityMix) * prob + 0.5 * kAmbiguityMix;
      p(i, l) = prob;
      y(i, l) = rng.uniform() < prob ? 1 : 0;
    }
  }

  std::vector<std::string> ids;
  ids.reserve(n);
  const auto prefix = std::string(to_string(split));
  for (std::size_t i = 0; i < n; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%06zu", i);
    ids.push_back(prefix + "-" + buf);
  }
  Matrix<std::uint8_t> m(n, k, 1);
  return SyntheticSample{
      Dataset(space, std::move(h), std::move(y), std::move(m), std::move(ids),
              split),
      std::move(p), std::move(ambiguous)};
}

SyntheticData generate_synthetic(std::size_t n, std::size_t dim,
                                 std::size_t num_labels,
                                 double ambiguity_fraction, std::uint64_t seed) {
  auto truth = make_true_params(dim, num_labels, seed);
  auto sample = sample_synthetic(truth, synthetic_space(num_labels), n,
                                 ambiguity_fraction, seed);
  return SyntheticData{std::move(sample), std::move(truth)};
}

}  // namespace amw
