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
#include "amw/heads.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace amw;
using amw::testing::TempDir;
using amw::testing::slurp;
using amw::testing::spit;

TEST_SUITE("heads") {

TEST_CASE("sigmoid and softplus") {
  // Frozen arbitrary-precision value of sigmoid(1).
  CHECK(sigmoid(1.0) == doctest::Approx(0.73105857863000487925).epsilon(1e-15));
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(std::abs(sigmoid(50.0) - 1.0) <= 1e-15);
  CHECK(sigmoid(-700.0) > 0.0);
  CHECK(sigmoid(700.0) <= 1.0);
  CHECK(std::isfinite(sigmoid(-1e4)));
  CHECK(softplus(0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(softplus(1e4) == 1e4);
  CHECK(softplus(-800.0) >= 0.0);
}

TEST_CASE("linear forward") {
  HeadParams head(1, 1);
  head.weight(0, 0) = 2.0;
  head.bias[0] = -1.0;
  const std::vector<double> h{1.0};
  const auto out = linear_forward(head, h);
  CHECK(out.z[0] == 1.0);
  CHECK(out.p[0] == doctest::Approx(0.73106).epsilon(1e-5));
  HeadParams zero(3, 2);
  const auto z = linear_forward(zero, std::vector<double>{4.0, -1.0});
  for (double p : z.p) CHECK(p == 0.5);
  CHECK_THROWS_AS(linear_forward(head, std::vector<double>{1.0, 2.0}), ValidationError);
}

TEST_CASE("evidential forward") {
  HeadParams zero(4, 3);
  const auto out = evidential_forward(zero, std::vector<double>{1, 2, 3});
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(out.alpha[k] == doctest::Approx(1.0 + std::log(2.0)));
    CHECK(out.beta[k] == doctest::Approx(1.0 + std::log(2.0)));
    CHECK(out.p[k] == 0.5);
  }
  HeadParams skew(2, 1);
  skew.bias[0] = 60.0;
  skew.bias[1] = -60.0;
  const auto s = evidential_forward(skew, std::vector<double>{0.0});
  CHECK(s.p[0] > 0.98);
  CHECK(s.beta[0] >= 1.0);
}

TEST_CASE("head_backward matches finite differences") {
  for (Mode mode : {Mode::kBaseline, Mode::kEvidential}) {
    const std::size_t outputs = head_outputs(mode, 1);
    auto head = init_head(mode, 1, 1, 5);
    head.bias[0] = 0.3;
    const std::vector<double> h{0.7};
    // Scalar objective: sum of c_j * f_j where f is z (linear) or e (evidence).
    const std::vector<double> c{0.6, -1.3};
    auto objective = [&](const HeadParams& p) {
      std::vector<double> pre(outputs);
      affine_forward(p, h, pre);
      double v = 0;
      for (std::size_t j = 0; j < outputs; ++j) {
        v += c[j] * (mode == Mode::kEvidential ? softplus(pre[j]) : pre[j]);
      }
      return v;
    };
    std::vector<double> pre(outputs);
    affine_forward(head, h, pre);
    HeadParams grad(outputs, 1);
    head_backward(mode, h, std::span<const double>(c.data(), outputs), pre, grad);
    for (std::size_t j = 0; j < outputs; ++j) {
      const double step = 1e-6;
      auto plus = head, minus = head;
      plus.weight(j, 0) += step;
      minus.weight(j, 0) -= step;
      const double fd = (objective(plus) - objective(minus)) / (2 * step);
      CHECK(grad.weight(j, 0) == doctest::Approx(fd).epsilon(1e-6));
      plus = head;
      minus = head;
      plus.bias[j] += step;
      minus.bias[j] -= step;
      const double fdb = (objective(plus) - objective(minus)) / (2 * step);
      CHECK(grad.bias[j] == doctest::Approx(fdb).epsilon(1e-6));
    }
  }
}

TEST_CASE("head_backward is linear in the batch and zero for zero upstream") {
  auto head = init_head(Mode::kAmbiguity, 2, 3, 1);
  const std::vector<double> h1{1, 2, 3}, h2{-1, 0.5, 2};
  const std::vector<double> g1{0.2, -0.1}, g2{0.4, 0.3};
  const std::vector<double> none;
  HeadParams both(2, 3), a(2, 3), b(2, 3), zero(2, 3);
  head_backward(Mode::kAmbiguity, h1, g1, none, both);
  head_backward(Mode::kAmbiguity, h2, g2, none, both);
  head_backward(Mode::kAmbiguity, h1, g1, none, a);
  head_backward(Mode::kAmbiguity, h2, g2, none, b);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(both.weight.data()[i] == doctest::Approx(a.weight.data()[i] + b.weight.data()[i]));
  }
  head_backward(Mode::kAmbiguity, h1, std::vector<double>{0, 0}, none, zero);
  for (double v : zero.weight.data()) CHECK(v == 0.0);
}

ModelBundle sample_bundle(Mode mode, std::size_t k, std::size_t d) {
  ModelBundle b;
  b.mode = mode;
  b.space = amw::testing::numbered_space(k);
  b.head = init_head(mode, k, d, 17);
  for (std::size_t i = 0; i < b.head.bias.size(); ++i) b.head.bias[i] = 0.1 * i;
  b.config_json = R"({"tau":"2.0"})";
  return b;
}

TEST_CASE("model save/load round trip") {
  TempDir dir;
  for (Mode mode : {Mode::kBaseline, Mode::kAmbiguity, Mode::kEvidential}) {
    auto bundle = sample_bundle(mode, 3, 4);
    bundle.thresholds = {0.3, 0.5, 0.7};
    save_model(bundle, dir / "m.amlm");
    const auto back = load_model(dir / "m.amlm");
    CHECK(back.mode == mode);
    CHECK(back.space == bundle.space);
    CHECK(back.head == round_to_storage(bundle).head);
    CHECK(back.thresholds.size() == 3);
    CHECK(back.thresholds[0] == static_cast<double>(0.3f));
    save_model(back, dir / "m2.amlm");
    CHECK(slurp(dir / "m.amlm") == slurp(dir / "m2.amlm"));
  }
}

TEST_CASE("model file layout") {
  auto bundle = sample_bundle(Mode::kEvidential, 2, 3);
  const auto bytes = encode_model(bundle);
  CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "AMLM");
  CHECK(bytes[4] == 0x01);
  CHECK(bytes[5] == 0x02);
  CHECK(bytes[6] == 2);   // K
  CHECK(bytes[10] == 3);  // d
  CHECK(bytes[14] == 1);  // one global threshold
  CHECK(decode_model(bytes).mode == Mode::kEvidential);
}

TEST_CASE("corrupt model files") {
  const auto bytes = encode_model(sample_bundle(Mode::kBaseline, 2, 2));
  auto bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_WITH_AS(decode_model(bad), doctest::Contains("bad magic"), FormatError);
  bad = bytes;
  bad[4] = 0x02;
  CHECK_THROWS_WITH_AS(decode_model(bad), doctest::Contains("version"), FormatError);
  CHECK_THROWS_AS(decode_model(std::vector<std::uint8_t>(bytes.begin(), bytes.begin() + 3)),
                  FormatError);
  for (std::size_t cut : {std::size_t{10}, bytes.size() - 1}) {
    std::vector<std::uint8_t> part(bytes.begin(), bytes.begin() + cut);
    CHECK_THROWS_WITH_AS(decode_model(part), doctest::Contains("truncated"), FormatError);
  }
  auto extra = bytes;
  extra.push_back(0);
  CHECK_THROWS_AS(decode_model(extra), FormatError);
}

TEST_CASE("predict_proba checks shapes") {
  const auto bundle = sample_bundle(Mode::kBaseline, 3, 4);
  const auto ok = amw::testing::random_dataset(5, 4, 3, 1);
  const auto p = predict_proba(bundle, ok);
  CHECK(p.rows() == 5);
  CHECK(p.cols() == 3);
  const auto wrong = amw::testing::random_dataset(5, 3, 3, 1);
  CHECK_THROWS_AS(predict_proba(bundle, wrong), ValidationError);
}

}
