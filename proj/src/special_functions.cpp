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

#include "amw/special_functions.hpp"

#include <cmath>

#include "amw/error.hpp"

namespace amw {

namespace {
constexpr double kShift = 6.0;
}

double digamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw ValidationError("digamma requires a finite positive argument");
  }
  double acc = 0.0;
  while (x < kShift) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double r = 1.0 / (x * x);
  // Bernoulli-number series in 1/x^2.
  const double series =
      r * (1.0 / 12 -
           r * (1.0 / 120 -
                r * (1.0 / 252 -
                     r * (1.0 / 240 -
                          r * (1.0 / 132 - r * (691.0 / 32760 - r / 12))))));
  return acc + std::log(x) - 0.5 / x - series;
}

double trigamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw ValidationError("trigamma requires a finite positive argument");
  }
  double acc = 0.0;
  while (x < kShift) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  const double r = 1.0 / (x * x);
  const double series =
      1.0 / 6 -
      r * (1.0 / 30 -
           r * (1.0 / 42 -
                r * (1.0 / 30 - r * (5.0 / 66 - r * (691.0 / 2730 - r * 7.0 / 6)))));
  return acc + 1.0 / x + 0.5 * r + series * r / x;
}

BetaKl beta_kl_uniform(double a, double b) {
  const double s = a + b;
  const double psi_s = digamma(s);
  const double psi1_s = trigamma(s);
  BetaKl kl;
  kl.value = std::lgamma(s) - std::lgamma(a) - std::lgamma(b) +
             (a - 1.0) * (digamma(a) - psi_s) + (b - 1.0) * (digamma(b) - psi_s);
  kl.d_a = (a - 1.0) * trigamma(a) - (s - 2.0) * psi1_s;
  kl.d_b = (b - 1.0) * trigamma(b) - (s - 2.0) * psi1_s;
  return kl;
}

}  // namespace amw
