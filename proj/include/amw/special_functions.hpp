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

namespace amw {

// Digamma function for x > 0. Upward recurrence to x >= 6, then the
// asymptotic series; absolute error below 1e-10 on (0, inf).
double digamma(double x);

// Trigamma function for x > 0, same scheme.
double trigamma(double x);

// KL(Beta(a, b) || Beta(1, 1)) and its partial derivatives.
struct BetaKl {
  double value;
  double d_a;
  double d_b;
};
BetaKl beta_kl_uniform(double a, double b);

}  // namespace amw
