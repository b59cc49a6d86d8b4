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

// Reference loss written directly from the formulas, sharing no code with
// the library beyond plain containers. Used for value and finite-difference
// checks.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace amw::oracle {

enum class Kind { kBaseline, kAmbiguity, kEvidential };

struct Params {
  std::size_t outputs = 0, dim = 0;
  std::vector<double> w;  // outputs x dim, row-major
  std::vector<double> b;  // outputs
};

struct Batch {
  std::size_t n = 0, k = 0, dim = 0;
  std::vector<double> h;       // n x dim
  std::vector<int> y, m;       // n x k
};

struct Settings {
  Kind kind = Kind::kAmbiguity;
  double tau = 2.0;
  double lambda = 0.1;
  bool pu = false;
  double kl = 0.0;
  double eps = 1e-7;
};

// Digamma: shift to x >= 10, then the asymptotic expansion.
inline double psi(double x) {
  double acc = 0.0;
  while (x < 10.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double r = 1.0 / (x * x);
  const double series =
      r * (1.0 / 12 - r * (1.0 / 120 - r * (1.0 / 252 - r * (1.0 / 240 - r * (1.0 / 132)))));
  return acc + std::log(x) - 0.5 / x - series;
}

inline double kl_uniform(double a, double b) {
  return std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
         (a - 1) * psi(a) + (b - 1) * psi(b) - (a + b - 2) * psi(a + b);
}

inline double sig(double z) { return 1.0 / (1.0 + std::exp(-z)); }

inline double bce(double z, int y) {
  // -[y log s + (1-y) log(1-s)], written through log-sigmoid.
  const double log_s = -std::log1p(std::exp(-z));
  const double log_1ms = -std::log1p(std::exp(z));
  return -(y * log_s + (1 - y) * log_1ms);
}

inline double entropy(double p, double eps) {
  p = std::min(std::max(p, eps), 1 - eps);
  return -(p * std::log(p) + (1 - p) * std::log(1 - p));
}

inline double evidential(double a, double b, int y, double kl) {
  const double s = a + b;
  double v = y ? psi(s) - psi(a) : psi(s) - psi(b);
  if (kl > 0) v += kl * (y ? kl_uniform(1.0, b) : kl_uniform(a, 1.0));
  return v;
}

inline std::vector<double> scores(const Params& p, const Batch& x) {
  std::vector<double> s(x.n * p.outputs);
  for (std::size_t i = 0; i < x.n; ++i)
    for (std::size_t o = 0; o < p.outputs; ++o) {
      double v = p.b[o];
      for (std::size_t j = 0; j < p.dim; ++j) v += p.w[o * p.dim + j] * x.h[i * x.dim + j];
      s[i * p.outputs + o] = v;
    }
  return s;
}

// Per-instance weights at the given parameters.
inline std::vector<double> weights(const Params& p, const Batch& x, const Settings& s) {
  std::vector<double> w(x.n, 1.0);
  if (s.kind != Kind::kAmbiguity) return w;
  const auto z = scores(p, x);
  for (std::size_t i = 0; i < x.n; ++i) {
    double hsum = 0;
    int obs = 0;
    for (std::size_t k = 0; k < x.k; ++k) {
      if (!x.m[i * x.k + k]) continue;
      hsum += entropy(sig(z[i * x.k + k]), s.eps);
      ++obs;
    }
    if (obs > 0) w[i] = std::exp(-s.tau * hsum / obs);
  }
  return w;
}

inline double loss(const Params& p, const Batch& x, const Settings& s,
                   const std::vector<double>& w) {
  const auto z = scores(p, x);
  double amb = 0, pu = 0;
  for (std::size_t i = 0; i < x.n; ++i) {
    double sum = 0;
    int obs = 0;
    for (std::size_t k = 0; k < x.k; ++k) {
      const bool seen = x.m[i * x.k + k] != 0;
      const int y = x.y[i * x.k + k];
      double term_obs, term_pu;
      if (s.kind == Kind::kEvidential) {
        const double ep = std::log1p(std::exp(z[i * 2 * x.k + 2 * k]));
        const double en = std::log1p(std::exp(z[i * 2 * x.k + 2 * k + 1]));
        term_obs = evidential(ep + 1, en + 1, y, s.kl);
        term_pu = evidential(ep + 1, en + 1, 0, 0.0);
      } else {
        term_obs = bce(z[i * x.k + k], y);
        term_pu = bce(z[i * x.k + k], 0);
      }
      if (seen) {
        sum += term_obs;
        ++obs;
      } else {
        pu += term_pu;
      }
    }
    if (obs > 0) amb += w[i] * sum / obs;
  }
  amb /= static_cast<double>(x.n);
  pu /= static_cast<double>(x.n);
  return s.pu ? amb + s.lambda * pu : amb;
}

}  // namespace amw::oracle
