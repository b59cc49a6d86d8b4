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

#include "amw/heads.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "amw/error.hpp"
#include "amw/rng.hpp"

namespace amw {

namespace {

constexpr char kModelMagic[4] = {'A', 'M', 'L', 'M'};
constexpr std::uint8_t kModelVersion = 0x01;

void check_finite(const HeadParams& head) {
  for (double v : head.weight.data()) {
    if (!std::isfinite(v)) throw NumericError("non-finite head weight");
  }
  for (double v : head.bias) {
    if (!std::isfinite(v)) throw NumericError("non-finite head bias");
  }
}

template <typename T>
void put(std::vector<std::uint8_t>& out, T value) {
  const auto* p = reinterpret_cast<const std::uint8_t*>(&value);
  out.insert(out.end(), p, p + sizeof(T));
}

void put_f32(std::vector<std::uint8_t>& out, double value) {
  put(out, static_cast<float>(value));
}

class Cursor {
 public:
  explicit Cursor(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}
  template <typename T>
  T get() {
    if (bytes_.size() - pos_ < sizeof(T)) {
      throw FormatError("model file truncated at byte " + std::to_string(pos_));
    }
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }
  std::span<const std::uint8_t> take(std::size_t n) {
    if (bytes_.size() - pos_ < n) {
      throw FormatError("model file truncated at byte " + std::to_string(pos_));
    }
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::string config_with_labels(const std::string& config_json,
                               const LabelSpace& space) {
  nlohmann::json cfg;
  try {
    cfg = config_json.empty() ? nlohmann::json::object()
                              : nlohmann::json::parse(config_json);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("model config is not valid JSON: ") +
                          e.what());
  }
  if (!cfg.is_object()) throw ValidationError("model config must be an object");
  cfg["labels"] = space.names();
  return cfg.dump();
}

}  // namespace

std::size_t head_outputs(Mode mode, std::size_t num_labels) {
  return mode == Mode::kEvidential ? 2 * num_labels : num_labels;
}

HeadParams init_head(Mode mode, std::size_t num_labels, std::size_t dim,
                     std::uint64_t seed) {
  if (num_labels == 0 || dim == 0) {
    throw ValidationError("head needs at least one label and one dimension");
  }
  HeadParams head(head_outputs(mode, num_labels), dim);
  Rng rng(hash_combine(seed, stream::kInit));
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (double& w : head.weight.data()) w = scale * rng.normal();
  return head;
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double a) {
  return std::max(a, 0.0) + std::log1p(std::exp(-std::abs(a)));
}

void affine_forward(const HeadParams& head, std::span<const double> h,
                    std::span<double> out) {
  if (h.size() != head.dim()) {
    throw ValidationError("embedding dimension " + std::to_string(h.size()) +
                          " does not match head dimension " +
                          std::to_string(head.dim()));
  }
  if (out.size() != head.outputs()) {
    throw ValidationError("output buffer has the wrong size");
  }
  for (std::size_t r = 0; r < head.outputs(); ++r) {
    const auto w = head.weight.row(r);
    double acc = head.bias[r];
    for (std::size_t j = 0; j < h.size(); ++j) acc += w[j] * h[j];
    out[r] = acc;
  }
}

LinearOutput linear_forward(const HeadParams& head, std::span<const double> h) {
  LinearOutput out;
  out.z.resize(head.outputs());
  affine_forward(head, h, out.z);
  out.p.resize(out.z.size());
  for (std::size_t k = 0; k < out.z.size(); ++k) out.p[k] = sigmoid(out.z[k]);
  return out;
}

EvidentialOutput evidential_forward(const HeadParams& head,
                                    std::span<const double> h) {
  if (head.outputs() % 2 != 0) {
    throw ValidationError("evidential head needs an even number of outputs");
  }
  std::vector<double> pre(head.outputs());
  affine_forward(head, h, pre);
  const auto k = head.outputs() / 2;
  EvidentialOutput out;
  out.alpha.resize(k);
  out.beta.resize(k);
  out.p.resize(k);
  for (std::size_t l = 0; l < k; ++l) {
    out.alpha[l] = softplus(pre[2 * l]) + 1.0;
    out.beta[l] = softplus(pre[2 * l + 1]) + 1.0;
    out.p[l] = out.alpha[l] / (out.alpha[l] + out.beta[l]);
  }
  return out;
}

void head_backward(Mode mode, std::span<const double> h,
                   std::span<const double> upstream,
                   std::span<const double> pre, HeadParams& grad) {
  if (h.size() != grad.dim() || upstream.size() != grad.outputs()) {
    throw ValidationError("head_backward: shape mismatch");
  }
  const bool evidential = mode == Mode::kEvidential;
  if (evidential && pre.size() != upstream.size()) {
    throw ValidationError("head_backward: pre-activation shape mismatch");
  }
  for (std::size_t r = 0; r < grad.outputs(); ++r) {
    // d softplus(a) / da = sigmoid(a)
    const double g = evidential ? upstream[r] * sigmoid(pre[r]) : upstream[r];
    if (g == 0.0) continue;
    auto w = grad.weight.row(r);
    for (std::size_t j = 0; j < h.size(); ++j) w[j] += g * h[j];
    grad.bias[r] += g;
  }
}

// ---------------------------------------------------------------------------

void validate(const ModelBundle& bundle) {
  const auto k = bundle.num_labels();
  if (bundle.head.outputs() != head_outputs(bundle.mode, k)) {
    throw ValidationError("head outputs do not match mode and label count");
  }
  if (bundle.head.weight.rows() != bundle.head.outputs() || bundle.dim() == 0) {
    throw ValidationError("head weight shape is inconsistent");
  }
  if (bundle.thresholds.size() != 1 && bundle.thresholds.size() != k) {
    throw ValidationError("thresholds must have length 1 or K");
  }
  for (double t : bundle.thresholds) {
    if (!(t > 0.0 && t < 1.0)) {
      throw ValidationError("thresholds must lie in (0, 1)");
    }
  }
  check_finite(bundle.head);
}

MatrixD predict_proba(const ModelBundle& bundle, const Dataset& data) {
  if (data.dim() != bundle.dim()) {
    throw ValidationError("dataset dimension " + std::to_string(data.dim()) +
                          " does not match model dimension " +
                          std::to_string(bundle.dim()));
  }
  if (data.num_labels() != bundle.num_labels()) {
    throw ValidationError("dataset label count does not match the model");
  }
  MatrixD p(data.size(), bundle.num_labels());
  std::vector<double> h(data.dim());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto row = data.embeddings().row(i);
    std::copy(row.begin(), row.end(), h.begin());
    const auto probs = bundle.mode == Mode::kEvidential
                           ? evidential_forward(bundle.head, h).p
                           : linear_forward(bundle.head, h).p;
    std::copy(probs.begin(), probs.end(), p.row(i).begin());
  }
  return p;
}

ModelBundle round_to_storage(ModelBundle bundle) {
  auto f32 = [](double v) { return static_cast<double>(static_cast<float>(v)); };
  for (double& v : bundle.head.weight.data()) v = f32(v);
  for (double& v : bundle.head.bias) v = f32(v);
  for (double& v : bundle.thresholds) v = f32(v);
  return bundle;
}

std::vector<std::uint8_t> encode_model(const ModelBundle& bundle) {
  validate(bundle);
  const auto k = bundle.num_labels();
  if (k > UINT32_MAX || bundle.dim() > UINT32_MAX) {
    throw ValidationError("model too large for the file format");
  }
  // The count byte holds the threshold count itself.
  if (bundle.thresholds.size() > UINT8_MAX) {
    throw ValidationError("per-label thresholds need K <= 255 in the file format");
  }
  std::vector<std::uint8_t> out(kModelMagic, kModelMagic + 4);
  put<std::uint8_t>(out, kModelVersion);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(bundle.mode));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(k));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(bundle.dim()));
  put<std::uint8_t>(out, static_cast<std::uint8_t>(bundle.thresholds.size()));
  for (double t : bundle.thresholds) put_f32(out, t);
  for (double w : bundle.head.weight.data()) put_f32(out, w);
  for (double b : bundle.head.bias) put_f32(out, b);
  const auto json = config_with_labels(bundle.config_json, bundle.space);
  if (json.size() > UINT32_MAX) throw ValidationError("config snapshot too large");
  put<std::uint32_t>(out, static_cast<std::uint32_t>(json.size()));
  out.insert(out.end(), json.begin(), json.end());
  return out;
}

ModelBundle decode_model(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kModelMagic, 4) != 0) {
    throw FormatError("bad magic: not a model file");
  }
  Cursor in(bytes.subspan(4));
  const auto version = in.get<std::uint8_t>();
  if (version != kModelVersion) {
    throw FormatError("model version mismatch: file has " +
                      std::to_string(version) + ", expected " +
                      std::to_string(kModelVersion));
  }
  const auto mode_byte = in.get<std::uint8_t>();
  if (mode_byte > 0x02) {
    throw FormatError("unknown mode byte " + std::to_string(mode_byte));
  }
  ModelBundle bundle;
  bundle.mode = static_cast<Mode>(mode_byte);
  const std::size_t k = in.get<std::uint32_t>();
  const std::size_t dim = in.get<std::uint32_t>();
  if (k == 0 || dim == 0) throw FormatError("model has zero labels or dimension");
  const std::size_t n_thresholds = in.get<std::uint8_t>();
  if (n_thresholds != 1 && n_thresholds != k) {
    throw FormatError("threshold count must be 1 or K");
  }
  bundle.thresholds.assign(n_thresholds, 0.0);
  for (double& t : bundle.thresholds) t = in.get<float>();
  bundle.head = HeadParams(head_outputs(bundle.mode, k), dim);
  for (double& w : bundle.head.weight.data()) w = in.get<float>();
  for (double& b : bundle.head.bias) b = in.get<float>();
  const auto json_len = in.get<std::uint32_t>();
  const auto json_bytes = in.take(json_len);
  if (!in.done()) throw FormatError("trailing bytes after model config");
  bundle.config_json.assign(json_bytes.begin(), json_bytes.end());

  std::vector<std::string> names;
  try {
    const auto cfg = nlohmann::json::parse(bundle.config_json);
    if (cfg.contains("labels")) names = cfg.at("labels").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("model config is not valid JSON: ") + e.what());
  }
  if (names.size() != k) {
    names.clear();
    for (std::size_t l = 0; l < k; ++l) names.push_back("label_" + std::to_string(l));
  }
  bundle.space = LabelSpace(std::move(names));
  validate(bundle);
  return bundle;
}

void save_model(const ModelBundle& bundle, const std::filesystem::path& path) {
  const auto bytes = encode_model(bundle);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("error writing " + path.string());
}

ModelBundle load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return decode_model(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace amw
