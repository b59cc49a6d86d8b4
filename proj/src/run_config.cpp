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

#include "amw/run_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "amw/error.hpp"
#include "amw/report.hpp"
#include "json.hpp"

namespace amw {
namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

// Keys naming output locations; they are not part of the experiment identity.
bool is_location_key(std::string_view key) { return key == "out_dir"; }

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"mode", "ambiguity", "training mode: baseline, ambiguity, evidential"},
      {"modes", "baseline,ambiguity,evidential", "modes swept by ablate"},
      {"tau", "2.0", "ambiguity temperature"},
      {"lambda_pu", "0.1", "weight of the positive-unlabeled term"},
      {"pu", "false", "enable the positive-unlabeled term"},
      {"epsilon", "1e-7", "probability clamp for entropy"},
      {"kl_coef", "0.1", "final evidential KL coefficient"},
      {"lr", "2e-5", "peak learning rate"},
      {"beta1", "0.9", "AdamW beta1"},
      {"beta2", "0.999", "AdamW beta2"},
      {"adam_eps", "1e-8", "AdamW epsilon"},
      {"weight_decay", "0.01", "decoupled weight decay"},
      {"warmup_ratio", "0.06", "fraction of steps spent in warmup"},
      {"clip_norm", "1.0", "global gradient norm limit"},
      {"epochs", "5", "training epochs"},
      {"batch_size", "16", "mini-batch size"},
      {"dropout", "0.1", "dropout rate on embeddings"},
      {"seed", "42", "seed for train"},
      {"seeds", "42,123,2025", "seeds swept by ablate"},
      {"threshold_policy", "fixed", "fixed, global or per_label"},
      {"bins", "5", "entropy bins"},
      {"k", "1", "nearest neighbors per query"},
      {"labels", "", "label names; empty uses the labels file header"},
      {"train_labels", "", "train labels TSV"},
      {"train_embeddings", "", "train embeddings file"},
      {"train_texts", "", "train texts TSV"},
      {"dev_labels", "", "dev labels TSV"},
      {"dev_embeddings", "", "dev embeddings file"},
      {"dev_texts", "", "dev texts TSV"},
      {"test_labels", "", "test labels TSV"},
      {"test_embeddings", "", "test embeddings file"},
      {"test_texts", "", "test texts TSV"},
      {"train_name", "train", "name of the training set in reports"},
      {"lang", "", "language tag attached to loaded data"},
      {"split", "test", "split evaluated: train, dev or test"},
      {"model", "", "model file"},
      {"out_dir", "runs", "output directory"},
      {"n", "2000", "synthetic train size"},
      {"n_dev", "500", "synthetic dev size"},
      {"n_test", "500", "synthetic test size"},
      {"d", "16", "synthetic embedding dimension"},
      {"num_labels", "4", "synthetic label count"},
      {"ambiguity_fraction", "0.0", "synthetic ambiguous fraction"},
      {"rho", "1.0", "synthetic train observation rate"},
      {"embeddings_format", "binary", "synthetic embeddings format: text or binary"},
  };
  return keys;
}

RunConfig::RunConfig() {
  for (const auto& key : config_keys()) {
    values_.emplace(std::string(key.name), std::string(key.default_value));
  }
}

void RunConfig::set(std::string_view key, std::string_view value) {
  auto it = values_.find(key);
  if (it == values_.end()) {
    throw ValidationError("unknown config key '" + std::string(key) + "'");
  }
  it->second = std::string(trim(value));
}

const std::string& RunConfig::get(std::string_view key) const {
  auto it = values_.find(key);
  if (it == values_.end()) {
    throw ValidationError("unknown config key '" + std::string(key) + "'");
  }
  return it->second;
}

bool RunConfig::has_value(std::string_view key) const {
  return !get(key).empty();
}

void RunConfig::merge_text(std::string_view text, std::string_view origin) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError(std::string(origin) + ":" +
                            std::to_string(line_no) + ": expected key=value");
    }
    try {
      set(trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ValidationError& e) {
      throw ValidationError(std::string(origin) + ":" +
                            std::to_string(line_no) + ": " + e.what());
    }
  }
}

void RunConfig::merge_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  merge_text(buf.str(), path.string());
}

double RunConfig::get_double(std::string_view key) const {
  const auto& text = get(key);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ValidationError("config key '" + std::string(key) +
                          "' expects a number, got '" + text + "'");
  }
  return value;
}

std::uint64_t RunConfig::get_u64(std::string_view key) const {
  const auto& text = get(key);
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ValidationError("config key '" + std::string(key) +
                          "' expects a non-negative integer, got '" + text + "'");
  }
  return value;
}

bool RunConfig::get_bool(std::string_view key) const {
  const auto& text = get(key);
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ValidationError("config key '" + std::string(key) +
                        "' expects true or false, got '" + text + "'");
}

std::vector<std::string> RunConfig::get_list(std::string_view key) const {
  std::vector<std::string> out;
  std::string_view rest = get(key);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = trim(rest.substr(0, comma));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

std::vector<std::uint64_t> RunConfig::get_seeds() const {
  std::vector<std::uint64_t> seeds;
  for (const auto& item : get_list("seeds")) {
    std::uint64_t value = 0;
    const auto* end = item.data() + item.size();
    const auto [ptr, ec] = std::from_chars(item.data(), end, value);
    if (ec != std::errc() || ptr != end) {
      throw ValidationError("bad seed '" + item + "'");
    }
    seeds.push_back(value);
  }
  if (seeds.empty()) throw ValidationError("seeds must not be empty");
  return seeds;
}

Mode RunConfig::get_mode() const { return parse_mode(get("mode")); }

ThresholdPolicy RunConfig::get_policy() const {
  return parse_threshold_policy(get("threshold_policy"));
}

std::string RunConfig::canonical_text() const {
  std::string out;
  for (const auto& key : config_keys()) {
    if (is_location_key(key.name)) continue;
    out += std::string(key.name) + "=" + get(key.name) + "\n";
  }
  return out;
}

std::string RunConfig::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& key : config_keys()) {
    if (is_location_key(key.name)) continue;
    j[std::string(key.name)] = get(key.name);
  }
  return j.dump();
}

std::uint64_t RunConfig::hash() const {
  const auto text = canonical_text();
  return fnv1a64(text.data(), text.size());
}

TrainConfig RunConfig::train_config(Mode mode, std::uint64_t seed) const {
  TrainConfig cfg;
  cfg.epochs = get_u64("epochs");
  cfg.batch_size = get_u64("batch_size");
  cfg.seed = seed;
  cfg.dropout = get_double("dropout");
  cfg.kl_coef = get_double("kl_coef");
  cfg.objective.mode = mode;
  cfg.objective.tau = get_double("tau");
  cfg.objective.lambda_pu = get_double("lambda_pu");
  cfg.objective.pu_enabled = get_bool("pu");
  cfg.objective.epsilon = get_double("epsilon");
  cfg.optimizer.lr = get_double("lr");
  cfg.optimizer.beta1 = get_double("beta1");
  cfg.optimizer.beta2 = get_double("beta2");
  cfg.optimizer.eps = get_double("adam_eps");
  cfg.optimizer.weight_decay = get_double("weight_decay");
  cfg.optimizer.warmup_ratio = get_double("warmup_ratio");
  cfg.optimizer.clip_norm = get_double("clip_norm");
  auto snapshot = nlohmann::ordered_json::parse(to_json());
  snapshot["mode"] = std::string(to_string(mode));
  snapshot["seed"] = std::to_string(seed);
  cfg.snapshot_json = snapshot.dump();
  validate(cfg);
  return cfg;
}

}  // namespace amw
