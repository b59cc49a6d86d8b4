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

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "amw/metrics.hpp"
#include "amw/trainer.hpp"
#include "amw/types.hpp"

namespace amw {

struct ConfigKey {
  std::string_view name;
  std::string_view default_value;
  std::string_view help;
};

// Every key RunConfig accepts, in canonical order.
const std::vector<ConfigKey>& config_keys();

// Flat key=value experiment configuration. Unknown keys and malformed values
// are rejected when set.
class RunConfig {
 public:
  RunConfig();

  void set(std::string_view key, std::string_view value);
  const std::string& get(std::string_view key) const;
  bool has_value(std::string_view key) const;  // non-empty effective value

  // `key=value` lines; '#' starts a comment; blank lines ignored.
  void merge_text(std::string_view text, std::string_view origin = "<text>");
  void merge_file(const std::filesystem::path& path);

  double get_double(std::string_view key) const;
  std::uint64_t get_u64(std::string_view key) const;
  bool get_bool(std::string_view key) const;
  std::vector<std::string> get_list(std::string_view key) const;
  std::vector<std::uint64_t> get_seeds() const;
  Mode get_mode() const;
  ThresholdPolicy get_policy() const;

  // All keys with effective values, canonical order, one `key=value` per line.
  std::string canonical_text() const;
  std::string to_json() const;
  std::uint64_t hash() const;

  // Training configuration for `mode` and `seed`.
  TrainConfig train_config(Mode mode, std::uint64_t seed) const;

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

}  // namespace amw
