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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "amw/types.hpp"

namespace amw {

// Ordered, duplicate-free inventory of label names.
class LabelSpace {
 public:
  explicit LabelSpace(std::vector<std::string> names);

  // anger, anticipation, disgust, fear, joy, love, optimism, pessimism,
  // sadness, surprise, trust.
  static LabelSpace emotions();

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t k) const { return names_.at(k); }
  std::optional<std::size_t> index_of(std::string_view name) const;

  bool operator==(const LabelSpace&) const = default;

 private:
  std::vector<std::string> names_;
};

enum class Split { kTrain, kValidation, kTest };

std::string_view to_string(Split split);
Split parse_split(std::string_view text);

// Read-only view of one row of a Dataset.
struct MaskedInstance {
  std::string_view id;
  std::string_view lang;
  std::span<const float> h;
  std::span<const std::uint8_t> y;
  std::span<const std::uint8_t> m;
  std::string_view text;
};

// Immutable collection of instances sharing one LabelSpace and embedding
// dimension. Labels y are meaningful only where the mask m is 1.
class Dataset {
 public:
  Dataset(LabelSpace space, Matrix<float> embeddings, Matrix<std::uint8_t> y,
          Matrix<std::uint8_t> m, std::vector<std::string> ids,
          Split split = Split::kTrain);

  std::size_t size() const { return ids_.size(); }
  std::size_t dim() const { return embeddings_.cols(); }
  std::size_t num_labels() const { return space_.size(); }
  const LabelSpace& space() const { return space_; }
  Split split() const { return split_; }

  const Matrix<float>& embeddings() const { return embeddings_; }
  const Matrix<std::uint8_t>& labels() const { return y_; }
  const Matrix<std::uint8_t>& mask() const { return m_; }
  const std::vector<std::string>& ids() const { return ids_; }

  MaskedInstance instance(std::size_t i) const;
  bool fully_observed() const;
  bool has_texts() const { return !texts_.empty(); }

  // Copies with one attribute replaced.
  Dataset with_mask(Matrix<std::uint8_t> m) const;
  Dataset with_split(Split split) const;
  Dataset with_lang(std::string lang) const;
  // Texts keyed by id; ids without a text get an empty string.
  Dataset with_texts(const std::vector<std::pair<std::string, std::string>>& texts) const;

 private:
  LabelSpace space_;
  Matrix<float> embeddings_;
  Matrix<std::uint8_t> y_;
  Matrix<std::uint8_t> m_;
  std::vector<std::string> ids_;
  std::vector<std::string> langs_;
  std::vector<std::string> texts_;
  Split split_;
};

// ---------------------------------------------------------------------------
// File formats
// ---------------------------------------------------------------------------

enum class EmbeddingFormat { kText, kBinary };

struct EmbeddingTable {
  std::vector<std::string> ids;
  Matrix<float> values;
};

struct LabelTable {
  std::vector<std::string> columns;
  std::vector<std::string> ids;
  Matrix<std::uint8_t> y;
  Matrix<std::uint8_t> m;
};

// Auto-detects the binary form by its magic bytes.
EmbeddingTable read_embeddings(const std::filesystem::path& path);
void write_embeddings(const std::filesystem::path& path,
                      const EmbeddingTable& table, EmbeddingFormat format);

LabelTable read_labels(const std::filesystem::path& path);
void write_labels(const std::filesystem::path& path, const LabelTable& table);

std::vector<std::pair<std::string, std::string>> read_texts(
    const std::filesystem::path& path);

struct LoadOptions {
  // When set, file columns are mapped onto this space by name; labels of the
  // space missing from the file are unobserved for every instance. When
  // unset, the file header defines the space.
  std::optional<LabelSpace> space;
  Split split = Split::kTrain;
  std::string lang;
  std::optional<std::filesystem::path> texts_path;
};

Dataset load_dataset(const std::filesystem::path& labels_path,
                     const std::filesystem::path& embeddings_path,
                     const LoadOptions& options = {});

void save_dataset(const Dataset& data, const std::filesystem::path& labels_path,
                  const std::filesystem::path& embeddings_path,
                  EmbeddingFormat format = EmbeddingFormat::kBinary);

// Keeps each cell observed independently with probability rho. Cells already
// unobserved stay unobserved.
Dataset simulate_mask(const Dataset& data, double rho, std::uint64_t seed);

}  // namespace amw
