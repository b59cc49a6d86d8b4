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

#include "amw/dataset.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "amw/error.hpp"
#include "amw/rng.hpp"

namespace amw {

namespace {

constexpr char kEmbeddingMagic[4] = {'A', 'E', 'M', 'B'};
constexpr std::uint8_t kEmbeddingVersion = 0x01;

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error reading " + path.string());
  return bytes;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

// Splits text into lines without their terminators. A trailing empty line is
// dropped.
std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto pos = text.find('\n', start);
    if (pos == std::string_view::npos) pos = text.size();
    lines.push_back(strip_cr(text.substr(start, pos - start)));
    start = pos + 1;
  }
  return lines;
}

std::string where(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

float parse_float(std::string_view cell, const std::filesystem::path& path,
                  std::size_t line) {
  float value = 0.0f;
  const auto* first = cell.data();
  const auto* last = cell.data() + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || cell.empty()) {
    throw FormatError(where(path, line) + ": bad float '" + std::string(cell) +
                      "'");
  }
  return value;
}

std::string format_float(float value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

EmbeddingTable read_embeddings_text(std::string_view text,
                                    const std::filesystem::path& path) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw FormatError(path.string() + ": empty file");
  const auto header = split_tabs(lines[0]);
  if (header.size() != 2 || header[0] != "id" ||
      header[1].substr(0, 4) != "dim=") {
    throw FormatError(where(path, 1) + ": expected header 'id<TAB>dim=<d>'");
  }
  std::size_t dim = 0;
  {
    const auto digits = header[1].substr(4);
    const auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), dim);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || dim == 0) {
      throw FormatError(where(path, 1) + ": bad dimension '" +
                        std::string(digits) + "'");
    }
  }
  EmbeddingTable table;
  std::vector<float> values;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    const auto cells = split_tabs(lines[li]);
    if (cells.size() != dim + 1) {
      throw FormatError(where(path, li + 1) + ": dimension mismatch, expected " +
                        std::to_string(dim) + " values, found " +
                        std::to_string(cells.size() - 1));
    }
    table.ids.emplace_back(cells[0]);
    for (std::size_t j = 0; j < dim; ++j) {
      values.push_back(parse_float(cells[j + 1], path, li + 1));
    }
  }
  table.values = Matrix<float>(table.ids.size(), dim);
  table.values.data() = std::move(values);
  return table;
}

class ByteReader {
 public:
  ByteReader(std::string_view bytes, const std::filesystem::path& path)
      : bytes_(bytes), path_(path) {}

  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) {
      throw FormatError(path_.string() + ": truncated file at byte " +
                        std::to_string(pos_));
    }
  }
  template <typename T>
  T read() {
    need(sizeof(T));
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }
  std::string_view take(std::size_t n) {
    need(n);
    auto out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::string_view bytes_;
  const std::filesystem::path& path_;
  std::size_t pos_ = 0;
};

EmbeddingTable read_embeddings_binary(std::string_view bytes,
                                      const std::filesystem::path& path) {
  ByteReader in(bytes, path);
  in.take(4);
  const auto version = in.read<std::uint8_t>();
  if (version != kEmbeddingVersion) {
    throw FormatError(path.string() + ": unsupported embeddings version " +
                      std::to_string(version));
  }
  const auto n = in.read<std::uint32_t>();
  const auto dim = in.read<std::uint32_t>();
  if (dim == 0) throw FormatError(path.string() + ": zero dimension");
  EmbeddingTable table;
  table.ids.reserve(n);
  table.values = Matrix<float>(n, dim);
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto len = in.read<std::uint16_t>();
    table.ids.emplace_back(in.take(len));
    const auto raw = in.take(std::size_t{dim} * sizeof(float));
    std::memcpy(table.values.row(i).data(), raw.data(), raw.size());
  }
  if (!in.done()) {
    throw FormatError(path.string() + ": trailing bytes after " +
                      std::to_string(n) + " rows");
  }
  return table;
}

void check_unique(const std::vector<std::string>& ids,
                  const std::filesystem::path& path) {
  std::unordered_set<std::string_view> seen;
  for (const auto& id : ids) {
    if (id.empty()) throw FormatError(path.string() + ": empty id");
    if (!seen.insert(id).second) {
      throw FormatError(path.string() + ": duplicate id '" + id + "'");
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------

LabelSpace::LabelSpace(std::vector<std::string> names)
    : names_(std::move(names)) {
  if (names_.empty()) throw ValidationError("label space must not be empty");
  std::unordered_set<std::string_view> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw ValidationError("label names must be non-empty");
    if (n.find_first_of("\t\n\r") != std::string::npos) {
      throw ValidationError("label name '" + n + "' contains a tab or newline");
    }
    if (!seen.insert(n).second) {
      throw ValidationError("duplicate label name '" + n + "'");
    }
  }
}

LabelSpace LabelSpace::emotions() {
  return LabelSpace({"anger", "anticipation", "disgust", "fear", "joy", "love",
                     "optimism", "pessimism", "sadness", "surprise", "trust"});
}

std::optional<std::size_t> LabelSpace::index_of(std::string_view name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

std::string_view to_string(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kValidation:
      return "validation";
    case Split::kTest:
      return "test";
  }
  return "unknown";
}

Split parse_split(std::string_view text) {
  if (text == "train") return Split::kTrain;
  if (text == "validation" || text == "dev") return Split::kValidation;
  if (text == "test") return Split::kTest;
  throw ValidationError("unknown split '" + std::string(text) + "'");
}

Dataset::Dataset(LabelSpace space, Matrix<float> embeddings,
                 Matrix<std::uint8_t> y, Matrix<std::uint8_t> m,
                 std::vector<std::string> ids, Split split)
    : space_(std::move(space)),
      embeddings_(std::move(embeddings)),
      y_(std::move(y)),
      m_(std::move(m)),
      ids_(std::move(ids)),
      split_(split) {
  const auto n = ids_.size();
  if (n == 0) throw ValidationError("dataset must not be empty");
  if (embeddings_.rows() != n || embeddings_.cols() == 0) {
    throw ValidationError("embedding matrix does not match instance count");
  }
  const auto k = space_.size();
  if (y_.rows() != n || y_.cols() != k || m_.rows() != n || m_.cols() != k) {
    throw ValidationError("label or mask matrix does not match N x K");
  }
  for (std::size_t i = 0; i < y_.data().size(); ++i) {
    if (y_.data()[i] > 1 || m_.data()[i] > 1) {
      throw ValidationError("label and mask entries must be 0 or 1");
    }
  }
  langs_.assign(n, std::string());
}

MaskedInstance Dataset::instance(std::size_t i) const {
  return MaskedInstance{ids_.at(i),
                        langs_[i],
                        embeddings_.row(i),
                        y_.row(i),
                        m_.row(i),
                        texts_.empty() ? std::string_view() : texts_[i]};
}

bool Dataset::fully_observed() const {
  return std::all_of(m_.data().begin(), m_.data().end(),
                     [](std::uint8_t v) { return v == 1; });
}

Dataset Dataset::with_mask(Matrix<std::uint8_t> m) const {
  Dataset out = *this;
  if (m.rows() != m_.rows() || m.cols() != m_.cols()) {
    throw ValidationError("mask shape mismatch");
  }
  out.m_ = std::move(m);
  return out;
}

Dataset Dataset::with_split(Split split) const {
  Dataset out = *this;
  out.split_ = split;
  return out;
}

Dataset Dataset::with_lang(std::string lang) const {
  Dataset out = *this;
  out.langs_.assign(size(), lang);
  return out;
}

Dataset Dataset::with_texts(
    const std::vector<std::pair<std::string, std::string>>& texts) const {
  std::unordered_map<std::string_view, std::string_view> by_id;
  for (const auto& [id, text] : texts) by_id.emplace(id, text);
  Dataset out = *this;
  out.texts_.assign(size(), std::string());
  for (std::size_t i = 0; i < size(); ++i) {
    if (auto it = by_id.find(ids_[i]); it != by_id.end()) {
      out.texts_[i] = std::string(it->second);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

EmbeddingTable read_embeddings(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  EmbeddingTable table =
      bytes.size() >= 4 && std::memcmp(bytes.data(), kEmbeddingMagic, 4) == 0
          ? read_embeddings_binary(bytes, path)
          : read_embeddings_text(bytes, path);
  check_unique(table.ids, path);
  return table;
}

void write_embeddings(const std::filesystem::path& path,
                      const EmbeddingTable& table, EmbeddingFormat format) {
  const auto n = table.ids.size();
  const auto dim = table.values.cols();
  if (table.values.rows() != n) {
    throw ValidationError("embedding table rows do not match ids");
  }
  auto out = open_for_write(path);
  if (format == EmbeddingFormat::kText) {
    out << "id\tdim=" << dim << '\n';
    for (std::size_t i = 0; i < n; ++i) {
      out << table.ids[i];
      for (float v : table.values.row(i)) out << '\t' << format_float(v);
      out << '\n';
    }
  } else {
    if (n > UINT32_MAX || dim > UINT32_MAX) {
      throw ValidationError("embedding table too large for the binary format");
    }
    const auto n32 = static_cast<std::uint32_t>(n);
    const auto d32 = static_cast<std::uint32_t>(dim);
    out.write(kEmbeddingMagic, 4);
    out.put(static_cast<char>(kEmbeddingVersion));
    out.write(reinterpret_cast<const char*>(&n32), 4);
    out.write(reinterpret_cast<const char*>(&d32), 4);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& id = table.ids[i];
      if (id.size() > UINT16_MAX) throw ValidationError("id too long: " + id);
      const auto len = static_cast<std::uint16_t>(id.size());
      out.write(reinterpret_cast<const char*>(&len), 2);
      out.write(id.data(), static_cast<std::streamsize>(id.size()));
      out.write(reinterpret_cast<const char*>(table.values.row(i).data()),
                static_cast<std::streamsize>(dim * sizeof(float)));
    }
  }
  if (!out) throw IoError("error writing " + path.string());
}

LabelTable read_labels(const std::filesystem::path& path) {
  const auto text = read_file(path);
  const auto lines = split_lines(text);
  if (lines.empty()) throw FormatError(path.string() + ": empty labels file");
  const auto header = split_tabs(lines[0]);
  if (header.size() < 2 || header[0] != "id") {
    throw FormatError(where(path, 1) +
                      ": expected header 'id<TAB><label1>...<TAB><labelK>'");
  }
  LabelTable table;
  for (std::size_t c = 1; c < header.size(); ++c) {
    table.columns.emplace_back(header[c]);
  }
  const auto k = table.columns.size();
  std::vector<std::uint8_t> y, m;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    const auto cells = split_tabs(lines[li]);
    if (cells.size() != k + 1) {
      throw FormatError(where(path, li + 1) + ": expected " +
                        std::to_string(k) + " label cells, found " +
                        std::to_string(cells.size() - 1));
    }
    table.ids.emplace_back(cells[0]);
    for (std::size_t c = 1; c <= k; ++c) {
      const auto cell = cells[c];
      if (cell == "0" || cell == "1") {
        y.push_back(cell == "1" ? 1 : 0);
        m.push_back(1);
      } else if (cell == "?") {
        y.push_back(0);
        m.push_back(0);
      } else {
        throw FormatError(where(path, li + 1) + ": label cell '" +
                          std::string(cell) + "' is not 0, 1 or ?");
      }
    }
  }
  table.y = Matrix<std::uint8_t>(table.ids.size(), k);
  table.m = Matrix<std::uint8_t>(table.ids.size(), k);
  table.y.data() = std::move(y);
  table.m.data() = std::move(m);
  check_unique(table.ids, path);
  return table;
}

void write_labels(const std::filesystem::path& path, const LabelTable& table) {
  auto out = open_for_write(path);
  out << "id";
  for (const auto& c : table.columns) out << '\t' << c;
  out << '\n';
  for (std::size_t i = 0; i < table.ids.size(); ++i) {
    out << table.ids[i];
    for (std::size_t k = 0; k < table.columns.size(); ++k) {
      out << '\t'
          << (table.m(i, k) == 0 ? '?' : (table.y(i, k) != 0 ? '1' : '0'));
    }
    out << '\n';
  }
  if (!out) throw IoError("error writing " + path.string());
}

std::vector<std::pair<std::string, std::string>> read_texts(
    const std::filesystem::path& path) {
  const auto text = read_file(path);
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto line : split_lines(text)) {
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      out.emplace_back(std::string(line), std::string());
    } else {
      out.emplace_back(std::string(line.substr(0, tab)),
                       std::string(line.substr(tab + 1)));
    }
  }
  return out;
}

Dataset load_dataset(const std::filesystem::path& labels_path,
                     const std::filesystem::path& embeddings_path,
                     const LoadOptions& options) {
  auto labels = read_labels(labels_path);
  auto emb = read_embeddings(embeddings_path);

  LabelSpace space = options.space ? *options.space : LabelSpace(labels.columns);
  // column_of[c] = index in space of file column c
  std::vector<std::size_t> column_of;
  for (const auto& name : labels.columns) {
    const auto idx = space.index_of(name);
    if (!idx) {
      throw ValidationError(labels_path.string() + ": unknown label column '" +
                            name + "'");
    }
    column_of.push_back(*idx);
  }
  {
    std::unordered_set<std::size_t> seen(column_of.begin(), column_of.end());
    if (seen.size() != column_of.size()) {
      throw FormatError(labels_path.string() + ": duplicate label column");
    }
  }

  std::unordered_map<std::string_view, std::size_t> emb_row;
  for (std::size_t i = 0; i < emb.ids.size(); ++i) emb_row.emplace(emb.ids[i], i);
  std::unordered_set<std::string_view> label_ids(labels.ids.begin(),
                                                 labels.ids.end());
  for (const auto& id : emb.ids) {
    if (!label_ids.contains(id)) {
      throw ValidationError("missing labels for id " + id);
    }
  }

  const auto n = labels.ids.size();
  const auto k = space.size();
  const auto dim = emb.values.cols();
  Matrix<float> h(n, dim);
  Matrix<std::uint8_t> y(n, k, 0), m(n, k, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto it = emb_row.find(labels.ids[i]);
    if (it == emb_row.end()) {
      throw ValidationError("missing embedding for id " + labels.ids[i]);
    }
    std::copy_n(emb.values.row(it->second).begin(), dim, h.row(i).begin());
    for (std::size_t c = 0; c < column_of.size(); ++c) {
      y(i, column_of[c]) = labels.y(i, c);
      m(i, column_of[c]) = labels.m(i, c);
    }
  }
  Dataset data(std::move(space), std::move(h), std::move(y), std::move(m),
               std::move(labels.ids), options.split);
  if (!options.lang.empty()) data = data.with_lang(options.lang);
  if (options.texts_path) data = data.with_texts(read_texts(*options.texts_path));
  return data;
}

void save_dataset(const Dataset& data, const std::filesystem::path& labels_path,
                  const std::filesystem::path& embeddings_path,
                  EmbeddingFormat format) {
  write_labels(labels_path, LabelTable{data.space().names(), data.ids(),
                                       data.labels(), data.mask()});
  write_embeddings(embeddings_path, EmbeddingTable{data.ids(), data.embeddings()},
                   format);
}

Dataset simulate_mask(const Dataset& data, double rho, std::uint64_t seed) {
  if (!(rho > 0.0 && rho <= 1.0)) {
    throw ValidationError("observation rate rho must lie in (0, 1], got " +
                          std::to_string(rho));
  }
  auto m = data.mask();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t k = 0; k < m.cols(); ++k) {
      if (m(i, k) != 0 && counter_uniform(seed, stream::kMask, i, k) >= rho) {
        m(i, k) = 0;
      }
    }
  }
  return data.with_mask(std::move(m));
}

}  // namespace amw
