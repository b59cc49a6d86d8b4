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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "amw/amw.h"
#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct Scratch {
  fs::path path;
  Scratch() {
    std::string tmpl = (fs::temp_directory_path() / "amw-capi-XXXXXX").string();
    path = mkdtemp(tmpl.data());
  }
  ~Scratch() { fs::remove_all(path); }
  std::string file(const char* name) const { return (path / name).string(); }
};

struct Synth {
  amw_dataset* train = nullptr;
  amw_dataset* dev = nullptr;
  amw_model* truth = nullptr;
  Synth() {
    REQUIRE(amw_synthesize(120, 6, 3, 0.2, 5, &train, &truth) == AMW_OK);
    REQUIRE(amw_synthesize_from(truth, 60, 0.2, 6, AMW_SPLIT_VALIDATION, &dev) == AMW_OK);
  }
  ~Synth() {
    amw_dataset_destroy(train);
    amw_dataset_destroy(dev);
    amw_model_destroy(truth);
  }
};

amw_config* fast_config() {
  amw_config* c = nullptr;
  REQUIRE(amw_config_create(&c) == AMW_OK);
  REQUIRE(amw_config_set(c, "epochs", "2") == AMW_OK);
  REQUIRE(amw_config_set(c, "lr", "0.05") == AMW_OK);
  return c;
}

}  // namespace

TEST_SUITE("capi") {

TEST_CASE("version and status strings") {
  CHECK(std::string(amw_version()) == "1.0.0");
  CHECK(std::string(amw_status_string(AMW_ERR_IO)).size() > 0);
}

TEST_CASE("configuration handles") {
  amw_config* c = nullptr;
  REQUIRE(amw_config_create(&c) == AMW_OK);
  const char* v = nullptr;
  CHECK(amw_config_get(c, "tau", &v) == AMW_OK);
  CHECK(std::string(v) == "2.0");
  CHECK(amw_config_set(c, "bogus", "1") == AMW_ERR_INVALID_ARGUMENT);
  CHECK(std::string(amw_last_error()).find("bogus") != std::string::npos);
  uint64_t h1 = 0, h2 = 0;
  CHECK(amw_config_hash(c, &h1) == AMW_OK);
  CHECK(amw_config_set(c, "tau", "1.0") == AMW_OK);
  CHECK(amw_config_hash(c, &h2) == AMW_OK);
  CHECK(h1 != h2);
  CHECK(amw_config_key_count() > 10);
  CHECK(amw_config_key_name(amw_config_key_count()) == nullptr);
  CHECK(amw_config_merge_file(c, "/nonexistent/run.conf") == AMW_ERR_IO);
  amw_config_destroy(c);
}

TEST_CASE("train, save, load and evaluate") {
  Scratch dir;
  Synth s;
  amw_config* c = fast_config();
  amw_model* model = nullptr;
  amw_report* log = nullptr;
  REQUIRE(amw_train(c, AMW_MODE_AMBIGUITY, 3, s.train, s.dev, &model, &log) == AMW_OK);
  CHECK(std::string(amw_report_json(log)).find("\"selected\"") != std::string::npos);
  CHECK(amw_model_mode(model) == AMW_MODE_AMBIGUITY);
  CHECK(amw_model_num_labels(model) == 3);
  const auto path = dir.file("m.amlm");
  REQUIRE(amw_model_save(model, path.c_str()) == AMW_OK);
  amw_model* loaded = nullptr;
  REQUIRE(amw_model_load(path.c_str(), &loaded) == AMW_OK);

  std::vector<double> p(60 * 3);
  CHECK(amw_model_predict(loaded, s.dev, p.data(), p.size()) == AMW_OK);
  CHECK(amw_model_predict(loaded, s.dev, p.data(), 3) == AMW_ERR_INVALID_ARGUMENT);
  for (double v : p) CHECK((v > 0.0 && v < 1.0));

  amw_report* r = nullptr;
  REQUIRE(amw_evaluate(loaded, s.dev, AMW_THRESHOLD_FIXED, nullptr, &r) == AMW_OK);
  double mif1 = -1;
  CHECK(amw_report_metric(r, "mif1", &mif1) == AMW_OK);
  CHECK((mif1 >= 0.0 && mif1 <= 1.0));
  CHECK(amw_report_metric(r, "nope", &mif1) == AMW_ERR_INVALID_ARGUMENT);
  amw_report* tuned = nullptr;
  CHECK(amw_evaluate(loaded, s.dev, AMW_THRESHOLD_GLOBAL, nullptr, &tuned) ==
        AMW_ERR_INVALID_ARGUMENT);
  REQUIRE(amw_evaluate(loaded, s.dev, AMW_THRESHOLD_PER_LABEL, s.dev, &tuned) == AMW_OK);

  amw_stability* st = nullptr;
  REQUIRE(amw_stability_create(&st) == AMW_OK);
  CHECK(amw_stability_add(st, "synthetic", loaded, r) == AMW_OK);
  CHECK(amw_stability_add(st, "synthetic", loaded, tuned) == AMW_OK);
  amw_report* agg = nullptr;
  REQUIRE(amw_stability_report(st, &agg) == AMW_OK);
  CHECK(std::string(amw_report_text(agg)).find("synthetic") != std::string::npos);

  amw_report_destroy(agg);
  amw_stability_destroy(st);
  amw_report_destroy(tuned);
  amw_report_destroy(r);
  amw_report_destroy(log);
  amw_model_destroy(loaded);
  amw_model_destroy(model);
  amw_config_destroy(c);
}

TEST_CASE("dataset round trip and missing files") {
  Scratch dir;
  Synth s;
  const auto labels = dir.file("d.labels.tsv");
  const auto emb = dir.file("d.emb.tsv");
  REQUIRE(amw_dataset_save(s.dev, labels.c_str(), emb.c_str(), AMW_EMBEDDINGS_TEXT) == AMW_OK);
  amw_dataset* back = nullptr;
  REQUIRE(amw_dataset_load(labels.c_str(), emb.c_str(), nullptr, nullptr, 0,
                           AMW_SPLIT_VALIDATION, nullptr, &back) == AMW_OK);
  CHECK(amw_dataset_size(back) == 60);
  CHECK(amw_dataset_dim(back) == 6);
  CHECK(std::string(amw_dataset_id(back, 0)) == amw_dataset_id(s.dev, 0));
  amw_dataset* masked = nullptr;
  REQUIRE(amw_dataset_simulate_mask(back, 0.5, 1, &masked) == AMW_OK);
  CHECK(amw_dataset_observed_fraction(masked) < 1.0);
  CHECK(amw_dataset_observed_fraction(back) == 1.0);

  amw_dataset* none = nullptr;
  const auto missing = dir.file("absent.tsv");
  CHECK(amw_dataset_load(missing.c_str(), emb.c_str(), nullptr, nullptr, 0, AMW_SPLIT_TRAIN,
                         nullptr, &none) == AMW_ERR_IO);
  CHECK(std::string(amw_last_error()).find("absent.tsv") != std::string::npos);
  CHECK(none == nullptr);
  std::ofstream(dir.file("bad.tsv")) << "id\tanger\nx\t7\n";
  const auto bad = dir.file("bad.tsv");
  CHECK(amw_dataset_load(bad.c_str(), emb.c_str(), nullptr, nullptr, 0, AMW_SPLIT_TRAIN, nullptr,
                         &none) == AMW_ERR_FORMAT);
  amw_dataset_destroy(masked);
  amw_dataset_destroy(back);
}

TEST_CASE("analysis entry points") {
  Synth s;
  amw_report* r = nullptr;
  REQUIRE(amw_analyze_entropy_bins(s.truth, s.dev, 5, 2.0, &r) == AMW_OK);
  CHECK(std::string(amw_report_text(r)).find("H range") != std::string::npos);
  amw_report_destroy(r);
  REQUIRE(amw_analyze_label_uncertainty(s.truth, s.dev, &r) == AMW_OK);
  amw_report_destroy(r);
  REQUIRE(amw_analyze_nearest_neighbors(s.dev, s.train, 2, &r) == AMW_OK);
  amw_report_destroy(r);
  CHECK(amw_analyze_entropy_bins(s.truth, s.dev, 0, 2.0, &r) == AMW_ERR_INVALID_ARGUMENT);
}

TEST_CASE("checksum") {
  Scratch dir;
  std::ofstream(dir.file("f")) << "foobar";
  uint64_t h = 0;
  const auto f = dir.file("f");
  CHECK(amw_checksum_file(f.c_str(), &h) == AMW_OK);
  CHECK(h == 0x85944171f73967e8ULL);
  const auto g = dir.file("g");
  CHECK(amw_checksum_file(g.c_str(), &h) == AMW_ERR_IO);
}

}
