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

#include "amw/amw.h"

#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "amw/analysis.hpp"
#include "amw/dataset.hpp"
#include "amw/error.hpp"
#include "amw/heads.hpp"
#include "amw/metrics.hpp"
#include "amw/report.hpp"
#include "amw/run_config.hpp"
#include "amw/synthetic.hpp"
#include "amw/trainer.hpp"

struct amw_config {
  amw::RunConfig config;
  std::string text;  // backing storage for returned strings
  std::string json;
};

struct amw_dataset {
  amw::Dataset data;
};

struct amw_model {
  amw::ModelBundle bundle;
};

struct amw_report {
  std::string json;
  std::string text;
  std::optional<amw::MetricsReport> metrics;
};

struct amw_stability {
  std::vector<amw::RunSummary> runs;
};

namespace {

thread_local std::string g_last_error;

template <typename F>
amw_status guarded(F&& f) {
  try {
    f();
    return AMW_OK;
  } catch (const amw::ValidationError& e) {
    g_last_error = e.what();
    return AMW_ERR_INVALID_ARGUMENT;
  } catch (const amw::IoError& e) {
    g_last_error = e.what();
    return AMW_ERR_IO;
  } catch (const amw::FormatError& e) {
    g_last_error = e.what();
    return AMW_ERR_FORMAT;
  } catch (const amw::NumericError& e) {
    g_last_error = e.what();
    return AMW_ERR_NUMERIC;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return AMW_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return AMW_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return AMW_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw amw::ValidationError(what);
}

amw::Split to_split(amw_split split) {
  switch (split) {
    case AMW_SPLIT_TRAIN: return amw::Split::kTrain;
    case AMW_SPLIT_VALIDATION: return amw::Split::kValidation;
    case AMW_SPLIT_TEST: return amw::Split::kTest;
  }
  throw amw::ValidationError("unknown split");
}

amw::Mode to_mode(amw_mode mode) {
  switch (mode) {
    case AMW_MODE_BASELINE: return amw::Mode::kBaseline;
    case AMW_MODE_AMBIGUITY: return amw::Mode::kAmbiguity;
    case AMW_MODE_EVIDENTIAL: return amw::Mode::kEvidential;
  }
  throw amw::ValidationError("unknown mode");
}

amw::ThresholdPolicy to_policy(amw_threshold_policy policy) {
  switch (policy) {
    case AMW_THRESHOLD_FIXED: return amw::ThresholdPolicy::kFixed;
    case AMW_THRESHOLD_GLOBAL: return amw::ThresholdPolicy::kGlobalTuned;
    case AMW_THRESHOLD_PER_LABEL: return amw::ThresholdPolicy::kPerLabelTuned;
  }
  throw amw::ValidationError("unknown threshold policy");
}

std::string epoch_table(const amw::TrainLog& log) {
  std::vector<std::pair<std::string, amw::MetricsReport>> rows;
  for (const auto& e : log.epochs) {
    rows.emplace_back("epoch " + std::to_string(e.epoch + 1), e.dev);
  }
  return amw::metrics_table(rows) + "selected epoch " +
         std::to_string(log.selected_epoch + 1) + "\n";
}

}  // namespace

extern "C" {

const char* amw_version(void) { return "1.0.0"; }

const char* amw_last_error(void) { return g_last_error.c_str(); }

const char* amw_status_string(amw_status status) {
  switch (status) {
    case AMW_OK: return "ok";
    case AMW_ERR_INVALID_ARGUMENT: return "invalid argument";
    case AMW_ERR_IO: return "i/o error";
    case AMW_ERR_FORMAT: return "format error";
    case AMW_ERR_NUMERIC: return "numeric error";
    case AMW_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

// ---- Configuration -------------------------------------------------------

size_t amw_config_key_count(void) { return amw::config_keys().size(); }

const char* amw_config_key_name(size_t index) {
  const auto& keys = amw::config_keys();
  return index < keys.size() ? keys[index].name.data() : nullptr;
}

const char* amw_config_key_default(size_t index) {
  const auto& keys = amw::config_keys();
  return index < keys.size() ? keys[index].default_value.data() : nullptr;
}

const char* amw_config_key_help(size_t index) {
  const auto& keys = amw::config_keys();
  return index < keys.size() ? keys[index].help.data() : nullptr;
}

amw_status amw_config_create(amw_config** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = new amw_config{};
  });
}

void amw_config_destroy(amw_config* config) { delete config; }

amw_status amw_config_set(amw_config* config, const char* key,
                          const char* value) {
  return guarded([&] {
    require(config && key && value, "null argument");
    config->config.set(key, value);
  });
}

amw_status amw_config_get(const amw_config* config, const char* key,
                          const char** value) {
  return guarded([&] {
    require(config && key && value, "null argument");
    *value = config->config.get(key).c_str();
  });
}

amw_status amw_config_merge_file(amw_config* config, const char* path) {
  return guarded([&] {
    require(config && path, "null argument");
    config->config.merge_file(path);
  });
}

amw_status amw_config_text(const amw_config* config, const char** text) {
  return guarded([&] {
    require(config && text, "null argument");
    auto* mut = const_cast<amw_config*>(config);
    mut->text = config->config.canonical_text();
    *text = mut->text.c_str();
  });
}

amw_status amw_config_json(const amw_config* config, const char** json) {
  return guarded([&] {
    require(config && json, "null argument");
    auto* mut = const_cast<amw_config*>(config);
    mut->json = config->config.to_json();
    *json = mut->json.c_str();
  });
}

amw_status amw_config_hash(const amw_config* config, uint64_t* hash) {
  return guarded([&] {
    require(config && hash, "null argument");
    *hash = config->config.hash();
  });
}

// ---- Datasets --------------------------------------------------------------

amw_status amw_dataset_load(const char* labels_path,
                            const char* embeddings_path,
                            const char* texts_path,
                            const char* const* label_names, size_t n_labels,
                            amw_split split, const char* lang,
                            amw_dataset** out) {
  return guarded([&] {
    require(labels_path && embeddings_path && out, "null argument");
    require(n_labels == 0 || label_names != nullptr, "label_names is null");
    amw::LoadOptions options;
    if (n_labels > 0) {
      std::vector<std::string> names(label_names, label_names + n_labels);
      options.space = amw::LabelSpace(std::move(names));
    }
    options.split = to_split(split);
    if (lang) options.lang = lang;
    if (texts_path && *texts_path) options.texts_path = texts_path;
    *out = new amw_dataset{
        amw::load_dataset(labels_path, embeddings_path, options)};
  });
}

amw_status amw_dataset_save(const amw_dataset* data, const char* labels_path,
                            const char* embeddings_path,
                            amw_embedding_format format) {
  return guarded([&] {
    require(data && labels_path && embeddings_path, "null argument");
    require(format == AMW_EMBEDDINGS_TEXT || format == AMW_EMBEDDINGS_BINARY,
            "unknown embedding format");
    amw::save_dataset(data->data, labels_path, embeddings_path,
                      format == AMW_EMBEDDINGS_TEXT
                          ? amw::EmbeddingFormat::kText
                          : amw::EmbeddingFormat::kBinary);
  });
}

void amw_dataset_destroy(amw_dataset* data) { delete data; }

size_t amw_dataset_size(const amw_dataset* data) {
  return data ? data->data.size() : 0;
}

size_t amw_dataset_dim(const amw_dataset* data) {
  return data ? data->data.dim() : 0;
}

size_t amw_dataset_num_labels(const amw_dataset* data) {
  return data ? data->data.num_labels() : 0;
}

const char* amw_dataset_label_name(const amw_dataset* data, size_t k) {
  if (!data || k >= data->data.num_labels()) return nullptr;
  return data->data.space().name(k).c_str();
}

const char* amw_dataset_id(const amw_dataset* data, size_t i) {
  if (!data || i >= data->data.size()) return nullptr;
  return data->data.ids()[i].c_str();
}

double amw_dataset_observed_fraction(const amw_dataset* data) {
  if (!data) return 0.0;
  const auto& m = data->data.mask();
  std::size_t observed = 0;
  for (auto v : m.data()) observed += v;
  return m.data().empty() ? 0.0
                          : static_cast<double>(observed) /
                                static_cast<double>(m.data().size());
}

amw_status amw_dataset_simulate_mask(const amw_dataset* data, double rho,
                                     uint64_t seed, amw_dataset** out) {
  return guarded([&] {
    require(data && out, "null argument");
    *out = new amw_dataset{amw::simulate_mask(data->data, rho, seed)};
  });
}

amw_status amw_synthesize(size_t n, size_t dim, size_t num_labels,
                          double ambiguity_fraction, uint64_t seed,
                          amw_dataset** out, amw_model** truth) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    auto synth = amw::generate_synthetic(n, dim, num_labels,
                                         ambiguity_fraction, seed);
    std::unique_ptr<amw_model> model;
    if (truth) {
      amw::ModelBundle bundle;
      bundle.mode = amw::Mode::kBaseline;
      bundle.space = synth.sample.data.space();
      bundle.head = std::move(synth.truth);
      model = std::make_unique<amw_model>(amw_model{std::move(bundle)});
    }
    *out = new amw_dataset{std::move(synth.sample.data)};
    if (truth) *truth = model.release();
  });
}

amw_status amw_synthesize_from(const amw_model* truth, size_t n,
                               double ambiguity_fraction, uint64_t seed,
                               amw_split split, amw_dataset** out) {
  return guarded([&] {
    require(truth && out, "null argument");
    require(truth->bundle.mode != amw::Mode::kEvidential,
            "ground truth must be a linear model");
    auto sample =
        amw::sample_synthetic(truth->bundle.head, truth->bundle.space, n,
                              ambiguity_fraction, seed, to_split(split));
    *out = new amw_dataset{std::move(sample.data)};
  });
}

// ---- Models ----------------------------------------------------------------

amw_status amw_train(const amw_config* config, amw_mode mode, uint64_t seed,
                     const amw_dataset* train, const amw_dataset* dev,
                     amw_model** out, amw_report** log) {
  return guarded([&] {
    require(config && train && dev && out, "null argument");
    const auto cfg = config->config.train_config(to_mode(mode), seed);
    auto result = amw::train(train->data, dev->data, cfg);
    std::unique_ptr<amw_report> report;
    if (log) {
      report = std::make_unique<amw_report>();
      report->json = amw::train_log_jsonl(result.log);
      report->text = epoch_table(result.log);
    }
    *out = new amw_model{std::move(result.model)};
    if (log) *log = report.release();
  });
}

amw_status amw_model_save(const amw_model* model, const char* path) {
  return guarded([&] {
    require(model && path, "null argument");
    amw::save_model(model->bundle, path);
  });
}

amw_status amw_model_load(const char* path, amw_model** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new amw_model{amw::load_model(path)};
  });
}

void amw_model_destroy(amw_model* model) { delete model; }

amw_mode amw_model_mode(const amw_model* model) {
  return model ? static_cast<amw_mode>(model->bundle.mode) : AMW_MODE_BASELINE;
}

size_t amw_model_dim(const amw_model* model) {
  return model ? model->bundle.dim() : 0;
}

size_t amw_model_num_labels(const amw_model* model) {
  return model ? model->bundle.num_labels() : 0;
}

const char* amw_model_label_name(const amw_model* model, size_t k) {
  if (!model || k >= model->bundle.num_labels()) return nullptr;
  return model->bundle.space.name(k).c_str();
}

amw_status amw_model_predict(const amw_model* model, const amw_dataset* data,
                             double* out, size_t capacity) {
  return guarded([&] {
    require(model && data && out, "null argument");
    const auto p = amw::predict_proba(model->bundle, data->data);
    require(capacity >= p.data().size(), "output buffer too small");
    std::copy(p.data().begin(), p.data().end(), out);
  });
}

// ---- Evaluation and analysis -----------------------------------------------

amw_status amw_evaluate(const amw_model* model, const amw_dataset* data,
                        amw_threshold_policy policy, const amw_dataset* dev,
                        amw_report** out) {
  return guarded([&] {
    require(model && data && out, "null argument");
    const auto report = amw::evaluate(model->bundle, data->data,
                                      to_policy(policy),
                                      dev ? &dev->data : nullptr);
    auto r = std::make_unique<amw_report>();
    r->json = amw::metrics_json(report, data->data.space());
    r->text = amw::metrics_table({{std::string(amw::to_string(model->bundle.mode)),
                                   report}});
    r->metrics = report;
    *out = r.release();
  });
}

amw_status amw_analyze_entropy_bins(const amw_model* model,
                                    const amw_dataset* data, size_t n_bins,
                                    double tau, amw_report** out) {
  return guarded([&] {
    require(model && data && out, "null argument");
    const auto report =
        amw::entropy_bins(model->bundle, data->data, n_bins, tau);
    *out = new amw_report{amw::entropy_bins_json(report),
                          amw::entropy_bins_table(report), std::nullopt};
  });
}

amw_status amw_analyze_label_uncertainty(const amw_model* model,
                                         const amw_dataset* data,
                                         amw_report** out) {
  return guarded([&] {
    require(model && data && out, "null argument");
    const auto report = amw::label_uncertainty(model->bundle, data->data);
    *out = new amw_report{amw::label_uncertainty_json(report),
                          amw::label_uncertainty_table(report), std::nullopt};
  });
}

amw_status amw_analyze_nearest_neighbors(const amw_dataset* query,
                                         const amw_dataset* bank, size_t k,
                                         amw_report** out) {
  return guarded([&] {
    require(query && bank && out, "null argument");
    const auto results = amw::nearest_neighbors(query->data, bank->data, k);
    *out = new amw_report{
        amw::neighbors_json(results, query->data, bank->data),
        amw::neighbors_table(results, query->data, bank->data), std::nullopt};
  });
}

amw_status amw_stability_create(amw_stability** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = new amw_stability{};
  });
}

void amw_stability_destroy(amw_stability* stability) { delete stability; }

amw_status amw_stability_add(amw_stability* stability, const char* train_name,
                             const amw_model* model,
                             const amw_report* report) {
  return guarded([&] {
    require(stability && train_name && model && report, "null argument");
    require(report->metrics.has_value(), "report is not a metrics report");
    stability->runs.push_back(amw::RunSummary{
        train_name, model->bundle.mode, model->bundle.space, *report->metrics});
  });
}

amw_status amw_stability_report(const amw_stability* stability,
                                amw_report** out) {
  return guarded([&] {
    require(stability && out, "null argument");
    const auto report = amw::aggregate_seeds(stability->runs);
    *out = new amw_report{amw::stability_json(report),
                          amw::stability_table(report), std::nullopt};
  });
}

// ---- Reports ---------------------------------------------------------------

const char* amw_report_json(const amw_report* report) {
  return report ? report->json.c_str() : nullptr;
}

const char* amw_report_text(const amw_report* report) {
  return report ? report->text.c_str() : nullptr;
}

amw_status amw_report_metric(const amw_report* report, const char* name,
                             double* value) {
  return guarded([&] {
    require(report && name && value, "null argument");
    require(report->metrics.has_value(), "report is not a metrics report");
    const auto& m = *report->metrics;
    const std::string key = name;
    std::optional<double> v;
    if (key == "hl") v = m.hl;
    else if (key == "rl") v = m.rl;
    else if (key == "mif1") v = m.mif1;
    else if (key == "maf1") v = m.maf1;
    else if (key == "ap") v = m.ap;
    else if (key == "jaccard") v = m.jaccard;
    else throw amw::ValidationError("unknown metric '" + key + "'");
    require(v.has_value(), "metric undefined for this report");
    *value = *v;
  });
}

void amw_report_destroy(amw_report* report) { delete report; }

// ---- Utilities -------------------------------------------------------------

amw_status amw_checksum_file(const char* path, uint64_t* out) {
  return guarded([&] {
    require(path && out, "null argument");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw amw::IoError(std::string("cannot open ") + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    std::vector<char> buf(1 << 16);
    while (in) {
      in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
      const auto got = static_cast<std::size_t>(in.gcount());
      if (got > 0) h = amw::fnv1a64(buf.data(), got, h);
    }
    if (in.bad()) throw amw::IoError(std::string("error reading ") + path);
    *out = h;
  });
}

}  // extern "C"
