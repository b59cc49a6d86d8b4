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

// Command-line front end. Talks to the library only through amw.h.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "amw/amw.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumeric = 2;

struct Failure {
  int exit_code;
  std::string message;
};

void check(amw_status status) {
  if (status == AMW_OK) return;
  throw Failure{status == AMW_ERR_NUMERIC ? kExitNumeric : kExitValidation,
                amw_last_error()};
}

void fail(const std::string& message) {
  throw Failure{kExitValidation, message};
}

template <typename T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using Config = std::unique_ptr<amw_config, Deleter<amw_config, amw_config_destroy>>;
using DatasetPtr = std::unique_ptr<amw_dataset, Deleter<amw_dataset, amw_dataset_destroy>>;
using ModelPtr = std::unique_ptr<amw_model, Deleter<amw_model, amw_model_destroy>>;
using ReportPtr = std::unique_ptr<amw_report, Deleter<amw_report, amw_report_destroy>>;
using StabilityPtr =
    std::unique_ptr<amw_stability, Deleter<amw_stability, amw_stability_destroy>>;

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string get(const amw_config* cfg, const std::string& key) {
  const char* value = nullptr;
  check(amw_config_get(cfg, key.c_str(), &value));
  return value;
}

void set(amw_config* cfg, const std::string& key, const std::string& value) {
  check(amw_config_set(cfg, key.c_str(), value.c_str()));
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(text, &used);
    if (used == text.size() && text.find('-') == std::string::npos) return v;
  } catch (const std::exception&) {
  }
  fail("config key '" + key + "' expects a non-negative integer, got '" + text + "'");
  return 0;
}

double parse_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const auto v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  fail("config key '" + key + "' expects a number, got '" + text + "'");
  return 0;
}

std::uint64_t get_u64(const amw_config* cfg, const std::string& key) {
  return parse_u64(key, get(cfg, key));
}

double get_double(const amw_config* cfg, const std::string& key) {
  return parse_double(key, get(cfg, key));
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = item.find_last_not_of(" \t");
    out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

amw_mode parse_mode(const std::string& text) {
  if (text == "baseline") return AMW_MODE_BASELINE;
  if (text == "ambiguity") return AMW_MODE_AMBIGUITY;
  if (text == "evidential") return AMW_MODE_EVIDENTIAL;
  fail("unknown mode '" + text + "'");
  return AMW_MODE_BASELINE;
}

const char* mode_name(amw_mode mode) {
  switch (mode) {
    case AMW_MODE_BASELINE: return "baseline";
    case AMW_MODE_AMBIGUITY: return "ambiguity";
    case AMW_MODE_EVIDENTIAL: return "evidential";
  }
  return "?";
}

amw_threshold_policy parse_policy(const std::string& text) {
  if (text == "fixed" || text == "fixed_0.5") return AMW_THRESHOLD_FIXED;
  if (text == "global" || text == "global_tuned") return AMW_THRESHOLD_GLOBAL;
  if (text == "per_label" || text == "per_label_tuned") return AMW_THRESHOLD_PER_LABEL;
  fail("unknown threshold policy '" + text + "'");
  return AMW_THRESHOLD_FIXED;
}

amw_split split_of(const std::string& text) {
  if (text == "train") return AMW_SPLIT_TRAIN;
  if (text == "dev" || text == "validation") return AMW_SPLIT_VALIDATION;
  if (text == "test") return AMW_SPLIT_TEST;
  fail("unknown split '" + text + "'");
  return AMW_SPLIT_TEST;
}

std::string split_prefix(amw_split split) {
  switch (split) {
    case AMW_SPLIT_TRAIN: return "train";
    case AMW_SPLIT_VALIDATION: return "dev";
    case AMW_SPLIT_TEST: return "test";
  }
  return "test";
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot write " + path.string());
  out << content;
  if (!out) fail("error writing " + path.string());
}

std::string checksum(const std::string& path) {
  std::uint64_t h = 0;
  check(amw_checksum_file(path.c_str(), &h));
  return hex64(h);
}

ordered_json config_json(const amw_config* cfg) {
  const char* json = nullptr;
  check(amw_config_json(cfg, &json));
  return ordered_json::parse(json);
}

std::string config_hash(const amw_config* cfg) {
  std::uint64_t h = 0;
  check(amw_config_hash(cfg, &h));
  return hex64(h);
}

Config clone(const amw_config* cfg) {
  amw_config* raw = nullptr;
  check(amw_config_create(&raw));
  Config copy(raw);
  for (std::size_t i = 0; i < amw_config_key_count(); ++i) {
    const std::string key = amw_config_key_name(i);
    set(copy.get(), key, get(cfg, key));
  }
  return copy;
}

// Input files read by a command, recorded with their checksums.
class Inputs {
 public:
  // `recorded` replaces the path in the record; used for files under out_dir.
  void add(const std::string& key, const std::string& path,
           const std::string& recorded = "") {
    entries_[key] = {{"path", recorded.empty() ? path : recorded},
                     {"fnv1a64", checksum(path)}};
  }
  ordered_json json() const {
    ordered_json j = ordered_json::object();
    for (const auto& [k, v] : entries_) j[k] = v;
    return j;
  }

 private:
  std::map<std::string, ordered_json> entries_;
};

DatasetPtr load_split(const amw_config* cfg, amw_split split, Inputs& inputs) {
  const auto prefix = split_prefix(split);
  const auto labels = get(cfg, prefix + "_labels");
  const auto embeddings = get(cfg, prefix + "_embeddings");
  const auto texts = get(cfg, prefix + "_texts");
  if (labels.empty()) fail("config key '" + prefix + "_labels' is required");
  if (embeddings.empty()) fail("config key '" + prefix + "_embeddings' is required");
  const auto names = split_list(get(cfg, "labels"));
  std::vector<const char*> name_ptrs;
  for (const auto& n : names) name_ptrs.push_back(n.c_str());
  const auto lang = get(cfg, "lang");
  amw_dataset* raw = nullptr;
  check(amw_dataset_load(labels.c_str(), embeddings.c_str(),
                         texts.empty() ? nullptr : texts.c_str(),
                         name_ptrs.empty() ? nullptr : name_ptrs.data(),
                         name_ptrs.size(), split, lang.c_str(), &raw));
  DatasetPtr data(raw);
  inputs.add(prefix + "_labels", labels);
  inputs.add(prefix + "_embeddings", embeddings);
  if (!texts.empty()) inputs.add(prefix + "_texts", texts);
  return data;
}

ModelPtr load_model(const amw_config* cfg, Inputs& inputs) {
  const auto path = get(cfg, "model");
  if (path.empty()) fail("config key 'model' is required");
  amw_model* raw = nullptr;
  check(amw_model_load(path.c_str(), &raw));
  inputs.add("model", path);
  return ModelPtr(raw);
}

// Wraps a report with the effective configuration and input checksums.
std::string artifact(const amw_config* cfg, const Inputs& inputs,
                     const std::string& kind, const std::string& report_json) {
  ordered_json j;
  j["kind"] = kind;
  j["config_hash"] = config_hash(cfg);
  j["config"] = config_json(cfg);
  j["inputs"] = inputs.json();
  j["report"] = ordered_json::parse(report_json);
  return j.dump(2) + '\n';
}

fs::path out_dir(const amw_config* cfg) {
  fs::path dir = get(cfg, "out_dir");
  if (dir.empty()) fail("config key 'out_dir' is required");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail("cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

// ---- commands ---------------------------------------------------------------

int cmd_synth(amw_config* cfg) {
  const auto dir = out_dir(cfg);
  const auto seed = get_u64(cfg, "seed");
  const auto amb = get_double(cfg, "ambiguity_fraction");
  const auto rho = get_double(cfg, "rho");
  const auto fmt_name = get(cfg, "embeddings_format");
  amw_embedding_format fmt = AMW_EMBEDDINGS_BINARY;
  if (fmt_name == "text") fmt = AMW_EMBEDDINGS_TEXT;
  else if (fmt_name != "binary") fail("unknown embeddings_format '" + fmt_name + "'");
  const std::string ext = fmt == AMW_EMBEDDINGS_TEXT ? ".emb.tsv" : ".aemb";

  amw_dataset* train_raw = nullptr;
  amw_model* truth_raw = nullptr;
  check(amw_synthesize(get_u64(cfg, "n"), get_u64(cfg, "d"),
                       get_u64(cfg, "num_labels"), amb, seed, &train_raw,
                       &truth_raw));
  DatasetPtr train(train_raw);
  ModelPtr truth(truth_raw);
  if (rho < 1.0) {
    amw_dataset* masked = nullptr;
    check(amw_dataset_simulate_mask(train.get(), rho, seed, &masked));
    train.reset(masked);
  }
  amw_dataset* dev_raw = nullptr;
  check(amw_synthesize_from(truth.get(), get_u64(cfg, "n_dev"), amb, seed,
                            AMW_SPLIT_VALIDATION, &dev_raw));
  DatasetPtr dev(dev_raw);
  amw_dataset* test_raw = nullptr;
  check(amw_synthesize_from(truth.get(), get_u64(cfg, "n_test"), amb, seed,
                            AMW_SPLIT_TEST, &test_raw));
  DatasetPtr test(test_raw);

  std::string data_conf = "# synthetic dataset\n";
  ordered_json files = ordered_json::object();
  const std::pair<const char*, const amw_dataset*> splits[] = {
      {"train", train.get()}, {"dev", dev.get()}, {"test", test.get()}};
  for (const auto& [name, data] : splits) {
    const auto labels = (dir / (std::string(name) + ".labels.tsv")).string();
    const auto emb = (dir / (std::string(name) + ext)).string();
    check(amw_dataset_save(data, labels.c_str(), emb.c_str(), fmt));
    data_conf += std::string(name) + "_labels=" + labels + "\n";
    data_conf += std::string(name) + "_embeddings=" + emb + "\n";
    files[std::string(name) + "_labels"] = checksum(labels);
    files[std::string(name) + "_embeddings"] = checksum(emb);
  }
  const auto truth_path = (dir / "truth.amlm").string();
  check(amw_model_save(truth.get(), truth_path.c_str()));
  files["truth"] = checksum(truth_path);
  write_file(dir / "data.conf", data_conf);

  ordered_json manifest;
  manifest["kind"] = "synth";
  manifest["config_hash"] = config_hash(cfg);
  manifest["seed"] = get(cfg, "seed");
  manifest["config"] = config_json(cfg);
  manifest["outputs"] = files;
  write_file(dir / "manifest.json", manifest.dump(2) + '\n');
  std::cerr << "synth: wrote " << dir.string() << "\n";
  return kExitOk;
}

struct RunOutput {
  ModelPtr model;
  fs::path dir;
};

// Trains one (mode, seed) run into its own directory.
RunOutput train_run(const amw_config* cfg, const amw_dataset* train,
                    const amw_dataset* dev, const Inputs& inputs,
                    const fs::path& root) {
  const auto mode = parse_mode(get(cfg, "mode"));
  const auto seed = get_u64(cfg, "seed");
  const auto dir = root / (config_hash(cfg) + "-seed" + std::to_string(seed));
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail("cannot create " + dir.string() + ": " + ec.message());

  std::cerr << "train: mode=" << mode_name(mode) << " seed=" << seed << " -> "
            << dir.string() << "\n";
  amw_model* model_raw = nullptr;
  amw_report* log_raw = nullptr;
  check(amw_train(cfg, mode, seed, train, dev, &model_raw, &log_raw));
  ModelPtr model(model_raw);
  ReportPtr log(log_raw);

  const auto model_path = (dir / "model.amlm").string();
  check(amw_model_save(model.get(), model_path.c_str()));
  write_file(dir / "train_log.jsonl", amw_report_json(log.get()));
  write_file(dir / "train_log.txt", amw_report_text(log.get()));

  ordered_json manifest;
  manifest["kind"] = "train";
  manifest["config_hash"] = config_hash(cfg);
  manifest["seed"] = std::to_string(seed);
  manifest["mode"] = mode_name(mode);
  manifest["config"] = config_json(cfg);
  manifest["inputs"] = inputs.json();
  manifest["outputs"] = {{"model", checksum(model_path)}};
  write_file(dir / "manifest.json", manifest.dump(2) + '\n');
  return {std::move(model), dir};
}

int cmd_train(amw_config* cfg) {
  Inputs inputs;
  auto train = load_split(cfg, AMW_SPLIT_TRAIN, inputs);
  auto dev = load_split(cfg, AMW_SPLIT_VALIDATION, inputs);
  const auto root = out_dir(cfg);
  auto run = train_run(cfg, train.get(), dev.get(), inputs, root);
  std::cout << (run.dir / "model.amlm").string() << "\n";
  return kExitOk;
}

ReportPtr evaluate(const amw_config* cfg, const amw_model* model,
                   const amw_dataset* data, const amw_dataset* dev) {
  const auto policy = parse_policy(get(cfg, "threshold_policy"));
  amw_report* raw = nullptr;
  check(amw_evaluate(model, data, policy,
                     policy == AMW_THRESHOLD_FIXED ? nullptr : dev, &raw));
  return ReportPtr(raw);
}

int cmd_evaluate(amw_config* cfg) {
  Inputs inputs;
  auto model = load_model(cfg, inputs);
  const auto split = split_of(get(cfg, "split"));
  auto data = load_split(cfg, split, inputs);
  DatasetPtr dev;
  if (parse_policy(get(cfg, "threshold_policy")) != AMW_THRESHOLD_FIXED) {
    dev = load_split(cfg, AMW_SPLIT_VALIDATION, inputs);
  }
  auto report = evaluate(cfg, model.get(), data.get(), dev.get());
  const auto dir = out_dir(cfg);
  const auto stem = "metrics-" + split_prefix(split) + "-" + get(cfg, "threshold_policy");
  write_file(dir / (stem + ".json"),
             artifact(cfg, inputs, "metrics", amw_report_json(report.get())));
  write_file(dir / (stem + ".txt"), amw_report_text(report.get()));
  std::cout << "split: " << split_prefix(split)
            << "  policy: " << get(cfg, "threshold_policy") << "\n"
            << amw_report_text(report.get());
  return kExitOk;
}

int cmd_ablate(amw_config* cfg) {
  Inputs inputs;
  auto train = load_split(cfg, AMW_SPLIT_TRAIN, inputs);
  auto dev = load_split(cfg, AMW_SPLIT_VALIDATION, inputs);
  auto test = load_split(cfg, AMW_SPLIT_TEST, inputs);
  const auto modes = split_list(get(cfg, "modes"));
  const auto seeds = split_list(get(cfg, "seeds"));
  if (modes.empty()) fail("config key 'modes' must name at least one mode");
  if (seeds.empty()) fail("config key 'seeds' must name at least one seed");
  for (const auto& m : modes) parse_mode(m);
  for (const auto& s : seeds) parse_u64("seeds", s);
  const auto root = out_dir(cfg);
  const auto train_name = get(cfg, "train_name");

  amw_stability* stab_raw = nullptr;
  check(amw_stability_create(&stab_raw));
  StabilityPtr stability(stab_raw);
  for (const auto& mode : modes) {
    for (const auto& seed : seeds) {
      auto run_cfg = clone(cfg);
      set(run_cfg.get(), "mode", mode);
      set(run_cfg.get(), "seed", seed);
      auto run = train_run(run_cfg.get(), train.get(), dev.get(), inputs, root);
      auto report = evaluate(run_cfg.get(), run.model.get(), test.get(), dev.get());
      Inputs run_inputs = inputs;
      run_inputs.add("model", (run.dir / "model.amlm").string(),
                     (run.dir.filename() / "model.amlm").string());
      write_file(run.dir / "metrics-test.json",
                 artifact(run_cfg.get(), run_inputs, "metrics",
                          amw_report_json(report.get())));
      write_file(run.dir / "metrics-test.txt", amw_report_text(report.get()));
      check(amw_stability_add(stability.get(), train_name.c_str(),
                              run.model.get(), report.get()));
    }
  }
  amw_report* agg_raw = nullptr;
  check(amw_stability_report(stability.get(), &agg_raw));
  ReportPtr agg(agg_raw);
  const auto stem = config_hash(cfg) + "-ablation";
  write_file(root / (stem + ".json"),
             artifact(cfg, inputs, "ablation", amw_report_json(agg.get())));
  write_file(root / (stem + ".txt"), amw_report_text(agg.get()));
  std::cout << amw_report_text(agg.get());
  return kExitOk;
}

int cmd_analyze(amw_config* cfg, const std::string& which) {
  Inputs inputs;
  const auto split = split_of(get(cfg, "split"));
  ReportPtr report;
  amw_report* raw = nullptr;
  if (which == "nn") {
    auto query = load_split(cfg, split, inputs);
    auto bank = load_split(cfg, AMW_SPLIT_TRAIN, inputs);
    check(amw_analyze_nearest_neighbors(query.get(), bank.get(),
                                        get_u64(cfg, "k"), &raw));
  } else {
    auto model = load_model(cfg, inputs);
    auto data = load_split(cfg, split, inputs);
    if (which == "entropy-bins") {
      check(amw_analyze_entropy_bins(model.get(), data.get(),
                                     get_u64(cfg, "bins"),
                                     get_double(cfg, "tau"), &raw));
    } else {
      check(amw_analyze_label_uncertainty(model.get(), data.get(), &raw));
    }
  }
  report.reset(raw);
  const auto dir = out_dir(cfg);
  const auto stem = "analysis-" + which + "-" + split_prefix(split);
  write_file(dir / (stem + ".json"),
             artifact(cfg, inputs, which, amw_report_json(report.get())));
  write_file(dir / (stem + ".txt"), amw_report_text(report.get()));
  std::cout << amw_report_text(report.get());
  return kExitOk;
}

// Registers --config and one --<key> option per configuration key.
struct Overrides {
  std::string config_file;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
};

void add_config_options(CLI::App* app, Overrides& ov) {
  app->add_option("--config", ov.config_file, "key=value configuration file");
  for (std::size_t i = 0; i < amw_config_key_count(); ++i) {
    const std::string key = amw_config_key_name(i);
    const std::string def = amw_config_key_default(i);
    auto* opt = app->add_option("--" + key, ov.values[key],
                                std::string(amw_config_key_help(i)) +
                                    (def.empty() ? "" : " [" + def + "]"));
    if (def == "true" || def == "false") {
      opt->expected(0, 1);
    }
    ov.options[key] = opt;
  }
}

void apply(amw_config* cfg, const Overrides& ov) {
  if (!ov.config_file.empty()) check(amw_config_merge_file(cfg, ov.config_file.c_str()));
  for (const auto& [key, opt] : ov.options) {
    if (opt->count() == 0) continue;
    const auto& value = ov.values.at(key);
    set(cfg, key, value.empty() && opt->get_expected_min() == 0 ? "true" : value);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ambiguity-weighted multi-label learning on precomputed embeddings"};
  app.require_subcommand(1);
  app.set_version_flag("--version", amw_version());

  struct Command {
    CLI::App* app;
    Overrides ov;
  };
  std::map<std::string, Command> commands;
  auto add = [&](CLI::App* parent, const std::string& name,
                 const std::string& help) {
    auto* sub = parent->add_subcommand(name, help);
    auto& cmd = commands[name];
    cmd.app = sub;
    add_config_options(sub, cmd.ov);
  };
  add(&app, "synth", "write a synthetic dataset");
  add(&app, "train", "train one model");
  add(&app, "evaluate", "evaluate a model on a split");
  add(&app, "ablate", "train and evaluate modes x seeds and aggregate");
  auto* analyze = app.add_subcommand("analyze", "post-hoc analyses");
  analyze->require_subcommand(1);
  add(analyze, "entropy-bins", "metrics stratified by entropy");
  add(analyze, "label-uncertainty", "per-label entropy statistics");
  add(analyze, "nn", "cosine nearest neighbors in the train split");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    for (auto& [name, cmd] : commands) {
      if (!cmd.app->parsed()) continue;
      amw_config* raw = nullptr;
      check(amw_config_create(&raw));
      Config cfg(raw);
      apply(cfg.get(), cmd.ov);
      if (name == "synth") return cmd_synth(cfg.get());
      if (name == "train") return cmd_train(cfg.get());
      if (name == "evaluate") return cmd_evaluate(cfg.get());
      if (name == "ablate") return cmd_ablate(cfg.get());
      return cmd_analyze(cfg.get(), name);
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
