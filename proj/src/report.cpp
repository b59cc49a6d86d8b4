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

#include "amw/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace amw {
namespace {

using nlohmann::ordered_json;

ordered_json optional_json(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

ordered_json number_json(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::string fixed4(double v) {
  if (std::isnan(v)) return "-";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string fixed4(const std::optional<double>& v) {
  return v ? fixed4(*v) : std::string("-");
}

std::string full_precision(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string pm(const MeanStd& v) {
  if (std::isnan(v.mean)) return "-";
  return fixed4(v.mean) + " ± " + fixed4(v.std);
}

// Display width in code points; continuation bytes are not counted.
std::size_t display_width(const std::string& s) {
  std::size_t w = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++w;
  }
  return w;
}

// Plain-text table: first column left-aligned, the rest right-aligned,
// unless `left` marks a column as left-aligned.
class TextTable {
 public:
  explicit TextTable(std::vector<std::string> header,
                     std::vector<bool> left = {})
      : header_(std::move(header)), left_(std::move(left)) {
    left_.resize(header_.size(), false);
    left_[0] = true;
  }

  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string str() const {
    std::vector<std::size_t> width(header_.size(), 0);
    auto measure = [&](const std::vector<std::string>& row) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        width[c] = std::max(width[c], display_width(row[c]));
      }
    };
    measure(header_);
    for (const auto& row : rows_) measure(row);

    std::string out;
    auto emit = [&](const std::vector<std::string>& row) {
      std::string line;
      for (std::size_t c = 0; c < row.size(); ++c) {
        const std::string pad(width[c] - display_width(row[c]), ' ');
        if (c > 0) line += "  ";
        line += left_[c] ? row[c] + pad : pad + row[c];
      }
      while (!line.empty() && line.back() == ' ') line.pop_back();
      out += line + '\n';
    };
    emit(header_);
    std::size_t total = 0;
    for (auto w : width) total += w;
    total += 2 * (width.size() - 1);
    out += std::string(total, '-') + '\n';
    for (const auto& row : rows_) emit(row);
    return out;
  }

 private:
  std::vector<std::string> header_;
  std::vector<bool> left_;
  std::vector<std::vector<std::string>> rows_;
};

ordered_json metrics_object(const MetricsReport& r) {
  ordered_json m;
  m["hl"] = number_json(r.hl);
  m["rl"] = optional_json(r.rl);
  m["mif1"] = number_json(r.mif1);
  m["maf1"] = number_json(r.maf1);
  m["ap"] = optional_json(r.ap);
  m["jaccard"] = number_json(r.jaccard);
  return m;
}

ordered_json mean_std_json(const MeanStd& v) {
  return {{"mean", number_json(v.mean)}, {"std", number_json(v.std)}};
}

}  // namespace

std::string metrics_json(const MetricsReport& report, const LabelSpace& space) {
  ordered_json j;
  j["split"] = report.split;
  j["n"] = report.n;
  j["k"] = report.k;
  j["observed_cells"] = report.observed_cells;
  j["labels"] = space.names();
  j["threshold_policy"] = std::string(to_string(report.policy));
  j["thresholds"] = report.thresholds;
  j["metrics"] = metrics_object(report);
  ordered_json diag;
  diag["rl_skipped"] = report.rl_skipped;
  diag["ap_excluded"] = report.ap_excluded;
  diag["jaccard_both_empty"] = report.jaccard_both_empty;
  diag["maf1_degenerate"] = report.maf1_degenerate;
  diag["threshold_flagged"] = report.threshold_flagged;
  j["diagnostics"] = diag;
  return j.dump(2) + '\n';
}

std::string metrics_table(
    const std::vector<std::pair<std::string, MetricsReport>>& rows) {
  TextTable table({"Model", "HL", "RL", "miF1", "maF1", "AP", "Jaccard"});
  for (const auto& [name, r] : rows) {
    table.add({name, fixed4(r.hl), fixed4(r.rl), fixed4(r.mif1),
               fixed4(r.maf1), fixed4(r.ap), fixed4(r.jaccard)});
  }
  return table.str();
}

std::string entropy_bins_json(const EntropyBinReport& report) {
  ordered_json j;
  j["tau"] = report.tau;
  j["skipped"] = report.skipped;
  j["bins"] = ordered_json::array();
  for (std::size_t b = 0; b < report.bins.size(); ++b) {
    const auto& bin = report.bins[b];
    ordered_json e;
    e["bin"] = b + 1;
    e["h_lo"] = bin.h_lo;
    e["h_hi"] = bin.h_hi;
    e["count"] = bin.count;
    e["h_mean"] = bin.h_mean;
    e["w_mean"] = bin.w_mean;
    e["mif1"] = number_json(bin.mif1);
    e["ap"] = optional_json(bin.ap);
    j["bins"].push_back(e);
  }
  return j.dump(2) + '\n';
}

std::string entropy_bins_table(const EntropyBinReport& report) {
  TextTable table({"Bin", "H range", "#Inst", "H mean", "w mean", "miF1", "AP"},
                  {true, true});
  for (std::size_t b = 0; b < report.bins.size(); ++b) {
    const auto& bin = report.bins[b];
    table.add({std::to_string(b + 1),
               "[" + fixed4(bin.h_lo) + ", " + fixed4(bin.h_hi) + "]",
               std::to_string(bin.count), fixed4(bin.h_mean),
               fixed4(bin.w_mean), fixed4(bin.mif1), fixed4(bin.ap)});
  }
  return table.str();
}

std::string label_uncertainty_json(const LabelUncertaintyReport& report) {
  ordered_json j = ordered_json::array();
  for (const auto& l : report.labels) {
    j.push_back({{"label", l.name},
                 {"index", l.label},
                 {"h_mean", l.h_mean},
                 {"h_std", l.h_std},
                 {"p_mean", l.p_mean},
                 {"p_std", l.p_std}});
  }
  ordered_json out;
  out["labels"] = j;
  return out.dump(2) + '\n';
}

std::string label_uncertainty_table(const LabelUncertaintyReport& report) {
  TextTable table({"Emotion", "E[H_k]", "Std(H_k)", "E[p_k]", "Std(p_k)"});
  for (const auto& l : report.labels) {
    table.add({l.name, fixed4(l.h_mean), fixed4(l.h_std), fixed4(l.p_mean),
               fixed4(l.p_std)});
  }
  return table.str();
}

std::string stability_json(const StabilityReport& report) {
  ordered_json rows = ordered_json::array();
  for (const auto& r : report.rows) {
    ordered_json e;
    e["train"] = r.train_name;
    e["mode"] = std::string(to_string(r.mode));
    e["n"] = r.n;
    e["hl"] = mean_std_json(r.hl);
    e["rl"] = mean_std_json(r.rl);
    e["mif1"] = mean_std_json(r.mif1);
    e["maf1"] = mean_std_json(r.maf1);
    e["ap"] = mean_std_json(r.ap);
    e["jaccard"] = mean_std_json(r.jaccard);
    rows.push_back(e);
  }
  ordered_json out;
  out["rows"] = rows;
  return out.dump(2) + '\n';
}

std::string stability_table(const StabilityReport& report) {
  TextTable table({"Train", "Mode", "n", "HL", "RL", "miF1", "maF1", "AP",
                   "Jaccard"},
                  {true, true});
  for (const auto& r : report.rows) {
    table.add({r.train_name, std::string(to_string(r.mode)),
               std::to_string(r.n), pm(r.hl), pm(r.rl), pm(r.mif1),
               pm(r.maf1), pm(r.ap), pm(r.jaccard)});
  }
  return table.str();
}

namespace {

std::string display_text(const Dataset& data, std::size_t i) {
  const auto inst = data.instance(i);
  return inst.text.empty() ? std::string(inst.id) : std::string(inst.text);
}

std::string joined(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ',';
    out += n;
  }
  return out.empty() ? "-" : out;
}

}  // namespace

std::string neighbors_json(const std::vector<NeighborResult>& results,
                           const Dataset& query, const Dataset& bank) {
  ordered_json rows = ordered_json::array();
  for (const auto& r : results) {
    ordered_json e;
    e["query_id"] = r.query_id;
    e["lang"] = std::string(query.instance(r.query_index).lang);
    if (query.has_texts()) e["query_text"] = display_text(query, r.query_index);
    ordered_json nbs = ordered_json::array();
    for (const auto& nb : r.neighbors) {
      ordered_json n;
      n["bank_id"] = nb.bank_id;
      n["bank_index"] = nb.bank_index;
      if (bank.has_texts()) n["bank_text"] = display_text(bank, nb.bank_index);
      n["similarity"] = nb.similarity;
      n["labels"] = nb.labels;
      nbs.push_back(n);
    }
    e["neighbors"] = nbs;
    rows.push_back(e);
  }
  ordered_json out;
  out["queries"] = rows;
  return out.dump(2) + '\n';
}

std::string neighbors_table(const std::vector<NeighborResult>& results,
                            const Dataset& query, const Dataset& bank) {
  TextTable table({"Lang", "Query", "Nearest", "Sim.", "Labels"},
                  {true, true, true, false, true});
  for (const auto& r : results) {
    const auto lang = std::string(query.instance(r.query_index).lang);
    for (const auto& nb : r.neighbors) {
      table.add({lang.empty() ? "-" : lang, display_text(query, r.query_index),
                 display_text(bank, nb.bank_index),
                 full_precision(nb.similarity), joined(nb.labels)});
    }
  }
  return table.str();
}

std::string train_log_jsonl(const TrainLog& log) {
  std::string out;
  for (const auto& s : log.steps) {
    ordered_json e;
    e["type"] = "step";
    e["step"] = s.step;
    e["epoch"] = s.epoch;
    e["lr"] = s.lr;
    e["grad_norm"] = number_json(s.grad_norm);
    e["loss"] = number_json(s.loss.total);
    e["l_amb"] = number_json(s.loss.l_amb);
    e["l_pu"] = number_json(s.loss.l_pu);
    e["mean_entropy"] = number_json(s.loss.mean_entropy);
    e["mean_weight"] = number_json(s.loss.mean_weight);
    out += e.dump() + '\n';
  }
  for (const auto& ep : log.epochs) {
    ordered_json e;
    e["type"] = "epoch";
    e["epoch"] = ep.epoch;
    e["step"] = ep.step;
    e["dev"] = metrics_object(ep.dev);
    out += e.dump() + '\n';
  }
  ordered_json sel;
  sel["type"] = "selected";
  sel["epoch"] = log.selected_epoch;
  sel["step"] = log.selected_step;
  sel["dev_mif1"] = log.selected_mif1;
  out += sel.dump() + '\n';
  return out;
}

std::uint64_t fnv1a64(const void* data, std::size_t size, std::uint64_t seed) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace amw
