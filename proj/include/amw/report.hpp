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
#include <string>
#include <vector>

#include "amw/analysis.hpp"
#include "amw/dataset.hpp"
#include "amw/metrics.hpp"
#include "amw/trainer.hpp"

namespace amw {

// Serialized reports: JSON text (one object) and aligned plain-text tables
// with 4-decimal metrics.

std::string metrics_json(const MetricsReport& report, const LabelSpace& space);
// One row per (name, report), columns HL, RL, miF1, maF1, AP, Jaccard.
std::string metrics_table(
    const std::vector<std::pair<std::string, MetricsReport>>& rows);

std::string entropy_bins_json(const EntropyBinReport& report);
std::string entropy_bins_table(const EntropyBinReport& report);

std::string label_uncertainty_json(const LabelUncertaintyReport& report);
std::string label_uncertainty_table(const LabelUncertaintyReport& report);

std::string stability_json(const StabilityReport& report);
std::string stability_table(const StabilityReport& report);

std::string neighbors_json(const std::vector<NeighborResult>& results,
                           const Dataset& query, const Dataset& bank);
std::string neighbors_table(const std::vector<NeighborResult>& results,
                            const Dataset& query, const Dataset& bank);

// One JSON object per line: a "step" record per optimizer step, an "epoch"
// record per dev evaluation and a final "selected" record.
std::string train_log_jsonl(const TrainLog& log);

// FNV-1a 64-bit.
std::uint64_t fnv1a64(const void* data, std::size_t size,
                      std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t value);

}  // namespace amw
