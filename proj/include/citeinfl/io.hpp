// Copyright 2026 The citeinfl Authors
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

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "citeinfl/analytics.hpp"
#include "citeinfl/disruption.hpp"
#include "citeinfl/generator.hpp"
#include "citeinfl/netcore.hpp"
#include "citeinfl/regress.hpp"

namespace citeinfl {

inline constexpr int kNetworkFormatVersion = 1;

// Numeric text for all outputs: 12 significant digits.
std::string format_number(double v);
std::string format_optional(const std::optional<double>& v);

// Writes `content` to a sibling temporary file, then renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// key=value run configuration.

struct RunConfig {
  GeneratorConfig generator;
  int ensemble_size = 4;
};

// One `key=value` per line, `#` starts a comment. Unknown keys, malformed
// lines and invalid values throw ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
std::string config_to_text(const RunConfig& config);
std::uint64_t config_hash(const RunConfig& config);
// JSON object with the same keys as the text format.
std::string config_to_json(const RunConfig& config);
RunConfig config_from_json(const std::string& text);

// ---------------------------------------------------------------------------
// Network files: nodes.csv, edges.csv and network.json in one directory.

void save_network(const CitationNetwork& net, const std::filesystem::path& dir,
                  const std::optional<RunConfig>& config = std::nullopt);
CitationNetwork load_network(const std::filesystem::path& dir);

std::string nodes_csv(const CitationNetwork& net);
std::string edges_csv(const CitationNetwork& net);

// ---------------------------------------------------------------------------
// Tables.

std::string records_csv(std::span<const DisruptionRecord> records);
std::vector<DisruptionRecord> parse_records_csv(const std::string& text, Period window = 0);

std::string series_csv(std::span<const SeriesRow> rows);
std::string ensemble_series_csv(std::span<const EnsembleRow> rows);
std::string histogram_csv(const IntervalHistogram& hist);
std::string histogram_label(const IntervalHistogram& hist);

struct IntervalFit {
  std::string interval;
  FitResult fit;
};
std::string fits_csv(std::span<const IntervalFit> fits);

// `y,period,<covariate...>` with a header line.
ObservationTable parse_table_csv(const std::string& text);
std::string table_csv(const ObservationTable& table);
std::string model_csv(const FixedEffectsModel& model);

}  // namespace citeinfl
