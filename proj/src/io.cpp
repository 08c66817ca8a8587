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

#include "citeinfl/io.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include "citeinfl/errors.hpp"
#include "json.hpp"

namespace citeinfl {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

template <typename Int>
bool parse_int(const std::string& s, Int& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end && !s.empty();
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  try {
    std::size_t pos = 0;
    out = std::stod(s, &pos);
    return pos == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

// Line reader that tracks 1-based line numbers for error messages.
class LineReader {
 public:
  LineReader(const std::string& text, std::string source)
      : in_(text), source_(std::move(source)) {}

  bool next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++number_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(source_ + ":" + std::to_string(number_) + ": " + what);
  }

  std::size_t number() const { return number_; }

 private:
  std::istringstream in_;
  std::string source_;
  std::size_t number_ = 0;
};

json config_object(const RunConfig& c) {
  const auto& g = c.generator;
  json j;
  j["g_n"] = g.schedule.g_n;
  j["g_r"] = g.schedule.g_r;
  j["n0"] = g.schedule.n0;
  j["r0"] = g.schedule.r0;
  j["T"] = g.schedule.T;
  j["T_star"] = g.schedule.cap_period ? json(*g.schedule.cap_period) : json(nullptr);
  j["r_cap"] = g.schedule.cap_value ? json(*g.schedule.cap_value) : json(nullptr);
  j["period_offset"] = g.schedule.period_offset;
  j["beta_mode"] = BetaSchedule::mode_name(g.beta.mode);
  j["beta"] = g.beta.value;
  j["c_cross"] = g.c_cross;
  j["alpha"] = g.alpha;
  j["seed"] = g.seed;
  j["ensemble_size"] = c.ensemble_size;
  return j;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  return fmt::format("{:.12g}", v);
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  auto& g = cfg.generator;
  std::map<std::string, std::string> seen;
  LineReader reader(text, "config");
  std::string line;
  while (reader.next(line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(reader.number()) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (seen.contains(key)) throw ConfigError("duplicate key '" + key + "'");
    seen[key] = value;

    auto real = [&]() {
      double v = 0;
      if (!parse_double(value, v)) throw ConfigError("key '" + key + "': not a number: " + value);
      return v;
    };
    auto integer = [&]() {
      std::int64_t v = 0;
      if (!parse_int(value, v)) throw ConfigError("key '" + key + "': not an integer: " + value);
      return v;
    };

    if (key == "g_n") {
      g.schedule.g_n = real();
    } else if (key == "g_r") {
      g.schedule.g_r = real();
    } else if (key == "n0") {
      g.schedule.n0 = real();
    } else if (key == "r0") {
      g.schedule.r0 = real();
    } else if (key == "T") {
      g.schedule.T = static_cast<Period>(integer());
    } else if (key == "T_star") {
      g.schedule.cap_period = static_cast<Period>(integer());
    } else if (key == "r_cap") {
      g.schedule.cap_value = integer();
    } else if (key == "period_offset") {
      g.schedule.period_offset = static_cast<int>(integer());
    } else if (key == "beta_mode") {
      g.beta.mode = BetaSchedule::parse_mode(value);
    } else if (key == "beta") {
      g.beta.value = real();
    } else if (key == "c_cross") {
      g.c_cross = real();
    } else if (key == "alpha") {
      g.alpha = real();
    } else if (key == "seed") {
      std::uint64_t s = 0;
      if (!parse_int(value, s)) throw ConfigError("key 'seed': not an unsigned integer: " + value);
      g.seed = s;
    } else if (key == "ensemble_size") {
      cfg.ensemble_size = static_cast<int>(integer());
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
  if (seen.contains("beta") && !seen.contains("beta_mode")) {
    g.beta.mode = BetaSchedule::Mode::kConstant;
  }
  if (cfg.ensemble_size < 1) throw ConfigError("ensemble_size must be >= 1");
  g.validate();
  return cfg;
}

RunConfig load_config(const fs::path& path) { return parse_config(read_file(path)); }

std::string config_to_text(const RunConfig& c) {
  const auto& g = c.generator;
  std::string out;
  out += "g_n=" + format_number(g.schedule.g_n) + "\n";
  out += "g_r=" + format_number(g.schedule.g_r) + "\n";
  out += "n0=" + format_number(g.schedule.n0) + "\n";
  out += "r0=" + format_number(g.schedule.r0) + "\n";
  out += "T=" + std::to_string(g.schedule.T) + "\n";
  if (g.schedule.cap_period) {
    out += "T_star=" + std::to_string(*g.schedule.cap_period) + "\n";
    out += "r_cap=" + std::to_string(*g.schedule.cap_value) + "\n";
  }
  out += "period_offset=" + std::to_string(g.schedule.period_offset) + "\n";
  out += "beta_mode=" + BetaSchedule::mode_name(g.beta.mode) + "\n";
  if (g.beta.mode == BetaSchedule::Mode::kConstant) out += "beta=" + format_number(g.beta.value) + "\n";
  out += "c_cross=" + format_number(g.c_cross) + "\n";
  out += "alpha=" + format_number(g.alpha) + "\n";
  out += "seed=" + std::to_string(g.seed) + "\n";
  out += "ensemble_size=" + std::to_string(c.ensemble_size) + "\n";
  return out;
}

std::string config_to_json(const RunConfig& config) { return config_object(config).dump(); }

RunConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config json: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config json must be an object");
  std::string lines;
  for (const auto& [key, value] : j.items()) {
    if (value.is_null()) continue;
    lines += key + "=" + (value.is_string() ? value.get<std::string>() : value.dump()) + "\n";
  }
  return parse_config(lines);
}

std::uint64_t config_hash(const RunConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : config_to_text(config)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// ---------------------------------------------------------------------------

std::string nodes_csv(const CitationNetwork& net) {
  std::string out = "id,cohort\n";
  out.reserve(net.num_nodes() * 12);
  for (NodeId v = 0; v < net.num_nodes(); ++v) {
    out += fmt::format("{},{}\n", v, net.cohort(v));
  }
  return out;
}

std::string edges_csv(const CitationNetwork& net) {
  std::string out = "citing_id,cited_id\n";
  out.reserve(net.num_edges() * 14);
  for (NodeId a = 0; a < net.num_nodes(); ++a) {
    for (NodeId b : net.references(a)) out += fmt::format("{},{}\n", a, b);
  }
  return out;
}

void save_network(const CitationNetwork& net, const fs::path& dir,
                  const std::optional<RunConfig>& config) {
  json meta;
  meta["format"] = "citeinfl-network";
  meta["version"] = kNetworkFormatVersion;
  meta["nodes"] = net.num_nodes();
  meta["edges"] = net.num_edges();
  meta["periods"] = net.num_cohorts();
  meta["config"] = config ? config_object(*config) : json(nullptr);
  write_file_atomic(dir / "nodes.csv", nodes_csv(net));
  write_file_atomic(dir / "edges.csv", edges_csv(net));
  write_file_atomic(dir / "network.json", meta.dump(2) + "\n");
}

CitationNetwork load_network(const fs::path& dir) {
  json meta;
  try {
    meta = json::parse(read_file(dir / "network.json"));
  } catch (const json::exception& e) {
    throw ParseError("network.json: " + std::string(e.what()));
  }
  if (meta.value("format", "") != "citeinfl-network") throw ParseError("network.json: unknown format");
  if (meta.value("version", -1) != kNetworkFormatVersion) {
    throw VersionError("network format version " + meta.value("version", json(-1)).dump() +
                       ", expected " + std::to_string(kNetworkFormatVersion));
  }
  const auto expected_nodes = meta.at("nodes").get<std::size_t>();
  const auto expected_edges = meta.at("edges").get<std::size_t>();
  const auto periods = meta.at("periods").get<std::size_t>();

  // Nodes: contiguous ids, non-decreasing cohorts.
  std::vector<std::size_t> cohort_sizes(periods, 0);
  {
    LineReader reader(read_file(dir / "nodes.csv"), "nodes.csv");
    std::string line;
    if (!reader.next(line) || line != "id,cohort") reader.fail("expected header 'id,cohort'");
    std::size_t count = 0;
    Period prev = 0;
    while (reader.next(line)) {
      if (line.empty()) reader.fail("empty line");
      const auto f = split(line);
      NodeId id = 0;
      Period c = 0;
      if (f.size() != 2 || !parse_int(f[0], id) || !parse_int(f[1], c)) reader.fail("malformed node row");
      if (id != count) reader.fail("node ids must be contiguous from 0");
      if (c < prev || c < 0 || static_cast<std::size_t>(c) >= periods) reader.fail("cohort out of order or range");
      prev = c;
      ++cohort_sizes[static_cast<std::size_t>(c)];
      ++count;
    }
    if (count != expected_nodes) {
      reader.fail("expected " + std::to_string(expected_nodes) + " nodes, found " + std::to_string(count));
    }
  }

  CitationNetwork net;
  for (std::size_t t = 0; t < periods; ++t) net.add_cohort(static_cast<Period>(t), cohort_sizes[t]);

  LineReader reader(read_file(dir / "edges.csv"), "edges.csv");
  std::string line;
  if (!reader.next(line) || line != "citing_id,cited_id") reader.fail("expected header 'citing_id,cited_id'");
  std::size_t count = 0;
  std::vector<NodeId> refs;
  std::optional<NodeId> current;
  auto flush = [&]() {
    if (!current) return;
    try {
      net.commit_references(*current, refs);
    } catch (const Error& e) {
      reader.fail(e.what());
    }
    refs.clear();
  };
  while (reader.next(line)) {
    if (line.empty()) reader.fail("empty line");
    const auto f = split(line);
    NodeId a = 0, b = 0;
    if (f.size() != 2 || !parse_int(f[0], a) || !parse_int(f[1], b)) reader.fail("malformed edge row");
    if (a >= expected_nodes || b >= expected_nodes) reader.fail("edge refers to unknown node");
    if (current && a < *current) reader.fail("edges must be grouped by ascending citing id");
    if (!current || a != *current) {
      flush();
      current = a;
    }
    refs.push_back(b);
    ++count;
  }
  flush();
  if (count != expected_edges) {
    reader.fail("expected " + std::to_string(expected_edges) + " edges, found " + std::to_string(count));
  }
  return net;
}

// ---------------------------------------------------------------------------

std::string records_csv(std::span<const DisruptionRecord> records) {
  std::string out = "focal_id,cohort,N_i,N_j,N_k,cd,cd_nok,r_k,defined\n";
  for (const auto& r : records) {
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", r.focal, r.cohort, r.n_i, r.n_j, r.n_k,
                       format_optional(r.cd), format_optional(r.cd_nok),
                       format_optional(r.r_k), r.defined() ? 1 : 0);
  }
  return out;
}

std::vector<DisruptionRecord> parse_records_csv(const std::string& text, Period window) {
  LineReader reader(text, "records");
  std::string line;
  if (!reader.next(line) || line != "focal_id,cohort,N_i,N_j,N_k,cd,cd_nok,r_k,defined") {
    reader.fail("unexpected header");
  }
  std::vector<DisruptionRecord> out;
  while (reader.next(line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 9) reader.fail("expected 9 fields");
    NodeId focal = 0;
    Period cohort = 0;
    CiterCounts c;
    if (!parse_int(f[0], focal) || !parse_int(f[1], cohort) || !parse_int(f[2], c.n_i) ||
        !parse_int(f[3], c.n_j) || !parse_int(f[4], c.n_k)) {
      reader.fail("malformed counts");
    }
    // Metric columns are recomputed from the counts.
    out.push_back(make_record(focal, cohort, c, window));
  }
  return out;
}

std::string series_csv(std::span<const SeriesRow> rows) {
  std::string out = "period,mean_cd,mean_cd_nok,mean_rk,mean_nij,n\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{}\n", r.period, format_optional(r.mean_cd),
                       format_optional(r.mean_cd_nok), format_optional(r.mean_rk),
                       format_optional(r.mean_nij), r.n);
  }
  return out;
}

std::string ensemble_series_csv(std::span<const EnsembleRow> rows) {
  std::string out =
      "period,mean_cd,se_cd,mean_cd_nok,se_cd_nok,mean_rk,se_rk,mean_nij,se_nij,members\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.period, format_number(r.mean_cd),
                       format_number(r.se_cd), format_number(r.mean_cd_nok),
                       format_number(r.se_cd_nok), format_number(r.mean_rk),
                       format_number(r.se_rk), format_number(r.mean_nij),
                       format_number(r.se_nij), r.members);
  }
  return out;
}

std::string histogram_label(const IntervalHistogram& hist) {
  return fmt::format("{}-{}", hist.first, hist.last);
}

std::string histogram_csv(const IntervalHistogram& hist) {
  std::string out = "bin_left,bin_right,density\n";
  for (const auto& b : hist.bins) {
    out += format_number(b.left) + "," + format_number(b.right) + "," + format_number(b.density) + "\n";
  }
  return out;
}

std::string fits_csv(std::span<const IntervalFit> fits) {
  std::string out = "interval,family,location,scale,ks,n\n";
  for (const auto& f : fits) {
    out += fmt::format("{},{},{},{},{},{}\n", f.interval, family_name(f.fit.family),
                       format_number(f.fit.location), format_number(f.fit.scale),
                       format_number(f.fit.ks_stat), f.fit.n);
  }
  return out;
}

ObservationTable parse_table_csv(const std::string& text) {
  LineReader reader(text, "table");
  std::string line;
  if (!reader.next(line)) reader.fail("missing header");
  const auto header = split(line);
  if (header.size() < 2 || header[0] != "y" || header[1] != "period") {
    reader.fail("header must start with 'y,period'");
  }
  ObservationTable table;
  table.covariate_names.assign(header.begin() + 2, header.end());
  table.covariates.resize(table.covariate_names.size());
  std::vector<double> values(table.covariate_names.size());
  while (reader.next(line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != header.size()) reader.fail("expected " + std::to_string(header.size()) + " fields");
    double y = 0;
    std::int64_t period = 0;
    if (!parse_double(f[0], y)) reader.fail("missing or malformed y");
    if (!parse_int(f[1], period)) reader.fail("missing or malformed period");
    for (std::size_t c = 0; c < values.size(); ++c) {
      if (!parse_double(f[c + 2], values[c])) reader.fail("missing or malformed '" + header[c + 2] + "'");
    }
    table.add_row(y, period, values);
  }
  try {
    table.validate();
  } catch (const DomainError& e) {
    throw ParseError(std::string("table: ") + e.what());
  }
  return table;
}

std::string table_csv(const ObservationTable& table) {
  std::string out = "y,period";
  for (const auto& n : table.covariate_names) out += "," + n;
  out += "\n";
  for (std::size_t i = 0; i < table.rows(); ++i) {
    out += format_number(table.y[i]) + "," + std::to_string(table.period[i]);
    for (const auto& col : table.covariates) out += "," + format_number(col[i]);
    out += "\n";
  }
  return out;
}

std::string model_csv(const FixedEffectsModel& model) {
  std::string out = "term,estimate,std_error\n";
  for (const auto& t : model.terms) {
    out += t.term + "," + format_number(t.estimate) + "," + format_number(t.std_error) + "\n";
  }
  out += fmt::format("# n={},r2={}\n", model.n, format_number(model.r2));
  return out;
}

}  // namespace citeinfl
