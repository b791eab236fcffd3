// Copyright 2026 The alcost Authors
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

// Dataset manifest: CSV with header
//
//   stack_id,path,split,gt_label_time[,payload]
//
// gt_label_time is empty when unknown. The optional payload column flags what
// the container pixels hold (intensity, probability, js_bits); it defaults to
// intensity. Relative paths resolve against the manifest's directory.

#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "alcost/core/binary_io.hpp"
#include "alcost/core/container.hpp"
#include "alcost/core/error.hpp"
#include "alcost/core/types.hpp"

namespace alcost {

enum class PayloadKind { kIntensity, kProbability, kJsBits };

inline std::string_view to_string(PayloadKind kind) {
  switch (kind) {
    case PayloadKind::kIntensity:
      return "intensity";
    case PayloadKind::kProbability:
      return "probability";
    case PayloadKind::kJsBits:
      return "js_bits";
  }
  return "intensity";
}

inline PayloadKind parse_payload_kind(std::string_view text) {
  if (text == "intensity") return PayloadKind::kIntensity;
  if (text == "probability") return PayloadKind::kProbability;
  if (text == "js_bits") return PayloadKind::kJsBits;
  throw ConfigError("unknown payload kind '" + std::string(text) + "'");
}

struct ManifestEntry {
  std::string stack_id;
  std::filesystem::path path;
  Split split = Split::kPool;
  std::optional<double> gt_label_time;
  PayloadKind payload = PayloadKind::kIntensity;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;

  const ManifestEntry* find(std::string_view id) const {
    for (const auto& e : entries) {
      if (e.stack_id == id) return &e;
    }
    return nullptr;
  }
};

namespace detail {

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.emplace_back(line.substr(start));
      break;
    }
    fields.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  for (auto& f : fields) {
    while (!f.empty() && (f.back() == '\r' || f.back() == ' ')) f.pop_back();
    while (!f.empty() && f.front() == ' ') f.erase(f.begin());
  }
  return fields;
}

inline double parse_double(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("cannot parse " + std::string(what) + " from '" +
                      std::string(text) + "'");
  }
  return value;
}

// Shortest round-tripping decimal form.
inline std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

}  // namespace detail

// Rows of a CSV file after its header; the header must match `expected`
// exactly for the first expected.size() columns.
inline std::vector<std::vector<std::string>> read_csv(
    const std::filesystem::path& path,
    const std::vector<std::string>& expected_header,
    std::vector<std::string>* header_out = nullptr) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError("'" + path.string() + "' is empty");
  }
  auto header = detail::split_csv_line(line);
  if (header.size() < expected_header.size() ||
      !std::equal(expected_header.begin(), expected_header.end(),
                  header.begin())) {
    std::string want;
    for (const auto& h : expected_header) want += (want.empty() ? "" : ",") + h;
    throw ConfigError("'" + path.string() + "' must start with header '" +
                      want + "'");
  }
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto fields = detail::split_csv_line(line);
    if (fields.size() != header.size()) {
      throw ConfigError("'" + path.string() + "': row has " +
                        std::to_string(fields.size()) + " fields, header has " +
                        std::to_string(header.size()));
    }
    rows.push_back(std::move(fields));
  }
  if (header_out) *header_out = std::move(header);
  return rows;
}

// Throws on duplicate ids or (when check_files) missing files.
inline DatasetManifest read_manifest(const std::filesystem::path& path,
                                     bool check_files = true) {
  std::vector<std::string> header;
  auto rows = read_csv(path, {"stack_id", "path", "split", "gt_label_time"},
                       &header);
  const bool has_payload = header.size() >= 5 && header[4] == "payload";
  const auto base = path.parent_path();
  DatasetManifest manifest;
  std::set<std::string> seen;
  for (auto& row : rows) {
    ManifestEntry e;
    e.stack_id = row[0];
    if (e.stack_id.empty()) throw ConfigError("manifest row without stack_id");
    if (!seen.insert(e.stack_id).second) {
      throw ConfigError("duplicate stack_id '" + e.stack_id + "' in manifest");
    }
    e.path = row[1];
    if (e.path.is_relative()) e.path = base / e.path;
    e.split = parse_split(row[2]);
    if (!row[3].empty()) {
      e.gt_label_time = detail::parse_double(row[3], "gt_label_time");
      if (!(*e.gt_label_time > 0.0)) {
        throw ConfigError("gt_label_time of '" + e.stack_id +
                          "' must be positive");
      }
    }
    if (has_payload) e.payload = parse_payload_kind(row[4]);
    if (check_files && !std::filesystem::exists(e.path)) {
      throw IoError("manifest references missing file '" + e.path.string() +
                    "'");
    }
    manifest.entries.push_back(std::move(e));
  }
  return manifest;
}

// Paths are written relative to the manifest directory when possible.
inline void write_manifest(const DatasetManifest& manifest,
                           const std::filesystem::path& path) {
  bool any_payload = false;
  for (const auto& e : manifest.entries) {
    any_payload |= e.payload != PayloadKind::kIntensity;
  }
  std::ostringstream out;
  out << "stack_id,path,split,gt_label_time" << (any_payload ? ",payload" : "")
      << "\n";
  const auto base = path.parent_path();
  for (const auto& e : manifest.entries) {
    std::filesystem::path p = e.path;
    if (!base.empty() && p.is_absolute() == base.is_absolute()) {
      auto rel = p.lexically_relative(base);
      if (!rel.empty() && *rel.begin() != "..") p = rel;
    }
    out << e.stack_id << "," << p.generic_string() << "," << to_string(e.split)
        << ","
        << (e.gt_label_time ? detail::format_double(*e.gt_label_time) : "");
    if (any_payload) out << "," << to_string(e.payload);
    out << "\n";
  }
  io::write_text(path, out.str());
}

// Loads the stack behind a manifest entry with id, split and time filled in.
inline Stack load_entry(const ManifestEntry& entry) {
  Stack stack = load_stack(entry.path, entry.payload == PayloadKind::kProbability
                                           ? ValueDomain::kProbability
                                           : ValueDomain::kAny);
  stack.id = entry.stack_id;
  stack.split = entry.split;
  stack.gt_label_time = entry.gt_label_time;
  validate(stack);
  return stack;
}

}  // namespace alcost
