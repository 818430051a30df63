// Copyright 2026 The Authors.
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

#include "p3/manifest.hpp"

#include <algorithm>
#include <regex>

#include "json.hpp"
#include "p3/error.hpp"
#include "p3/fs.hpp"

namespace p3 {

using json = nlohmann::ordered_json;

namespace {

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<double> read_optional(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<double>();
}

}  // namespace

std::string to_json(const SelectionManifest& m) {
  json j;
  j["epoch"] = m.epoch;
  j["strategy"] = std::string(to_string(m.strategy));
  j["lambda"] = optional_number(m.lambda);
  j["percentile"] = optional_number(m.percentile);
  j["pool_size"] = m.pool_size;
  j["kept_size"] = m.kept_size;
  j["expanded"] = m.expanded;
  j["rank_fill"] = m.rank_fill;
  j["jitter"] = m.jitter;
  j["budget_fraction"] = m.budget_fraction;
  json selected = json::array();
  for (const auto& item : m.selected) {
    json s;
    s["sample_id"] = item.sample_id;
    s["difficulty"] = optional_number(item.difficulty);
    s["adjusted"] = optional_number(item.adjusted);
    s["quality"] = optional_number(item.quality);
    selected.push_back(std::move(s));
  }
  j["selected"] = std::move(selected);
  j["seed"] = m.seed;
  j["config_hash"] = m.config_hash;
  if (m.kernel) {
    j["kernel"] = {{"min_diagonal", m.kernel->min_diagonal},
                   {"max_diagonal", m.kernel->max_diagonal},
                   {"jitter", m.kernel->jitter}};
  }
  return j.dump(2) + "\n";
}

SelectionManifest parse_manifest(std::string_view json_text) {
  try {
    const json j = json::parse(json_text);
    SelectionManifest m;
    m.epoch = j.at("epoch").get<int>();
    m.strategy = parse_strategy(j.at("strategy").get<std::string>());
    m.lambda = read_optional(j, "lambda");
    m.percentile = read_optional(j, "percentile");
    m.pool_size = j.at("pool_size").get<size_t>();
    m.kept_size = j.at("kept_size").get<size_t>();
    m.expanded = j.at("expanded").get<bool>();
    m.rank_fill = j.value("rank_fill", size_t{0});
    m.jitter = j.value("jitter", 0.0);
    m.budget_fraction = j.value("budget_fraction", 0.0);
    for (const auto& s : j.at("selected")) {
      SelectedItem item;
      item.sample_id = s.at("sample_id").get<std::string>();
      item.difficulty = read_optional(s, "difficulty");
      item.adjusted = read_optional(s, "adjusted");
      item.quality = read_optional(s, "quality");
      m.selected.push_back(std::move(item));
    }
    m.seed = j.value("seed", std::uint64_t{0});
    m.config_hash = j.value("config_hash", std::string());
    if (auto it = j.find("kernel"); it != j.end()) {
      KernelSummary k;
      k.min_diagonal = it->at("min_diagonal").get<double>();
      k.max_diagonal = it->at("max_diagonal").get<double>();
      k.jitter = it->at("jitter").get<double>();
      m.kernel = k;
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaError, std::string("manifest: ") + e.what());
  }
}

std::filesystem::path manifest_file(const std::filesystem::path& dir, int epoch) {
  return dir / ("manifest.epoch" + std::to_string(epoch) + ".json");
}

std::filesystem::path write_manifest(const std::filesystem::path& dir,
                                     const SelectionManifest& manifest) {
  auto path = manifest_file(dir, manifest.epoch);
  write_file_atomic(path, to_json(manifest));
  return path;
}

std::vector<SelectionManifest> load_manifests(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(ErrorCode::kIoError, "not a directory: " + dir.string());
  }
  static const std::regex kName(R"(manifest\.epoch(\d+)\.json)");
  std::vector<SelectionManifest> manifests;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (!std::regex_match(name, kName)) continue;
    try {
      manifests.push_back(parse_manifest(read_file(entry.path())));
    } catch (const Error& e) {
      throw Error(e.code(), name + ": " + e.what());
    }
  }
  std::sort(manifests.begin(), manifests.end(),
            [](const auto& a, const auto& b) { return a.epoch < b.epoch; });
  return manifests;
}

}  // namespace p3
