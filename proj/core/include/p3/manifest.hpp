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

#ifndef P3_MANIFEST_HPP_
#define P3_MANIFEST_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "p3/config.hpp"
#include "p3/dpp.hpp"

namespace p3 {

struct SelectedItem {
  std::string sample_id;
  // Null for baseline selections made without scores.
  std::optional<double> difficulty;
  std::optional<double> adjusted;
  std::optional<double> quality;
};

// The per-epoch output contract consumed by a trainer.
struct SelectionManifest {
  int epoch = 1;
  Strategy strategy = Strategy::kP3;
  std::optional<double> lambda;      // threshold strategies only
  std::optional<double> percentile;  // threshold strategies only
  size_t pool_size = 0;
  size_t kept_size = 0;
  bool expanded = false;
  size_t rank_fill = 0;
  double jitter = 0.0;
  double budget_fraction = 0.0;  // |selected| / N
  std::vector<SelectedItem> selected;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::optional<KernelSummary> kernel;
};

// Pretty-printed JSON with a fixed key order; byte-stable for equal input.
std::string to_json(const SelectionManifest& manifest);
// Throws Error(kSchemaError).
SelectionManifest parse_manifest(std::string_view json_text);

std::filesystem::path manifest_file(const std::filesystem::path& dir, int epoch);

// Atomically writes dir/manifest.epochE.json and returns its path.
std::filesystem::path write_manifest(const std::filesystem::path& dir,
                                     const SelectionManifest& manifest);

// Every manifest.epochE.json in `dir`, ordered by epoch.
std::vector<SelectionManifest> load_manifests(const std::filesystem::path& dir);

}  // namespace p3

#endif  // P3_MANIFEST_HPP_
