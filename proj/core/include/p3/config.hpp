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

#ifndef P3_CONFIG_HPP_
#define P3_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "p3/difficulty.hpp"
#include "p3/spl.hpp"

namespace p3 {

enum class Strategy { kP3, kSplOnly, kRandom, kCurriculum };

enum class CurriculumMetric { kAnswerRows, kAnswerLength, kQuestionLength, kLevel };

std::string_view to_string(Strategy s);
std::string_view to_string(CurriculumMetric m);
Strategy parse_strategy(std::string_view name);
CurriculumMetric parse_curriculum_metric(std::string_view name);

struct RunConfig {
  size_t k = 1;
  PaceConfig pace;
  Segmentation segmentation = Segmentation::kLines;
  std::uint64_t seed = 0;
  double jitter_base = 1e-10;
  Strategy strategy = Strategy::kP3;
  std::optional<CurriculumMetric> curriculum_metric;
  // Size of an optional random epoch-0 warm-up selection; 0 disables it.
  size_t warmup_k = 0;

  int epochs() const { return pace.epochs; }

  // Throws Error(kInvalidArgument).
  void validate() const;
};

// Reads a JSON config with keys epochs, k, alpha, start_percentile,
// end_percentile, seed, segmentation, strategy, curriculum_metric,
// jitter_base, warmup_k. Missing keys take defaults; unknown keys and bad
// values throw Error(kInvalidArgument).
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::filesystem::path& path);

// Canonical JSON form (fixed key order), used for hashing and echoing.
std::string canonical_json(const RunConfig& config);

// Stable 16-hex-digit hash of canonical_json().
std::string config_hash(const RunConfig& config);

}  // namespace p3

#endif  // P3_CONFIG_HPP_
