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

#include "p3/config.hpp"

#include <cmath>
#include <set>

#include "json.hpp"
#include "p3/error.hpp"
#include "p3/fs.hpp"

namespace p3 {

using json = nlohmann::ordered_json;

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::kP3: return "p3";
    case Strategy::kSplOnly: return "spl_only";
    case Strategy::kRandom: return "random";
    case Strategy::kCurriculum: return "curriculum";
  }
  return "p3";
}

std::string_view to_string(CurriculumMetric m) {
  switch (m) {
    case CurriculumMetric::kAnswerRows: return "answer_rows";
    case CurriculumMetric::kAnswerLength: return "answer_length";
    case CurriculumMetric::kQuestionLength: return "question_length";
    case CurriculumMetric::kLevel: return "level";
  }
  return "answer_rows";
}

Strategy parse_strategy(std::string_view name) {
  for (auto s : {Strategy::kP3, Strategy::kSplOnly, Strategy::kRandom,
                 Strategy::kCurriculum}) {
    if (to_string(s) == name) return s;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown strategy '" + std::string(name) +
                  "' (expected p3|spl_only|random|curriculum)");
}

CurriculumMetric parse_curriculum_metric(std::string_view name) {
  for (auto m : {CurriculumMetric::kAnswerRows, CurriculumMetric::kAnswerLength,
                 CurriculumMetric::kQuestionLength, CurriculumMetric::kLevel}) {
    if (to_string(m) == name) return m;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown curriculum_metric '" + std::string(name) + "'");
}

void RunConfig::validate() const {
  pace.validate();
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (!(jitter_base > 0.0) || !std::isfinite(jitter_base)) {
    throw Error(ErrorCode::kInvalidArgument, "jitter_base must be > 0");
  }
  if (strategy == Strategy::kCurriculum && !curriculum_metric) {
    throw Error(ErrorCode::kInvalidArgument,
                "strategy curriculum requires curriculum_metric");
  }
}

RunConfig parse_config(std::string_view json_text) {
  static const std::set<std::string> kKeys = {
      "epochs",      "k",        "alpha",    "start_percentile",
      "end_percentile", "seed",  "segmentation", "strategy",
      "curriculum_metric", "jitter_base", "warmup_k"};
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("config: ") + e.what());
  }
  if (!j.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, "config must be a JSON object");
  }
  for (const auto& [key, _] : j.items()) {
    if (!kKeys.count(key)) {
      throw Error(ErrorCode::kInvalidArgument, "unknown config key '" + key + "'");
    }
  }

  RunConfig c;
  try {
    c.pace.epochs = j.value("epochs", c.pace.epochs);
    const auto k = j.value("k", static_cast<long long>(c.k));
    if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
    c.k = static_cast<size_t>(k);
    c.pace.alpha = j.value("alpha", c.pace.alpha);
    c.pace.start_percentile = j.value("start_percentile", c.pace.start_percentile);
    c.pace.end_percentile = j.value("end_percentile", c.pace.end_percentile);
    c.seed = j.value("seed", c.seed);
    c.segmentation =
        parse_segmentation(j.value("segmentation", std::string(to_string(c.segmentation))));
    c.strategy = parse_strategy(j.value("strategy", std::string(to_string(c.strategy))));
    if (auto it = j.find("curriculum_metric"); it != j.end() && !it->is_null()) {
      c.curriculum_metric = parse_curriculum_metric(it->get<std::string>());
    }
    c.jitter_base = j.value("jitter_base", c.jitter_base);
    const auto warmup = j.value("warmup_k", 0LL);
    if (warmup < 0) throw Error(ErrorCode::kInvalidArgument, "warmup_k must be >= 0");
    c.warmup_k = static_cast<size_t>(warmup);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_file(path));
}

std::string canonical_json(const RunConfig& c) {
  json j;
  j["epochs"] = c.pace.epochs;
  j["k"] = c.k;
  j["alpha"] = c.pace.alpha;
  j["start_percentile"] = c.pace.start_percentile;
  j["end_percentile"] = c.pace.end_percentile;
  j["seed"] = c.seed;
  j["segmentation"] = std::string(to_string(c.segmentation));
  j["strategy"] = std::string(to_string(c.strategy));
  j["curriculum_metric"] =
      c.curriculum_metric ? json(std::string(to_string(*c.curriculum_metric)))
                          : json(nullptr);
  j["jitter_base"] = c.jitter_base;
  j["warmup_k"] = c.warmup_k;
  return j.dump();
}

std::string config_hash(const RunConfig& config) {
  return hex64(fnv1a64(canonical_json(config)));
}

}  // namespace p3
