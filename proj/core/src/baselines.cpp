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

// Random and easy-to-hard curriculum baselines.

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <numeric>

#include "p3/error.hpp"
#include "p3/pipeline.hpp"
#include "p3/rng.hpp"

namespace p3 {
namespace {

long whitespace_tokens(const std::string& text) {
  long count = 0;
  bool in_token = false;
  for (unsigned char c : text) {
    const bool space = std::isspace(c) != 0;
    if (!space && !in_token) ++count;
    in_token = !space;
  }
  return count;
}

// First number in a metadata value, so "Level 3" and "3" both read as 3.
std::optional<double> leading_number(const std::string& text) {
  for (size_t i = 0; i < text.size(); ++i) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isdigit(c) || ((c == '-' || c == '.') && i + 1 < text.size() &&
                            std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      char* end = nullptr;
      const double v = std::strtod(text.c_str() + i, &end);
      if (end != text.c_str() + i) return v;
    }
  }
  return std::nullopt;
}

double metric_value(const Sample& s, const ScoreRecord* score, CurriculumMetric metric) {
  switch (metric) {
    case CurriculumMetric::kAnswerRows:
      return static_cast<double>(std::count(s.output.begin(), s.output.end(), '\n'));
    case CurriculumMetric::kAnswerLength:
      if (score && score->token_counts) return static_cast<double>(score->token_counts->answer);
      return static_cast<double>(whitespace_tokens(s.output));
    case CurriculumMetric::kQuestionLength:
      if (score && score->token_counts) return static_cast<double>(score->token_counts->question);
      return static_cast<double>(whitespace_tokens(s.instruction));
    case CurriculumMetric::kLevel: {
      auto it = s.meta.find("level");
      if (it == s.meta.end()) {
        throw Error(ErrorCode::kMissingMetric, "sample '" + s.id + "' has no meta.level");
      }
      auto v = leading_number(it->second);
      if (!v) {
        throw Error(ErrorCode::kMissingMetric,
                    "sample '" + s.id + "' has a non-numeric level '" + it->second + "'");
      }
      return *v;
    }
  }
  return 0.0;
}

}  // namespace

SelectionManifest baseline_select(const Dataset& dataset,
                                  const std::vector<ScoreRecord>* scores,
                                  const RunConfig& config, int epoch) {
  if (config.strategy != Strategy::kRandom && config.strategy != Strategy::kCurriculum) {
    throw Error(ErrorCode::kInvalidArgument,
                "baseline_select handles random and curriculum only");
  }
  if (epoch < 1 || epoch > config.epochs()) {
    throw Error(ErrorCode::kInvalidArgument,
                "epoch " + std::to_string(epoch) + " outside [1, " +
                    std::to_string(config.epochs()) + "]");
  }
  const size_t n = dataset.size();
  if (config.k > n) {
    throw Error(ErrorCode::kKTooLarge, "k = " + std::to_string(config.k) +
                                           " exceeds dataset size " + std::to_string(n));
  }
  if (scores && scores->size() != n) {
    throw Error(ErrorCode::kMissingScores, "score set does not cover the dataset");
  }

  std::mt19937_64 rng(mix_seed(config.seed, static_cast<std::uint64_t>(epoch)));
  SelectionManifest m;
  m.epoch = epoch;
  m.strategy = config.strategy;
  m.seed = config.seed;
  m.config_hash = config_hash(config);
  m.budget_fraction = static_cast<double>(config.k) / static_cast<double>(n);
  m.pool_size = n;

  std::vector<size_t> chosen;
  if (config.strategy == Strategy::kRandom) {
    chosen = sample_without_replacement(rng, n, config.k);
    m.kept_size = n;
  } else {
    if (!config.curriculum_metric) {
      throw Error(ErrorCode::kMissingMetric, "curriculum_metric is not configured");
    }
    std::vector<double> value(n);
    for (size_t i = 0; i < n; ++i) {
      value[i] = metric_value(dataset[i], scores ? &(*scores)[i] : nullptr,
                              *config.curriculum_metric);
    }
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return value[a] < value[b]; });

    const auto buckets = static_cast<size_t>(config.epochs());
    const size_t e = static_cast<size_t>(epoch);
    const size_t lo = (e - 1) * n / buckets;
    const size_t hi = e * n / buckets;
    m.kept_size = hi - lo;

    std::vector<size_t> positions;  // into `order`
    if (hi - lo >= config.k) {
      for (size_t p : sample_without_replacement(rng, hi - lo, config.k)) {
        positions.push_back(lo + p);
      }
    } else {
      // Short bucket: take all of it, then the next-harder samples, then
      // the next-easier ones.
      for (size_t p = lo; p < hi; ++p) positions.push_back(p);
      for (size_t p = hi; p < n && positions.size() < config.k; ++p) positions.push_back(p);
      for (size_t p = lo; p > 0 && positions.size() < config.k; --p) {
        positions.push_back(p - 1);
      }
      m.expanded = true;
    }
    std::sort(positions.begin(), positions.end());
    for (size_t p : positions) chosen.push_back(order[p]);
  }

  for (size_t i : chosen) {
    SelectedItem item;
    item.sample_id = dataset[i].id;
    if (scores) item.difficulty = difficulty((*scores)[i].action_probs);
    m.selected.push_back(std::move(item));
  }
  return m;
}

}  // namespace p3
