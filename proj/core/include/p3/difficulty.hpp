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

// Policy-driven difficulty: a reference output is cut into actions, each
// action gets a length-normalized generation probability under the scoring
// model, and the sample's difficulty is one minus the mean of those
// probabilities.

#ifndef P3_DIFFICULTY_HPP_
#define P3_DIFFICULTY_HPP_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace p3 {

// Probabilities never drop below this floor before entering log/exp math.
inline constexpr double kProbabilityFloor = 1e-12;

enum class Segmentation { kLines, kSteps, kWhole };

std::string_view to_string(Segmentation s);
// Throws Error(kInvalidArgument) for names other than lines|steps|whole.
Segmentation parse_segmentation(std::string_view name);

struct Sample {
  std::string id;
  std::string instruction;
  std::string output;
  std::map<std::string, std::string> meta;
};

struct Action {
  std::string text;
  std::vector<double> token_logprobs;
};

struct ActionSequence {
  std::string sample_id;
  std::vector<Action> actions;
  Segmentation segmentation = Segmentation::kLines;
};

struct TokenCounts {
  long question = 0;
  long answer = 0;
};

// Evidence produced by a scorer for one sample at one epoch.
struct ScoreRecord {
  std::string sample_id;
  int epoch = 1;
  std::string model_tag;
  std::vector<double> action_probs;
  std::optional<TokenCounts> token_counts;
  std::vector<double> embedding;
};

struct DifficultyScore {
  std::string sample_id;
  int epoch = 1;
  double value = 0.0;
};

// Splits an output into action texts.
//   lines: one action per line, whitespace-only lines dropped.
//   steps: blank-line separated blocks; falls back to lines when that
//          yields a single block and the output has at least 4 lines.
//   whole: the whole output as one action.
// Throws Error(kEmptyOutput) when the output is whitespace-only.
std::vector<std::string> segment_output(std::string_view output,
                                        Segmentation strategy);

// exp(mean(token_logprobs)), floored at kProbabilityFloor.
// Throws Error(kEmptyAction) on an empty list and Error(kInvalidArgument)
// on positive or non-finite log-probabilities.
double action_probability(std::span<const double> token_logprobs);

// 1 - mean(action_probs). Every probability must lie in (0, 1].
// Throws Error(kEmptyActionList) on an empty list.
double difficulty(std::span<const double> action_probs);

inline DifficultyScore difficulty_score(const ScoreRecord& record) {
  return {record.sample_id, record.epoch, difficulty(record.action_probs)};
}

}  // namespace p3

#endif  // P3_DIFFICULTY_HPP_
