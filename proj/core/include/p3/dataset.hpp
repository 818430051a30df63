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

// JSONL ingestion for datasets and per-epoch score files.
//
//   dataset.jsonl       {"id", "instruction", "output", "meta": {...}}
//   scores.epochE.jsonl {"sample_id", "epoch", "model_tag", "action_probs",
//                        "token_counts": {"question", "answer"}, "embedding"}

#ifndef P3_DATASET_HPP_
#define P3_DATASET_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "p3/difficulty.hpp"

namespace p3 {

inline constexpr double kEmbeddingNormTolerance = 1e-6;

class Dataset {
 public:
  Dataset() = default;
  // Throws Error(kSchemaError) on an empty or duplicate id or an empty output.
  explicit Dataset(std::vector<Sample> samples);

  size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  const Sample& operator[](size_t i) const { return samples_[i]; }
  const std::vector<Sample>& samples() const { return samples_; }
  std::optional<size_t> find(std::string_view id) const;

 private:
  std::vector<Sample> samples_;
  std::unordered_map<std::string, size_t> index_;
};

// One problem found while reading or checking a file. `line` is 1-based;
// 0 means the issue concerns the file as a whole.
struct Issue {
  size_t line = 0;
  std::string record;
  std::string message;
};

std::string format_issue(const std::filesystem::path& file, const Issue& issue);

struct DatasetRead {
  std::vector<Sample> samples;
  std::vector<Issue> issues;
};

struct ScoresRead {
  std::vector<ScoreRecord> records;
  std::vector<size_t> lines;  // source line of each record
  std::vector<Issue> issues;
};

// Lenient readers: every malformed line becomes an Issue and is skipped.
// Throws Error(kIoError) only when the file cannot be opened.
DatasetRead read_dataset(const std::filesystem::path& path);
ScoresRead read_scores(const std::filesystem::path& path);

// Strict loaders: throw Error(kSchemaError) listing every issue.
Dataset load_dataset(const std::filesystem::path& path);
std::vector<ScoreRecord> load_scores(const std::filesystem::path& path);

void write_dataset(const std::filesystem::path& path, const Dataset& dataset);
void write_scores(const std::filesystem::path& path,
                  const std::vector<ScoreRecord>& records);

// Record-level invariants: nonempty id, epoch >= 1, probabilities in (0, 1],
// unit-norm embedding. Returns an empty string when the record is valid.
std::string check_score_record(const ScoreRecord& record);

// Cross-file checks: duplicates, unknown ids, coverage of the dataset,
// consistent embedding dimension and epoch.
std::vector<Issue> check_scores_against(const Dataset& dataset,
                                        const ScoresRead& scores,
                                        std::optional<int> epoch);

// Orders records by dataset position. Throws Error(kMissingScores) listing
// uncovered ids, Error(kSchemaError) on unknown/duplicate ids or a record
// for another epoch, and Error(kDimensionMismatch) on ragged embeddings.
std::vector<ScoreRecord> align_scores(const Dataset& dataset,
                                      std::vector<ScoreRecord> records,
                                      int epoch);

std::filesystem::path scores_file(const std::filesystem::path& dir, int epoch);

}  // namespace p3

#endif  // P3_DATASET_HPP_
