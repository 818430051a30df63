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

// Per-epoch selection. Each epoch:
//
//   1. difficulty of every sample from that epoch's score records,
//   2. regularized (adjusted) difficulty against the previous epoch,
//   3. percentile threshold lambda on the adjusted values,
//   4. filter to adjusted <= lambda,
//   5. quality-weighted cosine kernel over the filtered pool,
//   6. greedy MAP selection of k samples,
//   7. manifest; the current difficulties become next epoch's previous.
//
// Training happens outside: a hook receives each manifest after it is
// written.

#ifndef P3_PIPELINE_HPP_
#define P3_PIPELINE_HPP_

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "p3/config.hpp"
#include "p3/dataset.hpp"
#include "p3/manifest.hpp"
#include "p3/spl.hpp"

namespace p3 {

struct EpochState {
  int epoch = 0;  // last completed epoch; 0 before the first
  std::string config_hash;
  std::map<std::string, DifficultyHistory> history;
  std::vector<SelectionManifest> manifests;  // in-memory only
};

// Throws Error(kMissingState) when the file does not exist.
EpochState load_state(const std::filesystem::path& state_dir);
void save_state(const std::filesystem::path& state_dir, const EpochState& state);

class ScoreSource {
 public:
  virtual ~ScoreSource() = default;
  // Full score set for the epoch. Scores are never reused across epochs.
  virtual std::vector<ScoreRecord> scores_for_epoch(int epoch) = 0;
};

// Reads dir/scores.epochE.jsonl.
class DirectoryScoreSource : public ScoreSource {
 public:
  explicit DirectoryScoreSource(std::filesystem::path dir) : dir_(std::move(dir)) {}
  std::vector<ScoreRecord> scores_for_epoch(int epoch) override;

 private:
  std::filesystem::path dir_;
};

// Called after each manifest is written. Throwing aborts the run.
using TrainerHook = std::function<void(const SelectionManifest& manifest,
                                       const std::filesystem::path& path)>;

// Runs `command` with the manifest path appended as one quoted argument.
// A non-zero exit raises Error(kHookFailure) carrying the exit status.
TrainerHook external_command_hook(std::string command);

struct RunOptions {
  std::filesystem::path manifest_dir;  // empty: manifests stay in memory
  std::filesystem::path state_dir;     // empty: state is not persisted
  bool kernel_diagnostics = false;
};

// One epoch of the p3 or spl_only strategy for epoch state.epoch + 1.
// `scores` may be in any order. Updates `state` (history and epoch).
// Throws Error(kMissingScores), Error(kEmptyPool), Error(kKTooLarge).
SelectionManifest dynamic_select(const Dataset& dataset,
                                 std::vector<ScoreRecord> scores,
                                 EpochState& state, const RunConfig& config,
                                 bool kernel_diagnostics = false);

// Random or curriculum selection for `epoch`. Scores are optional; when
// given, per-item difficulty is recorded and token counts feed the length
// metrics. Throws Error(kMissingMetric).
SelectionManifest baseline_select(const Dataset& dataset,
                                  const std::vector<ScoreRecord>* scores,
                                  const RunConfig& config, int epoch);

// Random epoch-0 warm-up selection of config.warmup_k samples.
SelectionManifest warmup_select(const Dataset& dataset, const RunConfig& config);

// One epoch of any strategy, continuing from `state`. Writes the manifest
// (and state, when persisted) and then calls the hook.
SelectionManifest run_epoch(const Dataset& dataset, ScoreSource* source,
                            const RunConfig& config, EpochState& state,
                            const TrainerHook& hook, const RunOptions& options);

// All epochs from a fresh state, preceded by the warm-up when configured.
std::vector<SelectionManifest> run(const Dataset& dataset, ScoreSource* source,
                                   const RunConfig& config, const TrainerHook& hook,
                                   const RunOptions& options);

}  // namespace p3

#endif  // P3_PIPELINE_HPP_
