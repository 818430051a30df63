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

#include "p3/pipeline.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <optional>

#include "json.hpp"
#include "p3/dpp.hpp"
#include "p3/error.hpp"
#include "p3/fs.hpp"
#include "p3/rng.hpp"

namespace p3 {

using json = nlohmann::ordered_json;

namespace {

std::filesystem::path state_file(const std::filesystem::path& dir) {
  return dir / "history.json";
}

bool is_threshold_strategy(Strategy s) {
  return s == Strategy::kP3 || s == Strategy::kSplOnly;
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

SelectionManifest manifest_header(const Dataset& dataset, const RunConfig& config,
                                  int epoch) {
  SelectionManifest m;
  m.epoch = epoch;
  m.strategy = config.strategy;
  m.seed = config.seed;
  m.config_hash = config_hash(config);
  m.budget_fraction =
      static_cast<double>(config.k) / static_cast<double>(dataset.size());
  return m;
}

}  // namespace

EpochState load_state(const std::filesystem::path& state_dir) {
  const auto path = state_file(state_dir);
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) {
    throw Error(ErrorCode::kMissingState, "missing state: " + path.string());
  }
  try {
    const json j = json::parse(read_file(path));
    EpochState state;
    state.epoch = j.at("epoch").get<int>();
    state.config_hash = j.at("config_hash").get<std::string>();
    for (const auto& h : j.at("history")) {
      DifficultyHistory dh;
      dh.sample_id = h.at("sample_id").get<std::string>();
      dh.current = h.at("current").get<double>();
      if (auto it = h.find("previous"); it != h.end() && !it->is_null()) {
        dh.previous = it->get<double>();
      }
      state.history.emplace(dh.sample_id, dh);
    }
    return state;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaError,
                "corrupt state " + path.string() + ": " + e.what());
  }
}

void save_state(const std::filesystem::path& state_dir, const EpochState& state) {
  json j;
  j["epoch"] = state.epoch;
  j["config_hash"] = state.config_hash;
  json history = json::array();
  for (const auto& [id, h] : state.history) {
    json entry;
    entry["sample_id"] = id;
    entry["current"] = h.current;
    entry["previous"] = h.previous ? json(*h.previous) : json(nullptr);
    history.push_back(std::move(entry));
  }
  j["history"] = std::move(history);
  write_file_atomic(state_file(state_dir), j.dump(1) + "\n");
}

std::vector<ScoreRecord> DirectoryScoreSource::scores_for_epoch(int epoch) {
  const auto path = scores_file(dir_, epoch);
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) {
    throw Error(ErrorCode::kMissingScores, "no score file " + path.string());
  }
  return load_scores(path);
}

TrainerHook external_command_hook(std::string command) {
  return [command = std::move(command)](const SelectionManifest& manifest,
                                        const std::filesystem::path& path) {
    const std::string line = command + " " + shell_quote(path.string());
    const int status = std::system(line.c_str());
    int code = -1;
    if (status != -1 && WIFEXITED(status)) code = WEXITSTATUS(status);
    if (code != 0) {
      throw Error(ErrorCode::kHookFailure,
                  "trainer hook exited with status " + std::to_string(code) +
                      " after epoch " + std::to_string(manifest.epoch));
    }
  };
}

SelectionManifest dynamic_select(const Dataset& dataset,
                                 std::vector<ScoreRecord> scores,
                                 EpochState& state, const RunConfig& config,
                                 bool kernel_diagnostics) {
  if (!is_threshold_strategy(config.strategy)) {
    throw Error(ErrorCode::kInvalidArgument,
                "dynamic_select handles p3 and spl_only only");
  }
  if (dataset.empty()) throw Error(ErrorCode::kEmptyPool, "dataset is empty");
  const int epoch = state.epoch + 1;
  if (epoch > config.epochs()) {
    throw Error(ErrorCode::kInvalidArgument,
                "epoch " + std::to_string(epoch) + " exceeds configured epochs " +
                    std::to_string(config.epochs()));
  }
  if (config.k > dataset.size()) {
    throw Error(ErrorCode::kKTooLarge, "k = " + std::to_string(config.k) +
                                           " exceeds dataset size " +
                                           std::to_string(dataset.size()));
  }

  const auto aligned = align_scores(dataset, std::move(scores), epoch);
  std::vector<DifficultyHistory> histories(dataset.size());
  for (size_t i = 0; i < dataset.size(); ++i) {
    auto& h = histories[i];
    h.sample_id = dataset[i].id;
    h.current = difficulty(aligned[i].action_probs);
    if (epoch > 1) {
      auto it = state.history.find(h.sample_id);
      if (it == state.history.end()) {
        throw Error(ErrorCode::kMissingState,
                    "no epoch-" + std::to_string(epoch - 1) +
                        " difficulty for '" + h.sample_id + "'");
      }
      h.previous = it->second.current;
    }
  }

  const FilterResult filtered = filter_pool(histories, epoch, config.pace, config.k);
  std::vector<size_t> pool;  // dataset index of each kept sample
  pool.reserve(filtered.kept.size());
  for (const auto& a : filtered.kept) pool.push_back(*dataset.find(a.sample_id));

  SelectionManifest m = manifest_header(dataset, config, epoch);
  m.lambda = filtered.lambda;
  m.percentile = filtered.percentile;
  m.pool_size = filtered.pool_size;
  m.kept_size = filtered.kept.size();
  m.expanded = filtered.expanded;

  std::vector<size_t> picks;  // positions within the kept pool
  if (config.strategy == Strategy::kP3) {
    std::vector<std::vector<double>> rows;
    std::vector<double> quality;
    rows.reserve(pool.size());
    quality.reserve(pool.size());
    for (size_t p = 0; p < pool.size(); ++p) {
      rows.push_back(aligned[pool[p]].embedding);
      quality.push_back(filtered.kept[p].raw);
    }
    KernelMatrix kernel = [&] {
      const FeatureMatrix features(rows);
      return kernel_matrix(QualityVector(quality), similarity_matrix(features),
                           config.jitter_base);
    }();
    const GreedyResult greedy = greedy_map(kernel, config.k);
    picks = greedy.indices;
    m.rank_fill = greedy.rank_fill;
    m.jitter = kernel.jitter;
    if (kernel_diagnostics) m.kernel = summarize(kernel);
  } else {
    picks.resize(pool.size());
    std::iota(picks.begin(), picks.end(), size_t{0});
    std::stable_sort(picks.begin(), picks.end(), [&](size_t a, size_t b) {
      return filtered.kept[a].adjusted < filtered.kept[b].adjusted;
    });
    picks.resize(config.k);
  }

  for (size_t p : picks) {
    const AdjustedDifficulty& a = filtered.kept[p];
    SelectedItem item;
    item.sample_id = a.sample_id;
    item.difficulty = a.raw;
    item.adjusted = a.adjusted;
    item.quality = QualityVector(std::span<const double>(&a.raw, 1))[0];
    m.selected.push_back(std::move(item));
  }

  state.epoch = epoch;
  state.config_hash = m.config_hash;
  for (auto& h : histories) state.history[h.sample_id] = std::move(h);
  return m;
}

SelectionManifest warmup_select(const Dataset& dataset, const RunConfig& config) {
  if (config.warmup_k > dataset.size()) {
    throw Error(ErrorCode::kKTooLarge, "warmup_k exceeds dataset size");
  }
  std::mt19937_64 rng(mix_seed(config.seed, 0x5741524d5550ULL));
  SelectionManifest m = manifest_header(dataset, config, 0);
  m.strategy = Strategy::kRandom;
  m.pool_size = m.kept_size = dataset.size();
  m.budget_fraction =
      static_cast<double>(config.warmup_k) / static_cast<double>(dataset.size());
  for (size_t i : sample_without_replacement(rng, dataset.size(), config.warmup_k)) {
    m.selected.push_back({dataset[i].id, std::nullopt, std::nullopt, std::nullopt});
  }
  return m;
}

SelectionManifest run_epoch(const Dataset& dataset, ScoreSource* source,
                            const RunConfig& config, EpochState& state,
                            const TrainerHook& hook, const RunOptions& options) {
  const int epoch = state.epoch + 1;
  SelectionManifest manifest;
  if (is_threshold_strategy(config.strategy)) {
    if (!source) {
      throw Error(ErrorCode::kMissingScores,
                  std::string(to_string(config.strategy)) + " needs score records");
    }
    manifest = dynamic_select(dataset, source->scores_for_epoch(epoch), state,
                              config, options.kernel_diagnostics);
  } else {
    std::optional<std::vector<ScoreRecord>> scores;
    if (source) scores = align_scores(dataset, source->scores_for_epoch(epoch), epoch);
    manifest = baseline_select(dataset, scores ? &*scores : nullptr, config, epoch);
    if (scores) {
      for (size_t i = 0; i < dataset.size(); ++i) {
        DifficultyHistory h;
        h.sample_id = dataset[i].id;
        h.current = difficulty((*scores)[i].action_probs);
        if (auto it = state.history.find(h.sample_id); it != state.history.end()) {
          h.previous = it->second.current;
        }
        state.history[h.sample_id] = h;
      }
    }
    state.epoch = epoch;
    state.config_hash = manifest.config_hash;
  }

  std::filesystem::path path;
  if (!options.manifest_dir.empty()) path = write_manifest(options.manifest_dir, manifest);
  if (!options.state_dir.empty()) save_state(options.state_dir, state);
  state.manifests.push_back(manifest);
  if (hook) hook(manifest, path);
  return manifest;
}

std::vector<SelectionManifest> run(const Dataset& dataset, ScoreSource* source,
                                   const RunConfig& config, const TrainerHook& hook,
                                   const RunOptions& options) {
  config.validate();
  std::optional<DirectoryLock> lock;
  if (!options.state_dir.empty()) lock.emplace(options.state_dir / "lock");

  EpochState state;
  state.config_hash = config_hash(config);
  if (config.warmup_k > 0) {
    SelectionManifest warm = warmup_select(dataset, config);
    std::filesystem::path path;
    if (!options.manifest_dir.empty()) path = write_manifest(options.manifest_dir, warm);
    state.manifests.push_back(warm);
    if (hook) hook(warm, path);
  }
  for (int e = 1; e <= config.epochs(); ++e) {
    run_epoch(dataset, source, config, state, hook, options);
  }
  return state.manifests;
}

}  // namespace p3
