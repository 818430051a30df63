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

// Desk-scale stand-in for a fine-tuning loop. A synthetic dataset gets
// clustered unit embeddings and latent per-action probabilities; a mock
// learner raises the probabilities of every sample by eta each time it is
// selected, so difficulty drifts across epochs the way it does when a real
// model trains on the selections.

#ifndef P3_SIMULATE_HPP_
#define P3_SIMULATE_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "p3/config.hpp"
#include "p3/dataset.hpp"
#include "p3/manifest.hpp"
#include "p3/mock_scorer.hpp"
#include "p3/report.hpp"

namespace p3 {

struct SynthSpec {
  size_t n = 2000;
  size_t dim = 64;
  size_t clusters = 4;
  double eta = 0.05;
  double cluster_noise = 0.8;        // spread of members around a centre
  double ease_min = 0.2;             // per-sample mean action probability
  double ease_max = 0.95;
  double cluster_ease_spread = 0.2;  // ease offset between first and last cluster
  double action_noise = 0.05;
  size_t min_actions = 2;
  size_t max_actions = 8;
  std::uint64_t data_seed = 1;
  RunConfig run;

  // Throws Error(kInvalidSpec).
  void validate() const;
};

// JSON object with the SynthSpec field names plus a "run" object holding
// run-config keys. Throws Error(kInvalidSpec).
SynthSpec parse_synth_spec(std::string_view json_text);
SynthSpec load_synth_spec(const std::filesystem::path& path);

struct SyntheticData {
  Dataset dataset;
  std::vector<MockLatent> latents;
  std::vector<size_t> cluster;
};

SyntheticData synthesize(const SynthSpec& spec);

struct EpochSummary {
  int epoch = 0;
  double lambda = 0.0;
  double percentile = 0.0;
  size_t kept = 0;
  bool expanded = false;
  // Median epoch-1 difficulty of the samples selected this epoch.
  double median_reference_difficulty = 0.0;
  double mean_selected_difficulty = 0.0;
  double mean_cosine = 0.0;
  size_t clusters_covered = 0;
  Histogram pool;      // difficulty of every sample this epoch
  Histogram selected;  // difficulty of the selected samples
};

struct SimulationResult {
  SyntheticData data;
  std::vector<SelectionManifest> manifests;
  std::vector<EpochSummary> epochs;
  std::vector<double> reference_difficulty;  // epoch-1, dataset order
};

// Runs the configured strategy end to end. With a non-empty out_dir it
// writes dataset.jsonl, scores/, manifests/, histogram.tsv, diversity.tsv
// and summary.tsv there.
SimulationResult simulate(const SynthSpec& spec,
                          const std::filesystem::path& out_dir = {});

std::string summary_header();
std::string summary_row(const EpochSummary& s);

}  // namespace p3

#endif  // P3_SIMULATE_HPP_
