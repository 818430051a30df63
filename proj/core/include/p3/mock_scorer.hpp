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

#ifndef P3_MOCK_SCORER_HPP_
#define P3_MOCK_SCORER_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "p3/dataset.hpp"
#include "p3/manifest.hpp"
#include "p3/pipeline.hpp"

namespace p3 {

// What the mock model "knows" about one sample.
struct MockLatent {
  std::vector<double> base_action_probs;  // epoch-1 probability per action
  std::vector<double> embedding;          // unit norm
  TokenCounts token_counts;
};

struct MockScorerOptions {
  Segmentation segmentation = Segmentation::kLines;
  size_t dim = 32;
  double eta = 0.0;  // probability gain per prior selection
  std::uint64_t seed = 0;
  std::string model_tag = "mock";
};

// Deterministic scorer standing in for a language model. At epoch e every
// action probability is its base value plus eta for each earlier selection
// of the sample, capped at 1.
class MockScorer : public ScoreSource {
 public:
  MockScorer(std::vector<std::string> ids, std::vector<MockLatent> latents,
             double eta, std::string model_tag);

  // Latents derived from hashes of the sample text: outputs are segmented,
  // each action token gets a pseudo log-probability, action probabilities
  // are their length-normalized aggregate, and the embedding is a signed
  // hashed bag of words.
  static MockScorer from_dataset(const Dataset& dataset,
                                 const MockScorerOptions& options);

  std::vector<ScoreRecord> scores_for_epoch(int epoch) override;

  // Records a selection so later epochs see the learning gain.
  void observe(const SelectionManifest& manifest);

  size_t selection_count(size_t sample) const { return counts_[sample]; }
  const std::vector<MockLatent>& latents() const { return latents_; }

 private:
  std::vector<std::string> ids_;
  std::vector<MockLatent> latents_;
  std::vector<size_t> counts_;
  double eta_;
  std::string model_tag_;
};

}  // namespace p3

#endif  // P3_MOCK_SCORER_HPP_
