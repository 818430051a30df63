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

#include "p3/mock_scorer.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_map>

#include "p3/error.hpp"
#include "p3/fs.hpp"
#include "p3/rng.hpp"

namespace p3 {
namespace {

std::vector<std::string> whitespace_split(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      current += static_cast<char>(c);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<double> hashed_embedding(const Sample& s, size_t dim, std::uint64_t seed) {
  std::vector<double> v(dim, 0.0);
  for (const auto* text : {&s.instruction, &s.output}) {
    for (const auto& token : whitespace_split(*text)) {
      const std::uint64_t h = mix_seed(seed, fnv1a64(token));
      v[h % dim] += (h >> 63) ? 1.0 : -1.0;
    }
  }
  double sq = 0.0;
  for (double x : v) sq += x * x;
  if (sq == 0.0) {
    v[mix_seed(seed, fnv1a64(s.id)) % dim] = 1.0;
    return v;
  }
  const double norm = std::sqrt(sq);
  for (double& x : v) x /= norm;
  return v;
}

}  // namespace

MockScorer::MockScorer(std::vector<std::string> ids, std::vector<MockLatent> latents,
                       double eta, std::string model_tag)
    : ids_(std::move(ids)),
      latents_(std::move(latents)),
      counts_(ids_.size(), 0),
      eta_(eta),
      model_tag_(std::move(model_tag)) {
  if (ids_.size() != latents_.size()) {
    throw Error(ErrorCode::kSizeMismatch, "mock scorer ids and latents differ in size");
  }
  if (!(eta_ >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "eta must be >= 0");
}

MockScorer MockScorer::from_dataset(const Dataset& dataset,
                                    const MockScorerOptions& options) {
  if (options.dim == 0) throw Error(ErrorCode::kInvalidArgument, "dim must be >= 1");
  std::vector<std::string> ids;
  std::vector<MockLatent> latents;
  ids.reserve(dataset.size());
  latents.reserve(dataset.size());
  for (const Sample& s : dataset.samples()) {
    const std::uint64_t sample_hash = mix_seed(options.seed, fnv1a64(s.id));
    // Per-sample ease sets the typical token probability in [0.15, 0.98].
    const double ease = 0.15 + 0.83 * hash_unit(sample_hash);
    MockLatent latent;
    const auto actions = segment_output(s.output, options.segmentation);
    for (size_t a = 0; a < actions.size(); ++a) {
      auto tokens = whitespace_split(actions[a]);
      if (tokens.empty()) tokens.push_back(actions[a]);
      std::vector<double> logprobs;
      logprobs.reserve(tokens.size());
      for (size_t t = 0; t < tokens.size(); ++t) {
        const double u = hash_unit(mix_seed(sample_hash, (a << 20) ^ t));
        logprobs.push_back(std::log(ease) + 0.3 * std::log(std::max(u, 1e-3)));
      }
      latent.base_action_probs.push_back(action_probability(logprobs));
    }
    latent.embedding = hashed_embedding(s, options.dim, options.seed);
    latent.token_counts.question = static_cast<long>(whitespace_split(s.instruction).size());
    latent.token_counts.answer = static_cast<long>(whitespace_split(s.output).size());
    ids.push_back(s.id);
    latents.push_back(std::move(latent));
  }
  return MockScorer(std::move(ids), std::move(latents), options.eta, options.model_tag);
}

std::vector<ScoreRecord> MockScorer::scores_for_epoch(int epoch) {
  std::vector<ScoreRecord> records;
  records.reserve(ids_.size());
  for (size_t i = 0; i < ids_.size(); ++i) {
    ScoreRecord r;
    r.sample_id = ids_[i];
    r.epoch = epoch;
    r.model_tag = model_tag_;
    const double gain = eta_ * static_cast<double>(counts_[i]);
    r.action_probs.reserve(latents_[i].base_action_probs.size());
    for (double p : latents_[i].base_action_probs) {
      r.action_probs.push_back(std::clamp(p + gain, kProbabilityFloor, 1.0));
    }
    r.token_counts = latents_[i].token_counts;
    r.embedding = latents_[i].embedding;
    records.push_back(std::move(r));
  }
  return records;
}

void MockScorer::observe(const SelectionManifest& manifest) {
  std::unordered_map<std::string, size_t> index;
  index.reserve(ids_.size());
  for (size_t i = 0; i < ids_.size(); ++i) index.emplace(ids_[i], i);
  for (const auto& item : manifest.selected) {
    auto it = index.find(item.sample_id);
    if (it == index.end()) {
      throw Error(ErrorCode::kSchemaError,
                  "manifest selects unknown sample '" + item.sample_id + "'");
    }
    ++counts_[it->second];
  }
}

}  // namespace p3
