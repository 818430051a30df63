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

// Self-paced filtering. Each epoch the raw difficulty of a sample is shifted
// by alpha times its change since the previous epoch, a percentile threshold
// lambda is taken over the shifted values, and only samples at or below
// lambda stay in the pool.

#ifndef P3_SPL_HPP_
#define P3_SPL_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace p3 {

struct DifficultyHistory {
  std::string sample_id;
  double current = 0.0;
  std::optional<double> previous;  // absent at epoch 1
};

struct PaceConfig {
  double start_percentile = 50.0;
  double end_percentile = 95.0;
  double alpha = 0.5;
  int epochs = 5;

  // Throws Error(kInvalidArgument) when a field is out of range.
  void validate() const;
};

struct AdjustedDifficulty {
  std::string sample_id;
  double raw = 0.0;
  double regularizer = 0.0;
  double adjusted = 0.0;  // raw + regularizer
};

struct FilterResult {
  double lambda = 0.0;
  double percentile = 0.0;
  size_t pool_size = 0;
  // Samples with adjusted <= lambda, in pool order. After expansion this is
  // the min_keep lowest-adjusted samples instead, still in pool order.
  std::vector<AdjustedDifficulty> kept;
  bool expanded = false;
};

// alpha * (current - previous), or 0 without a previous epoch.
double regularizer(double current, std::optional<double> previous,
                   double alpha);

AdjustedDifficulty adjust(const DifficultyHistory& history, double alpha);

// q(e) = start + (end - start) * (e - 1) / max(E - 1, 1).
double schedule_percentile(int epoch, const PaceConfig& config);

// q-th percentile (q in [0, 100]) with linear interpolation between the
// closest order statistics: position q/100 * (n - 1) in the sorted list.
double percentile(std::span<const double> values, double q);

// Percentile of `adjusted` at the scheduled q(epoch).
// Throws Error(kEmptyPool) on an empty list.
double compute_threshold(std::span<const double> adjusted, int epoch,
                         const PaceConfig& config);

inline int spl_weight(double f, double lambda) { return f <= lambda ? 1 : 0; }

// Applies the threshold to the whole pool. When fewer than min_keep samples
// pass, the pool is replaced by the min_keep samples with the lowest
// adjusted difficulty (ties: pool order) and `expanded` is set.
FilterResult filter_pool(std::span<const DifficultyHistory> histories,
                         int epoch, const PaceConfig& config,
                         size_t min_keep = 0);

}  // namespace p3

#endif  // P3_SPL_HPP_
