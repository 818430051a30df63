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

#include "p3/spl.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "p3/error.hpp"

namespace p3 {

void PaceConfig::validate() const {
  auto in_open_range = [](double p) { return p > 0.0 && p < 100.0; };
  if (!in_open_range(start_percentile) || !in_open_range(end_percentile)) {
    throw Error(ErrorCode::kInvalidArgument,
                "percentiles must lie in (0, 100)");
  }
  if (start_percentile > end_percentile) {
    throw Error(ErrorCode::kInvalidArgument,
                "start_percentile must not exceed end_percentile");
  }
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must be >= 0");
  }
  if (epochs < 1) {
    throw Error(ErrorCode::kInvalidArgument, "epochs must be >= 1");
  }
}

double regularizer(double current, std::optional<double> previous,
                   double alpha) {
  if (!previous) return 0.0;
  return alpha * (current - *previous);
}

AdjustedDifficulty adjust(const DifficultyHistory& history, double alpha) {
  AdjustedDifficulty out;
  out.sample_id = history.sample_id;
  out.raw = history.current;
  out.regularizer = regularizer(history.current, history.previous, alpha);
  out.adjusted = out.raw + out.regularizer;
  return out;
}

double schedule_percentile(int epoch, const PaceConfig& config) {
  if (epoch < 1 || epoch > config.epochs) {
    throw Error(ErrorCode::kInvalidArgument,
                "epoch " + std::to_string(epoch) + " outside [1, " +
                    std::to_string(config.epochs) + "]");
  }
  // A single-epoch run goes straight to the final percentile.
  if (config.epochs == 1) return config.end_percentile;
  const double span = config.end_percentile - config.start_percentile;
  const double denom = static_cast<double>(config.epochs - 1);
  return config.start_percentile + span * static_cast<double>(epoch - 1) / denom;
}

double percentile(std::span<const double> values, double q) {
  if (values.empty()) {
    throw Error(ErrorCode::kEmptyPool, "cannot take a percentile of nothing");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos =
      std::clamp(q, 0.0, 100.0) / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0 || lo == hi) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double compute_threshold(std::span<const double> adjusted, int epoch,
                         const PaceConfig& config) {
  if (adjusted.empty()) {
    throw Error(ErrorCode::kEmptyPool, "no samples to threshold");
  }
  return percentile(adjusted, schedule_percentile(epoch, config));
}

FilterResult filter_pool(std::span<const DifficultyHistory> histories,
                         int epoch, const PaceConfig& config,
                         size_t min_keep) {
  if (histories.empty()) {
    throw Error(ErrorCode::kEmptyPool, "no samples to filter");
  }
  std::vector<AdjustedDifficulty> all;
  all.reserve(histories.size());
  std::vector<double> values;
  values.reserve(histories.size());
  for (const auto& h : histories) {
    all.push_back(adjust(h, config.alpha));
    values.push_back(all.back().adjusted);
  }

  FilterResult result;
  result.pool_size = all.size();
  result.percentile = schedule_percentile(epoch, config);
  result.lambda = percentile(values, result.percentile);
  for (const auto& a : all) {
    if (spl_weight(a.adjusted, result.lambda) == 1) result.kept.push_back(a);
  }

  const size_t want = std::min(min_keep, all.size());
  if (result.kept.size() < want) {
    std::vector<size_t> order(all.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return all[a].adjusted < all[b].adjusted;
    });
    order.resize(want);
    std::sort(order.begin(), order.end());
    result.kept.clear();
    for (size_t i : order) result.kept.push_back(all[i]);
    result.expanded = true;
  }
  return result;
}

}  // namespace p3
