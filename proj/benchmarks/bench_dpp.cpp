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


#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "p3/dpp.hpp"
#include "p3/rng.hpp"

namespace {

p3::FeatureMatrix random_features(size_t n, size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> rows(n, std::vector<double>(dim));
  for (auto& r : rows) {
    for (double& x : r) x = p3::standard_normal(rng);
  }
  return p3::FeatureMatrix(rows);
}

p3::QualityVector random_quality(size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> q(n);
  for (double& x : q) x = 0.05 + 0.9 * p3::uniform_unit(rng);
  return p3::QualityVector(q);
}

void BM_Similarity(benchmark::State& state) {
  const auto n = static_cast<size_t>(state.range(0));
  const auto features = random_features(n, 64, 1);
  for (auto _ : state) benchmark::DoNotOptimize(p3::similarity_matrix(features));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Similarity)->RangeMultiplier(2)->Range(128, 2048)->Complexity();

void BM_Kernel(benchmark::State& state) {
  const auto n = static_cast<size_t>(state.range(0));
  const auto s = p3::similarity_matrix(random_features(n, 64, 2));
  const auto q = random_quality(n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(p3::kernel_matrix(q, s, 1e-10));
}
BENCHMARK(BM_Kernel)->RangeMultiplier(2)->Range(128, 2048);

void BM_GreedyMap(benchmark::State& state) {
  const auto n = static_cast<size_t>(state.range(0));
  const auto k = static_cast<size_t>(state.range(1));
  const auto kernel = p3::kernel_matrix(random_quality(n, 5),
                                        p3::similarity_matrix(random_features(n, 64, 4)), 1e-10);
  for (auto _ : state) benchmark::DoNotOptimize(p3::greedy_map(kernel, k));
}
BENCHMARK(BM_GreedyMap)->Args({500, 50})->Args({1000, 100})->Args({2000, 200});

}  // namespace

BENCHMARK_MAIN();
