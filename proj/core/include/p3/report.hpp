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

// Plot data for selection runs: per-epoch difficulty histograms and
// diversity of the selected set, as tab-separated text.

#ifndef P3_REPORT_HPP_
#define P3_REPORT_HPP_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "p3/dataset.hpp"
#include "p3/manifest.hpp"

namespace p3 {

struct DiversityReport {
  int epoch = 0;
  size_t count = 0;
  size_t pairs = 0;
  double mean_cosine = 0.0;  // 0 when there are no pairs
  double max_cosine = 0.0;   // 0 when there are no pairs
  // Selected samples per meta "cluster" label, when the dataset has one.
  std::map<std::string, size_t> cluster_counts;
  std::vector<std::string> ids;
  std::vector<std::vector<double>> embeddings;
};

struct Histogram {
  std::vector<size_t> counts;  // equal-width bins over [0, 1]
};

// Throws Error(kMissingEmbedding) when a selected id has no score record.
DiversityReport diversity_report(const SelectionManifest& manifest,
                                 const std::vector<ScoreRecord>& scores,
                                 const Dataset* dataset = nullptr);

// Mean and max cosine over all unordered pairs of rows.
struct PairwiseCosine {
  size_t pairs = 0;
  double mean = 0.0;
  double max = 0.0;
};
PairwiseCosine pairwise_cosine(const std::vector<std::vector<double>>& rows);

// Values outside [0, 1] are clamped into the end bins.
Histogram difficulty_histogram(std::span<const double> values, size_t bins = 10);

std::string histogram_header(size_t bins = 10);
std::string histogram_row(const std::string& label, int epoch, const Histogram& h);
std::string diversity_header();
std::string diversity_row(const DiversityReport& report);
// id followed by the embedding entries, one selected sample per line.
std::string embedding_table(const DiversityReport& report);

}  // namespace p3

#endif  // P3_REPORT_HPP_
