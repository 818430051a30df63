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

#include "p3/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "p3/error.hpp"
#include "p3/matrix.hpp"

namespace p3 {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

PairwiseCosine pairwise_cosine(const std::vector<std::vector<double>>& rows) {
  PairwiseCosine out;
  std::vector<double> norms;
  norms.reserve(rows.size());
  for (const auto& r : rows) norms.push_back(std::sqrt(dot(r, r)));
  double sum = 0.0;
  bool first = true;
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = i + 1; j < rows.size(); ++j) {
      const double c = dot(rows[i], rows[j]) / (norms[i] * norms[j]);
      sum += c;
      out.max = first ? c : std::max(out.max, c);
      first = false;
      ++out.pairs;
    }
  }
  if (out.pairs > 0) out.mean = sum / static_cast<double>(out.pairs);
  return out;
}

DiversityReport diversity_report(const SelectionManifest& manifest,
                                 const std::vector<ScoreRecord>& scores,
                                 const Dataset* dataset) {
  std::unordered_map<std::string, const ScoreRecord*> by_id;
  by_id.reserve(scores.size());
  for (const auto& r : scores) by_id.emplace(r.sample_id, &r);

  DiversityReport report;
  report.epoch = manifest.epoch;
  report.count = manifest.selected.size();
  for (const auto& item : manifest.selected) {
    auto it = by_id.find(item.sample_id);
    if (it == by_id.end() || it->second->embedding.empty()) {
      throw Error(ErrorCode::kMissingEmbedding,
                  "no embedding for selected sample '" + item.sample_id + "'");
    }
    report.ids.push_back(item.sample_id);
    report.embeddings.push_back(it->second->embedding);
    if (dataset) {
      if (auto pos = dataset->find(item.sample_id)) {
        const auto& meta = (*dataset)[*pos].meta;
        if (auto c = meta.find("cluster"); c != meta.end()) ++report.cluster_counts[c->second];
      }
    }
  }
  const PairwiseCosine pc = pairwise_cosine(report.embeddings);
  report.pairs = pc.pairs;
  report.mean_cosine = pc.mean;
  report.max_cosine = pc.max;
  return report;
}

Histogram difficulty_histogram(std::span<const double> values, size_t bins) {
  Histogram h;
  h.counts.assign(std::max<size_t>(bins, 1), 0);
  const double width = 1.0 / static_cast<double>(h.counts.size());
  for (double v : values) {
    auto bin = static_cast<long>(std::floor(std::clamp(v, 0.0, 1.0) / width));
    bin = std::clamp<long>(bin, 0, static_cast<long>(h.counts.size()) - 1);
    ++h.counts[static_cast<size_t>(bin)];
  }
  return h;
}

std::string histogram_header(size_t bins) {
  std::string out = "table\tset\tepoch";
  for (size_t b = 0; b < bins; ++b) {
    out += "\t[" + num(static_cast<double>(b) / static_cast<double>(bins)).substr(0, 4) +
           "," + num(static_cast<double>(b + 1) / static_cast<double>(bins)).substr(0, 4) +
           ")";
  }
  return out;
}

std::string histogram_row(const std::string& label, int epoch, const Histogram& h) {
  std::string out = "histogram\t" + label + "\t" + std::to_string(epoch);
  for (size_t c : h.counts) out += "\t" + std::to_string(c);
  return out;
}

std::string diversity_header() {
  return "table\tepoch\tcount\tpairs\tmean_cosine\tmax_cosine\tclusters";
}

std::string diversity_row(const DiversityReport& r) {
  std::string clusters;
  for (const auto& [label, count] : r.cluster_counts) {
    if (!clusters.empty()) clusters += ",";
    clusters += label + ":" + std::to_string(count);
  }
  if (clusters.empty()) clusters = "-";
  return "diversity\t" + std::to_string(r.epoch) + "\t" + std::to_string(r.count) + "\t" +
         std::to_string(r.pairs) + "\t" + num(r.mean_cosine) + "\t" + num(r.max_cosine) +
         "\t" + clusters;
}

std::string embedding_table(const DiversityReport& r) {
  std::string out;
  for (size_t i = 0; i < r.ids.size(); ++i) {
    out += r.ids[i];
    for (double v : r.embeddings[i]) out += "\t" + num(v);
    out += "\n";
  }
  return out;
}

}  // namespace p3
