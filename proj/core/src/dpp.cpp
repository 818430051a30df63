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

#include "p3/dpp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "p3/error.hpp"

namespace p3 {

FeatureMatrix::FeatureMatrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) {
    throw Error(ErrorCode::kInvalidArgument, "feature matrix needs rows");
  }
  const size_t dim = rows.front().size();
  rows_ = Matrix(rows.size(), dim);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "row " + std::to_string(i) + " has length " +
                      std::to_string(rows[i].size()) + ", expected " +
                      std::to_string(dim));
    }
    const double norm = std::sqrt(dot(rows[i], rows[i]));
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "row " + std::to_string(i) + " cannot be normalized");
    }
    auto out = rows_.row(i);
    for (size_t d = 0; d < dim; ++d) out[d] = rows[i][d] / norm;
  }
}

QualityVector::QualityVector(std::span<const double> values) {
  values_.reserve(values.size());
  for (double v : values) {
    values_.push_back(std::isnan(v) ? kQualityFloor
                                    : std::clamp(v, kQualityFloor, 1.0));
  }
}

Matrix similarity_matrix(const FeatureMatrix& features) {
  const size_t n = features.size();
  Matrix s(n, n);
  for (size_t i = 0; i < n; ++i) {
    s(i, i) = 1.0;
    for (size_t j = i + 1; j < n; ++j) {
      const double v = std::clamp(dot(features.row(i), features.row(j)), -1.0, 1.0);
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return s;
}

bool cholesky_succeeds(const Matrix& a, double jitter) {
  const size_t n = a.rows();
  Matrix l(n, n);
  for (size_t i = 0; i < n; ++i) {
    auto li = l.row(i);
    for (size_t j = 0; j < i; ++j) {
      const double ljj = l(j, j);
      if (ljj == 0.0) {
        li[j] = 0.0;
        continue;
      }
      li[j] = (a(i, j) - dot(li, l.row(j), j)) / ljj;
    }
    const double pivot = a(i, i) + jitter - dot(li, li, i);
    if (pivot < 0.0 || std::isnan(pivot)) return false;
    li[i] = std::sqrt(pivot);
  }
  return true;
}

KernelMatrix kernel_matrix(const QualityVector& quality, const Matrix& similarity,
                           double jitter_base) {
  const size_t n = quality.size();
  if (similarity.rows() != n || similarity.cols() != n) {
    throw Error(ErrorCode::kSizeMismatch,
                "quality has " + std::to_string(n) + " entries but similarity is " +
                    std::to_string(similarity.rows()) + "x" +
                    std::to_string(similarity.cols()));
  }
  KernelMatrix kernel;
  kernel.entries = Matrix(n, n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      kernel.entries(i, j) = quality[i] * similarity(i, j) * quality[j];
    }
  }

  // Tolerance keeps 1e-10 * 10^7 from missing the 1e-3 cap by rounding.
  const double cap = kMaxJitter * (1.0 + 1e-9);
  double jitter = 0.0;
  while (!cholesky_succeeds(kernel.entries, jitter)) {
    jitter = jitter == 0.0 ? jitter_base : jitter * 10.0;
    if (!(jitter > 0.0) || jitter > cap) {
      throw Error(ErrorCode::kNotPSD,
                  "kernel is not positive semidefinite within jitter " +
                      std::to_string(kMaxJitter));
    }
  }
  if (jitter > 0.0) {
    for (size_t i = 0; i < n; ++i) kernel.entries(i, i) += jitter;
  }
  kernel.jitter = jitter;
  return kernel;
}

KernelSummary summarize(const KernelMatrix& kernel) {
  KernelSummary s;
  s.jitter = kernel.jitter;
  if (kernel.size() == 0) return s;
  s.min_diagonal = s.max_diagonal = kernel.entries(0, 0);
  for (size_t i = 1; i < kernel.size(); ++i) {
    s.min_diagonal = std::min(s.min_diagonal, kernel.entries(i, i));
    s.max_diagonal = std::max(s.max_diagonal, kernel.entries(i, i));
  }
  return s;
}

double subset_log_det(const Matrix& kernel, std::span<const size_t> subset) {
  const size_t n = kernel.rows();
  const size_t m = subset.size();
  std::vector<bool> seen(n, false);
  for (size_t idx : subset) {
    if (idx >= n || seen[idx]) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "subset index " + std::to_string(idx) +
                      " is out of range or repeated (n = " + std::to_string(n) +
                      ")");
    }
    seen[idx] = true;
  }

  Matrix l(m, m);
  double log_det = 0.0;
  for (size_t i = 0; i < m; ++i) {
    auto li = l.row(i);
    for (size_t j = 0; j < i; ++j) {
      li[j] = (kernel(subset[i], subset[j]) - dot(li, l.row(j), j)) / l(j, j);
    }
    const double pivot = kernel(subset[i], subset[i]) - dot(li, li, i);
    if (!(pivot > 0.0)) return kNegInf;
    li[i] = std::sqrt(pivot);
    log_det += std::log(pivot);
  }
  return log_det;
}

GreedyResult greedy_map(const Matrix& kernel, size_t k) {
  const size_t n = kernel.rows();
  if (k == 0) {
    throw Error(ErrorCode::kInvalidArgument, "selection size k must be >= 1");
  }
  if (k > n) {
    throw Error(ErrorCode::kKTooLarge, "k = " + std::to_string(k) +
                                           " exceeds pool size " +
                                           std::to_string(n));
  }

  GreedyResult result;
  result.indices.reserve(k);
  result.gains.reserve(k);

  // Row i of `factor` holds item i's entries in the Cholesky factor of the
  // selected set; residual[i] is the Schur complement L_ii - |c_i|^2, which
  // equals det(L_{A+i}) / det(L_A).
  Matrix factor(n, k);
  std::vector<double> residual(n);
  std::vector<bool> selected(n, false);
  for (size_t i = 0; i < n; ++i) residual[i] = kernel(i, i);

  for (size_t step = 0; step < k; ++step) {
    size_t best = n;
    for (size_t i = 0; i < n; ++i) {
      if (selected[i] || !(residual[i] > kResidualTolerance * kernel(i, i))) continue;
      if (best == n || residual[i] > residual[best]) best = i;
    }
    if (best == n) break;

    selected[best] = true;
    result.indices.push_back(best);
    result.gains.push_back(std::log(residual[best]));
    if (step + 1 == k) break;

    const double pivot = std::sqrt(residual[best]);
    const auto best_row = factor.row(best);
    for (size_t i = 0; i < n; ++i) {
      if (selected[i]) continue;
      auto row = factor.row(i);
      const double e = (kernel(best, i) - dot(best_row, row, step)) / pivot;
      row[step] = e;
      residual[i] -= e * e;
    }
  }

  if (result.indices.size() < k) {
    std::vector<size_t> rest;
    for (size_t i = 0; i < n; ++i) {
      if (!selected[i]) rest.push_back(i);
    }
    std::stable_sort(rest.begin(), rest.end(), [&](size_t a, size_t b) {
      return kernel(a, a) > kernel(b, b);
    });
    for (size_t i = 0; result.indices.size() < k; ++i) {
      result.indices.push_back(rest[i]);
      result.gains.push_back(kNegInf);
      ++result.rank_fill;
    }
  }
  return result;
}

}  // namespace p3
