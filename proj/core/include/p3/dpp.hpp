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

// Diversity-promoting subset selection with a determinantal point process.
//
// The L-ensemble kernel is L = Q S Q, where S is the cosine similarity of
// unit-norm feature rows and Q = diag(q) holds per-sample quality. The
// probability of a subset Y is proportional to det(L_Y), which factors as
// det(S_Y) * prod_{i in Y} q_i^2, so selections trade quality against
// mutual similarity. MAP inference is NP-hard; greedy_map() approximates it
// by adding, at each step, the item with the largest log-det gain, tracking
// the gains through an incrementally grown Cholesky factor.

#ifndef P3_DPP_HPP_
#define P3_DPP_HPP_

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "p3/matrix.hpp"

namespace p3 {

inline constexpr double kQualityFloor = 1e-6;
inline constexpr double kMaxJitter = 1e-3;
// Greedy treats a residual below this fraction of L_ii as rank exhaustion.
inline constexpr double kResidualTolerance = 1e-12;
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// n feature rows, each scaled to unit L2 norm on construction.
class FeatureMatrix {
 public:
  // Throws Error(kDimensionMismatch) when rows differ in length and
  // Error(kInvalidArgument) on an empty row set or a zero/non-finite row.
  explicit FeatureMatrix(const std::vector<std::vector<double>>& rows);

  size_t size() const { return rows_.rows(); }
  size_t dim() const { return rows_.cols(); }
  std::span<const double> row(size_t i) const { return rows_.row(i); }

 private:
  Matrix rows_;
};

// Per-sample quality clamped into [kQualityFloor, 1].
class QualityVector {
 public:
  explicit QualityVector(std::span<const double> values);

  size_t size() const { return values_.size(); }
  double operator[](size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> values_;
};

struct KernelMatrix {
  Matrix entries;
  double jitter = 0.0;  // amount added to every diagonal entry

  size_t size() const { return entries.rows(); }
};

struct KernelSummary {
  double min_diagonal = 0.0;
  double max_diagonal = 0.0;
  double jitter = 0.0;
};

struct GreedyResult {
  std::vector<size_t> indices;  // selection order
  std::vector<double> gains;    // log-det gain of each pick; -inf for fills
  size_t rank_fill = 0;         // picks made by quality after gains ran out
};

// S_ij = phi_i . phi_j, clamped to [-1, 1], with S_ii = 1.
Matrix similarity_matrix(const FeatureMatrix& features);

// L_ij = q_i S_ij q_j. The smallest jitter in {0, b, 10b, 100b, ...} for
// which a Cholesky factorization has no negative pivot is added to the
// diagonal. Throws Error(kSizeMismatch) on inconsistent sizes and
// Error(kNotPSD) when the required jitter would exceed kMaxJitter.
KernelMatrix kernel_matrix(const QualityVector& quality, const Matrix& similarity,
                           double jitter_base);

KernelSummary summarize(const KernelMatrix& kernel);

// True when the Cholesky factorization of a + jitter*I meets no negative
// pivot. Exactly zero pivots are accepted (positive semidefinite).
bool cholesky_succeeds(const Matrix& a, double jitter = 0.0);

// log det(L_Y) through a Cholesky factorization of the submatrix; -inf when
// the submatrix is singular and 0 for the empty set. Throws
// Error(kIndexOutOfRange) on a bad or duplicated index.
double subset_log_det(const Matrix& kernel, std::span<const size_t> subset);
inline double subset_log_det(const KernelMatrix& kernel,
                             std::span<const size_t> subset) {
  return subset_log_det(kernel.entries, subset);
}

// Greedy MAP: k distinct indices in pick order, O(n k^2). Ties go to the
// lowest index. Throws Error(kKTooLarge) when k exceeds the kernel size and
// Error(kInvalidArgument) when k is zero.
GreedyResult greedy_map(const Matrix& kernel, size_t k);
inline GreedyResult greedy_map(const KernelMatrix& kernel, size_t k) {
  return greedy_map(kernel.entries, k);
}

}  // namespace p3

#endif  // P3_DPP_HPP_
