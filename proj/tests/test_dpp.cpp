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


#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "expect_error.hpp"
#include "oracles.hpp"
#include "p3/dpp.hpp"

using p3::ErrorCode;
using p3::Matrix;

namespace {

Matrix diagonal(const std::vector<double>& d) {
  Matrix m(d.size(), d.size());
  for (size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

p3::FeatureMatrix random_features(std::mt19937_64& rng, size_t n, size_t dim) {
  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < n; ++i) rows.push_back(oracle::gaussian_vector(rng, dim));
  return p3::FeatureMatrix(rows);
}

std::vector<double> random_quality(std::mt19937_64& rng, size_t n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> q(n);
  for (double& x : q) x = u(rng);
  return q;
}

}  // namespace

TEST_CASE("feature rows are normalized") {
  p3::FeatureMatrix f({{3.0, 4.0}, {0.0, -2.0}});
  CHECK(f.size() == 2);
  CHECK(f.dim() == 2);
  CHECK(f.row(0)[0] == doctest::Approx(0.6));
  CHECK(f.row(1)[1] == -1.0);
  CHECK_P3_ERROR(p3::FeatureMatrix({{1.0, 0.0}, {1.0}}), ErrorCode::kDimensionMismatch);
  CHECK_P3_ERROR(p3::FeatureMatrix({{0.0, 0.0}}), ErrorCode::kInvalidArgument);
  CHECK_P3_ERROR(p3::FeatureMatrix({}), ErrorCode::kInvalidArgument);
}

TEST_CASE("quality is clamped") {
  const std::vector<double> raw = {0.0, 0.5, 2.0, NAN};
  p3::QualityVector q(raw);
  CHECK(q[0] == p3::kQualityFloor);
  CHECK(q[1] == 0.5);
  CHECK(q[2] == 1.0);
  CHECK(q[3] == p3::kQualityFloor);
}

TEST_CASE("similarity_matrix") {
  auto same = p3::similarity_matrix(p3::FeatureMatrix({{1.0, 2.0}, {1.0, 2.0}}));
  CHECK(same(0, 1) == doctest::Approx(1.0));
  auto ortho = p3::similarity_matrix(p3::FeatureMatrix({{1.0, 0.0}, {0.0, 1.0}}));
  CHECK(ortho(0, 0) == 1.0);
  CHECK(ortho(0, 1) == 0.0);
  const double h = std::sqrt(2.0) / 2.0;
  auto diag = p3::similarity_matrix(p3::FeatureMatrix({{1.0, 0.0}, {h, h}}));
  CHECK(std::fabs(diag(0, 1) - h) < 1e-15);
  CHECK(diag(1, 0) == diag(0, 1));
}

TEST_CASE("kernel_matrix entries") {
  const std::vector<double> ones = {1.0, 1.0};
  auto id = p3::kernel_matrix(p3::QualityVector(ones), Matrix::identity(2), 1e-10);
  CHECK(id.entries(0, 0) == 1.0);
  CHECK(id.entries(0, 1) == 0.0);
  CHECK(id.jitter == 0.0);

  // closed-form 2x2 determinant
  const std::vector<double> q2 = {0.7, 0.4};
  Matrix s2 = Matrix::identity(2);
  s2(0, 1) = s2(1, 0) = 0.3;
  auto k2 = p3::kernel_matrix(p3::QualityVector(q2), s2, 1e-10);
  const double det = k2.entries(0, 0) * k2.entries(1, 1) - k2.entries(0, 1) * k2.entries(1, 0);
  CHECK(std::fabs(det - 0.49 * 0.16 * (1 - 0.09)) < 1e-15);

  std::mt19937_64 rng(21);
  for (int t = 0; t < 20; ++t) {
    const auto f = random_features(rng, 8, 5);
    const auto s = p3::similarity_matrix(f);
    const auto q = random_quality(rng, 8);
    const auto k = p3::kernel_matrix(p3::QualityVector(q), s, 1e-10);
    for (size_t i = 0; i < 8; ++i) {
      for (size_t j = 0; j < 8; ++j) {
        const double expect = q[i] * s(i, j) * q[j] + (i == j ? k.jitter : 0.0);
        CHECK(std::fabs(k.entries(i, j) - expect) < 1e-12);
        CHECK(std::fabs(k.entries(i, j) - k.entries(j, i)) < 1e-12);
      }
    }
  }
}

TEST_CASE("kernel_matrix size mismatch") {
  const std::vector<double> q = {0.5, 0.5, 0.5};
  CHECK_P3_ERROR(p3::kernel_matrix(p3::QualityVector(q), Matrix::identity(2), 1e-10),
                 ErrorCode::kSizeMismatch);
}

TEST_CASE("kernel_matrix jitter escalation") {
  // A matrix with a -1e-9 eigenvalue needs jitter 1e-8 from base 1e-10.
  Matrix s = Matrix::identity(2);
  s(0, 1) = s(1, 0) = 1.0 + 1e-9;
  const std::vector<double> ones = {1.0, 1.0};
  auto k = p3::kernel_matrix(p3::QualityVector(ones), s, 1e-10);
  CHECK(k.jitter == doctest::Approx(1e-8));
  CHECK(k.entries(0, 0) == doctest::Approx(1.0 + 1e-8));
  CHECK(p3::summarize(k).jitter == k.jitter);

  // indefinite beyond the cap
  Matrix bad = Matrix::identity(2);
  bad(0, 1) = bad(1, 0) = 1.5;
  CHECK_P3_ERROR(p3::kernel_matrix(p3::QualityVector(ones), bad, 1e-10), ErrorCode::kNotPSD);
}

TEST_CASE("cholesky_succeeds") {
  CHECK(p3::cholesky_succeeds(Matrix::identity(3)));
  Matrix singular(2, 2, 1.0);
  CHECK(p3::cholesky_succeeds(singular));
  Matrix neg = Matrix::identity(2);
  neg(1, 1) = -1e-12;
  CHECK_FALSE(p3::cholesky_succeeds(neg));
  CHECK(p3::cholesky_succeeds(neg, 1e-11));
}

TEST_CASE("summarize") {
  const std::vector<double> q = {0.2, 0.9, 0.5};
  auto k = p3::kernel_matrix(p3::QualityVector(q), Matrix::identity(3), 1e-10);
  const auto s = p3::summarize(k);
  CHECK(s.min_diagonal == doctest::Approx(0.04));
  CHECK(s.max_diagonal == doctest::Approx(0.81));
}

TEST_CASE("subset_log_det") {
  const Matrix d = diagonal({0.5, 2.0, 3.0, 0.1});
  CHECK(p3::subset_log_det(d, std::vector<size_t>{}) == 0.0);
  const std::vector<size_t> y = {0, 2, 3};
  CHECK(std::fabs(p3::subset_log_det(d, y) - (std::log(0.5) + std::log(3.0) + std::log(0.1))) <
        1e-14);
  Matrix singular(2, 2, 1.0);
  CHECK(p3::subset_log_det(singular, std::vector<size_t>{0, 1}) == p3::kNegInf);
  CHECK_P3_ERROR(p3::subset_log_det(d, std::vector<size_t>{4}), ErrorCode::kIndexOutOfRange);
  CHECK_P3_ERROR(p3::subset_log_det(d, std::vector<size_t>{1, 1}), ErrorCode::kIndexOutOfRange);
}

TEST_CASE("subset_log_det against the cofactor oracle") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 50; ++t) {
    const Matrix a = oracle::random_psd(rng, 6, 8);
    std::vector<size_t> all = {0, 1, 2, 3, 4, 5};
    std::shuffle(all.begin(), all.end(), rng);
    const std::vector<size_t> y(all.begin(), all.begin() + 3);
    const double expect = std::log(static_cast<double>(oracle::subset_det_cofactor(a, y)));
    const double got = p3::subset_log_det(a, y);
    CHECK(std::fabs(std::exp(got - expect) - 1.0) < 1e-9);
  }
}

TEST_CASE("det(L_Y) = det(S_Y) prod q^2") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 20; ++t) {
    const size_t n = 4 + t % 6;
    const auto s = p3::similarity_matrix(random_features(rng, n, n + 3));
    const auto q = random_quality(rng, n);
    const auto k = p3::kernel_matrix(p3::QualityVector(q), s, 1e-10);
    REQUIRE(k.jitter == 0.0);
    for (size_t size = 1; size <= n; ++size) {
      std::vector<size_t> y(n);
      std::iota(y.begin(), y.end(), size_t{0});
      std::shuffle(y.begin(), y.end(), rng);
      y.resize(size);
      long double prod = 1.0L;
      for (size_t i : y) prod *= static_cast<long double>(q[i]) * q[i];
      const long double expect = oracle::det_gauss(oracle::submatrix(s, y)) * prod;
      const long double got = oracle::det_gauss(oracle::submatrix(k.entries, y));
      CHECK(std::fabs(static_cast<double>(got / expect) - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("greedy_map worked examples") {
  auto r = p3::greedy_map(diagonal({0.81, 0.25, 0.49}), 2);
  CHECK(r.indices == std::vector<size_t>{0, 2});
  CHECK(r.rank_fill == 0);

  Matrix near(3, 3);
  near(0, 0) = near(1, 1) = 1.0;
  near(0, 1) = near(1, 0) = 0.999;
  near(2, 2) = 0.04;
  auto d = p3::greedy_map(near, 2);
  CHECK(std::set<size_t>(d.indices.begin(), d.indices.end()) == std::set<size_t>{0, 2});
  // brute force agrees
  double best = -INFINITY;
  std::vector<size_t> arg;
  oracle::for_each_subset(3, 2, [&](const std::vector<size_t>& y) {
    const double v = oracle::subset_log_det(near, y);
    if (v > best) {
      best = v;
      arg = y;
    }
  });
  CHECK(arg == std::vector<size_t>{0, 2});
}

TEST_CASE("greedy_map ties go to the lowest index") {
  auto r = p3::greedy_map(Matrix::identity(5), 3);
  CHECK(r.indices == std::vector<size_t>{0, 1, 2});
}

TEST_CASE("greedy_map errors") {
  CHECK_P3_ERROR(p3::greedy_map(Matrix::identity(2), 3), ErrorCode::kKTooLarge);
  CHECK_P3_ERROR(p3::greedy_map(Matrix::identity(2), 0), ErrorCode::kInvalidArgument);
}

TEST_CASE("greedy_map fills by quality when rank runs out") {
  // Rank-1 kernel: after one pick every residual is zero.
  const std::vector<double> q = {0.3, 0.9, 0.6, 0.1};
  Matrix m(4, 4);
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = 0; j < 4; ++j) m(i, j) = q[i] * q[j];
  auto r = p3::greedy_map(m, 3);
  REQUIRE(r.indices.size() == 3);
  CHECK(r.indices[0] == 1);
  CHECK(r.rank_fill == 2);
  CHECK(r.indices[1] == 2);
  CHECK(r.indices[2] == 0);
  CHECK(r.gains[1] == p3::kNegInf);
}

TEST_CASE("greedy steps are marginally optimal") {
  std::mt19937_64 rng(51);
  for (int t = 0; t < 30; ++t) {
    const size_t n = 8;
    const size_t k = 3;
    const Matrix a = oracle::random_psd(rng, n, n);
    const auto r = p3::greedy_map(a, k);
    std::vector<size_t> chosen;
    for (size_t step = 0; step < k; ++step) {
      const double base = oracle::subset_log_det(a, chosen);
      double best = -INFINITY;
      for (size_t j = 0; j < n; ++j) {
        if (std::find(chosen.begin(), chosen.end(), j) != chosen.end()) continue;
        auto y = chosen;
        y.push_back(j);
        best = std::max(best, oracle::subset_log_det(a, y) - base);
      }
      CHECK(std::fabs(r.gains[step] - best) < 1e-9);
      chosen.push_back(r.indices[step]);
    }
  }
}

TEST_CASE("incremental gains match recomputed log dets") {
  std::mt19937_64 rng(61);
  const size_t n = 64;
  const auto s = p3::similarity_matrix(random_features(rng, n, 96));
  const auto k = p3::kernel_matrix(p3::QualityVector(random_quality(rng, n)), s, 1e-10);
  const auto r = p3::greedy_map(k, 20);
  double total = 0.0;
  for (size_t step = 0; step < r.indices.size(); ++step) {
    total += r.gains[step];
    const std::vector<size_t> prefix(r.indices.begin(), r.indices.begin() + step + 1);
    CHECK(std::fabs(total - p3::subset_log_det(k, prefix)) < 1e-8);
  }
}

TEST_CASE("greedy is exact on diagonal kernels") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int t = 0; t < 50; ++t) {
    const size_t n = 3 + t % 6;
    const size_t k = 1 + t % std::min<size_t>(n, 4);
    std::vector<double> d(n);
    for (double& x : d) x = u(rng);
    const Matrix m = diagonal(d);
    auto r = p3::greedy_map(m, k);
    double best = -INFINITY;
    std::vector<size_t> arg;
    oracle::for_each_subset(n, k, [&](const std::vector<size_t>& y) {
      const double v = oracle::subset_log_det(m, y);
      if (v > best) {
        best = v;
        arg = y;
      }
    });
    std::sort(r.indices.begin(), r.indices.end());
    CHECK(r.indices == arg);
  }
}

TEST_CASE("scaling qualities keeps the greedy order") {
  std::mt19937_64 rng(81);
  const auto s = p3::similarity_matrix(random_features(rng, 12, 6));
  auto q = random_quality(rng, 12);
  for (double& x : q) x *= 0.5;
  const auto a = p3::greedy_map(p3::kernel_matrix(p3::QualityVector(q), s, 1e-10), 5);
  for (double& x : q) x *= 1.7;
  const auto b = p3::greedy_map(p3::kernel_matrix(p3::QualityVector(q), s, 1e-10), 5);
  CHECK(a.indices == b.indices);
}
