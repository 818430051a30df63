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


// Independent reference implementations used only by the tests. None of
// these share code with the library beyond the Matrix container.

#ifndef P3_TESTS_ORACLES_HPP_
#define P3_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "p3/matrix.hpp"

namespace oracle {

using p3::Matrix;

// Determinant by Gaussian elimination with partial pivoting, long double.
inline long double det_gauss(const Matrix& a) {
  const size_t n = a.rows();
  std::vector<std::vector<long double>> m(n, std::vector<long double>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) m[i][j] = a(i, j);
  long double det = 1.0L;
  for (size_t c = 0; c < n; ++c) {
    size_t pivot = c;
    for (size_t r = c + 1; r < n; ++r)
      if (std::fabs(m[r][c]) > std::fabs(m[pivot][c])) pivot = r;
    if (m[pivot][c] == 0.0L) return 0.0L;
    if (pivot != c) {
      std::swap(m[pivot], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (size_t r = c + 1; r < n; ++r) {
      const long double f = m[r][c] / m[c][c];
      for (size_t j = c; j < n; ++j) m[r][j] -= f * m[c][j];
    }
  }
  return det;
}

// Laplace expansion along the first row. Exponential; keep n small.
inline long double det_cofactor(const std::vector<std::vector<long double>>& m) {
  const size_t n = m.size();
  if (n == 0) return 1.0L;
  if (n == 1) return m[0][0];
  long double det = 0.0L;
  for (size_t c = 0; c < n; ++c) {
    std::vector<std::vector<long double>> minor;
    for (size_t r = 1; r < n; ++r) {
      std::vector<long double> row;
      for (size_t j = 0; j < n; ++j)
        if (j != c) row.push_back(m[r][j]);
      minor.push_back(std::move(row));
    }
    const long double term = m[0][c] * det_cofactor(minor);
    det += (c % 2 == 0) ? term : -term;
  }
  return det;
}

inline Matrix submatrix(const Matrix& a, const std::vector<size_t>& idx) {
  Matrix s(idx.size(), idx.size());
  for (size_t i = 0; i < idx.size(); ++i)
    for (size_t j = 0; j < idx.size(); ++j) s(i, j) = a(idx[i], idx[j]);
  return s;
}

inline long double subset_det_cofactor(const Matrix& a, const std::vector<size_t>& idx) {
  std::vector<std::vector<long double>> m(idx.size(), std::vector<long double>(idx.size()));
  for (size_t i = 0; i < idx.size(); ++i)
    for (size_t j = 0; j < idx.size(); ++j) m[i][j] = a(idx[i], idx[j]);
  return det_cofactor(m);
}

inline double subset_log_det(const Matrix& a, const std::vector<size_t>& idx) {
  if (idx.empty()) return 0.0;
  const long double d = det_gauss(submatrix(a, idx));
  return d > 0.0L ? static_cast<double>(std::log(d)) : -INFINITY;
}

// Percentile by scanning the piecewise-linear empirical CDF: sorted value
// v_i sits at rank i/(n-1); q/100 is located between two ranks and the
// values are blended by the fractional distance.
inline double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  if (v.size() == 1) return v[0];
  const double target = q / 100.0;
  const double step = 1.0 / static_cast<double>(v.size() - 1);
  for (size_t i = 0; i + 1 < v.size(); ++i) {
    const double lo = static_cast<double>(i) * step;
    const double hi = static_cast<double>(i + 1) * step;
    if (target <= hi || i + 2 == v.size()) {
      const double t = std::clamp((target - lo) / step, 0.0, 1.0);
      return v[i] + t * (v[i + 1] - v[i]);
    }
  }
  return v.back();
}

// Every k-subset of {0..n-1}, lexicographic.
inline void for_each_subset(size_t n, size_t k,
                            const std::function<void(const std::vector<size_t>&)>& fn) {
  std::vector<size_t> idx(k);
  std::function<void(size_t, size_t)> rec = [&](size_t start, size_t depth) {
    if (depth == k) {
      fn(idx);
      return;
    }
    for (size_t i = start; i + (k - depth) <= n; ++i) {
      idx[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
}

inline std::vector<double> gaussian_vector(std::mt19937_64& rng, size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = g(rng);
  return v;
}

inline std::vector<double> unit_vector(std::mt19937_64& rng, size_t n) {
  auto v = gaussian_vector(rng, n);
  double s = 0.0;
  for (double x : v) s += x * x;
  s = std::sqrt(s);
  for (double& x : v) x /= s;
  return v;
}

// B B^T with B of size n x rank: PSD, singular when rank < n.
inline Matrix random_psd(std::mt19937_64& rng, size_t n, size_t rank) {
  std::vector<std::vector<double>> b;
  for (size_t i = 0; i < n; ++i) b.push_back(gaussian_vector(rng, rank));
  Matrix m(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (size_t r = 0; r < rank; ++r) s += b[i][r] * b[j][r];
      m(i, j) = s;
    }
  return m;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("p3test-" + tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace oracle

#endif  // P3_TESTS_ORACLES_HPP_
