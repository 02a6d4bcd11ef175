/*
 * Copyright 2026 The Carnot Toolkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace carnot {

/// Small dense row-major matrix. Sizes here are the group dimension
/// (single digits), so plain O(n^3) kernels are the right tool.
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows * cols), 0.0) {}

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i * cols_ + j)]; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * cols_ + j)]; }

  Mat operator*(const Mat& rhs) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("Mat: shape mismatch in product");
    Mat out(rows_, rhs.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const double v = (*this)(i, k);
        if (v == 0.0) continue;
        for (int j = 0; j < rhs.cols_; ++j) out(i, j) += v * rhs(k, j);
      }
    return out;
  }

  std::vector<double> apply(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != cols_) throw std::invalid_argument("Mat: shape mismatch in apply");
    std::vector<double> y(static_cast<std::size_t>(rows_), 0.0);
    for (int i = 0; i < rows_; ++i) {
      double acc = 0.0;
      for (int j = 0; j < cols_; ++j) acc += (*this)(i, j) * x[static_cast<std::size_t>(j)];
      y[static_cast<std::size_t>(i)] = acc;
    }
    return y;
  }

  /// Determinant by LU with partial pivoting.
  double det() const {
    if (rows_ != cols_) throw std::invalid_argument("Mat: det of non-square matrix");
    const int n = rows_;
    if (n == 0) return 1.0;
    if (n == 1) return (*this)(0, 0);
    if (n == 2) return (*this)(0, 0) * (*this)(1, 1) - (*this)(0, 1) * (*this)(1, 0);
    Mat lu = *this;
    double sign = 1.0;
    for (int k = 0; k < n; ++k) {
      int piv = k;
      double best = std::abs(lu(k, k));
      for (int i = k + 1; i < n; ++i) {
        const double v = std::abs(lu(i, k));
        if (v > best) {
          best = v;
          piv = i;
        }
      }
      if (best == 0.0) return 0.0;
      if (piv != k) {
        for (int j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
        sign = -sign;
      }
      const double d = lu(k, k);
      for (int i = k + 1; i < n; ++i) {
        const double f = lu(i, k) / d;
        lu(i, k) = 0.0;
        for (int j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
      }
    }
    double det = sign;
    for (int k = 0; k < n; ++k) det *= lu(k, k);
    return det;
  }

  /// Minor with row i and column j removed.
  Mat minor_matrix(int i, int j) const {
    Mat m(rows_ - 1, cols_ - 1);
    for (int r = 0, mr = 0; r < rows_; ++r) {
      if (r == i) continue;
      for (int c = 0, mc = 0; c < cols_; ++c) {
        if (c == j) continue;
        m(mr, mc) = (*this)(r, c);
        ++mc;
      }
      ++mr;
    }
    return m;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> a_;
};

/// Solves A x = b in place via Gaussian elimination with partial pivoting.
/// Throws on (numerically) singular A.
inline std::vector<double> solve_linear(Mat a, std::vector<double> b) {
  const int n = a.rows();
  if (a.cols() != n || static_cast<int>(b.size()) != n) throw std::invalid_argument("solve_linear: shape mismatch");
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double v = std::abs(a(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best == 0.0) throw std::runtime_error("solve_linear: singular matrix");
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(b[static_cast<std::size_t>(k)], b[static_cast<std::size_t>(piv)]);
    }
    for (int i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      a(i, k) = 0.0;
      for (int j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
      b[static_cast<std::size_t>(i)] -= f * b[static_cast<std::size_t>(k)];
    }
  }
  for (int i = n - 1; i >= 0; --i) {
    double acc = b[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) acc -= a(i, j) * b[static_cast<std::size_t>(j)];
    b[static_cast<std::size_t>(i)] = acc / a(i, i);
  }
  return b;
}

}  // namespace carnot
