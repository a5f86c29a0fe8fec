// Copyright (c) 2026 weylscat developers
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

#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "../errors.hpp"

namespace weylscat::detail {

// Dense complex solver for the tiny continuity systems (n = 2 or 4).
// Gaussian elimination with partial pivoting; nothing fancier is warranted
// at this size.
template <std::size_t N>
using Mat = std::array<std::array<std::complex<double>, N>, N>;
template <std::size_t N>
using Vec = std::array<std::complex<double>, N>;

template <std::size_t N>
double norm1(const Mat<N>& a) {
  double best = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < N; ++i) col += std::abs(a[i][j]);
    best = std::max(best, col);
  }
  return best;
}

template <std::size_t N>
Vec<N> solve(Mat<N> a, Vec<N> b) {
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t piv = col;
    double big = std::abs(a[col][col]);
    for (std::size_t i = col + 1; i < N; ++i) {
      const double m = std::abs(a[i][col]);
      if (m > big) {
        big = m;
        piv = i;
      }
    }
    if (!(big > 0.0)) throw singularity_error("linear solve: singular matrix");
    if (piv != col) {
      std::swap(a[piv], a[col]);
      std::swap(b[piv], b[col]);
    }
    for (std::size_t i = col + 1; i < N; ++i) {
      const std::complex<double> f = a[i][col] / a[col][col];
      if (f == std::complex<double>(0.0)) continue;
      for (std::size_t j = col; j < N; ++j) a[i][j] -= f * a[col][j];
      b[i] -= f * b[col];
    }
  }
  Vec<N> x{};
  for (std::size_t ii = N; ii-- > 0;) {
    std::complex<double> s = b[ii];
    for (std::size_t j = ii + 1; j < N; ++j) s -= a[ii][j] * x[j];
    x[ii] = s / a[ii][ii];
  }
  return x;
}

// 1-norm condition estimate via explicit inverse columns; fine at n = 4.
template <std::size_t N>
double condition1(const Mat<N>& a) {
  double inv_norm = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    Vec<N> e{};
    e[j] = 1.0;
    const Vec<N> col = solve(a, e);
    double sum = 0.0;
    for (std::size_t i = 0; i < N; ++i) sum += std::abs(col[i]);
    inv_norm = std::max(inv_norm, sum);
  }
  return norm1(a) * inv_norm;
}

}  // namespace weylscat::detail
