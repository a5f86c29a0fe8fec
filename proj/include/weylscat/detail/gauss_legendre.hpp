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

#include <cmath>
#include <cstddef>
#include <vector>

#include "../errors.hpp"

namespace weylscat::detail {

struct QuadratureRule {
  std::vector<double> node;
  std::vector<double> weight;
};

// Gauss-Legendre nodes/weights on [a, b]. Roots of P_n by Newton iteration
// from the Chebyshev initial guess; exact for polynomials up to degree 2n-1.
inline QuadratureRule gauss_legendre(std::size_t n, double a, double b) {
  if (n < 1) throw quadrature_error("gauss_legendre: need at least one node");
  if (!(a < b)) throw quadrature_error("gauss_legendre: empty interval");

  QuadratureRule rule;
  rule.node.resize(n);
  rule.weight.resize(n);
  const double pi = 3.14159265358979323846;
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Legendre recurrence for P_n(x) and P'_n(x).
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Nodes come out in descending order of x; store ascending.
    rule.node[i] = x;
    rule.weight[i] = w;
    rule.node[n - 1 - i] = -x;
    rule.weight[n - 1 - i] = w;
  }
  const double mid = 0.5 * (a + b), hw = 0.5 * (b - a);
  for (std::size_t i = 0; i < n; ++i) {
    rule.node[i] = mid - hw * rule.node[i];  // descending -x => ascending node
    rule.weight[i] *= hw;
  }
  return rule;
}

}  // namespace weylscat::detail
