// SPDX-License-Identifier: Apache-2.0
//
// iftrlib - analytical and Monte Carlo tools for two-ray fading channels
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace iftr::quad {

namespace {

// Golub-Welsch: eigenvalues of the Jacobi matrix are the nodes, squared first
// eigenvector components give the weights. Implicit-shift QL on the symmetric
// tridiagonal (d, e), simultaneously rotating the weight vector z.
void tql_with_vector(std::vector<double>& d, std::vector<double>& e,
                     std::vector<double>& z) {
  const int n = static_cast<int>(d.size());
  e.push_back(0.0);
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= 1e-300 + 2.3e-16 * dd) break;
      }
      if (m != l) {
        if (iter++ == 80) throw std::runtime_error("quadrature: QL failed to converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i = m - 1;
        for (; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          f = z[i + 1];
          z[i + 1] = s * z[i] + c * f;
          z[i] = c * z[i] - s * f;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

Rule from_jacobi(std::vector<double> d, std::vector<double> e, double mu0) {
  const int n = static_cast<int>(d.size());
  std::vector<double> z(n, 0.0);
  z[0] = 1.0;
  tql_with_vector(d, e, z);
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return d[a] < d[b]; });
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    r.x[i] = d[idx[i]];
    r.w[i] = mu0 * z[idx[i]] * z[idx[i]];
  }
  return r;
}

}  // namespace

Rule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1 required");
  std::vector<double> d(n, 0.0), e(n - 1);
  for (int i = 1; i < n; ++i) e[i - 1] = i / std::sqrt(4.0 * i * i - 1.0);
  return from_jacobi(std::move(d), std::move(e), 2.0);
}

Rule gauss_laguerre_prob(double alpha, int n) {
  if (n < 1) throw std::invalid_argument("gauss_laguerre_prob: n >= 1 required");
  if (!(alpha > -1.0)) throw std::invalid_argument("gauss_laguerre_prob: alpha > -1 required");
  std::vector<double> d(n), e(n - 1);
  for (int i = 0; i < n; ++i) d[i] = 2.0 * i + alpha + 1.0;
  for (int i = 1; i < n; ++i) e[i - 1] = std::sqrt(i * (i + alpha));
  // mu0 = 1: weights normalized against Gamma(alpha+1).
  return from_jacobi(std::move(d), std::move(e), 1.0);
}

}  // namespace iftr::quad
