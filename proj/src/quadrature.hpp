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

#ifndef IFTR_QUADRATURE_HPP
#define IFTR_QUADRATURE_HPP

#include <vector>

namespace iftr::quad {

struct Rule {
  std::vector<double> x;
  std::vector<double> w;
};

/// n-point Gauss-Legendre rule on [-1, 1] (weight function 1).
Rule gauss_legendre(int n);

/// n-point generalized Gauss-Laguerre rule, normalized as a probability
/// measure: sum(w) == 1 for the weight x^alpha e^-x / Gamma(alpha+1).
/// Valid for alpha > -1, including very large alpha.
Rule gauss_laguerre_prob(double alpha, int n);

}  // namespace iftr::quad

#endif  // IFTR_QUADRATURE_HPP
