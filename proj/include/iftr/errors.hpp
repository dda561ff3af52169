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

#ifndef IFTR_ERRORS_HPP
#define IFTR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace iftr {

/// An infinite series failed to settle within its term budget.
class truncation_error : public std::runtime_error {
 public:
  explicit truncation_error(const std::string& what) : std::runtime_error(what) {}
};

/// A transform/series was requested outside its region of convergence.
class divergence_error : public std::runtime_error {
 public:
  explicit divergence_error(const std::string& what) : std::runtime_error(what) {}
};

/// A quantity with a guaranteed analytic property (positivity, normalization)
/// came out violating it by more than numerical noise.
class internal_consistency_error : public std::runtime_error {
 public:
  explicit internal_consistency_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace iftr

#endif  // IFTR_ERRORS_HPP
