// Copyright 2026 The causal-fields Authors
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

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace cft {

struct Violation {
  nlohmann::json witness;
  double deviation = 0.0;
};

/// Outcome of a law check: how many samples were examined and which of
/// them failed. Validators return reports instead of throwing so that the
/// whole violation list is available.
struct Report {
  std::string law;
  std::size_t samples = 0;
  std::vector<Violation> violations;
  /// Largest deviation seen over all samples, failing or not.
  double max_deviation = 0.0;

  explicit Report(std::string name = {}) : law(std::move(name)) {}

  bool passed() const { return violations.empty(); }

  /// Records one numerically compared sample.
  void check(double deviation, double tol, const nlohmann::json& witness) {
    ++samples;
    max_deviation = std::max(max_deviation, deviation);
    if (!(deviation <= tol)) violations.push_back({witness, deviation});
  }

  /// Records one sample of a yes/no condition.
  void require(bool ok, const nlohmann::json& witness) {
    ++samples;
    if (!ok) {
      max_deviation = std::max(max_deviation, 1.0);
      violations.push_back({witness, 1.0});
    }
  }

  void merge(const Report& other) {
    samples += other.samples;
    max_deviation = std::max(max_deviation, other.max_deviation);
    violations.insert(violations.end(), other.violations.begin(), other.violations.end());
  }

  nlohmann::json to_json() const {
    nlohmann::json v = nlohmann::json::array();
    for (const auto& x : violations) v.push_back({{"witness", x.witness}, {"deviation", x.deviation}});
    return {{"law", law}, {"samples", samples}, {"violations", v}};
  }
};

}  // namespace cft
