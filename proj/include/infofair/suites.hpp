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

#ifndef INFOFAIR_SUITES_HPP_
#define INFOFAIR_SUITES_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "infofair/optimize.hpp"
#include "infofair/population.hpp"

namespace infofair {

// Seeded property suites over generated instances. Each seed is one
// instance; a suite fails when any check on any seed fails.
struct SuiteOutcome {
  std::string suite;
  std::size_t seeds = 0;
  std::size_t checks = 0;
  std::size_t failures = 0;
  // Smallest slack seen: tolerance minus error, or margin plus tolerance.
  // Negative exactly when some check failed.
  double worst_slack = 0.0;
  // For the samples suite: fraction of trials in which every crossed-cell
  // estimate landed within alpha/2, and the pass threshold.
  double success_rate = 0.0;
  double required_rate = 0.0;
  std::vector<std::string> messages;  // first few failures
  bool passed() const { return failures == 0; }
};

// "improve", "improv", "identities", "merge" or "samples".
std::vector<std::string> suite_names();
SuiteOutcome run_suite(std::string_view name, std::size_t seeds, std::uint64_t first_seed = 1);

SuiteOutcome identities_suite(std::size_t seeds, std::uint64_t first_seed = 1);
SuiteOutcome dominance_suite(std::size_t seeds, std::uint64_t first_seed = 1);
SuiteOutcome improvement_suite(std::size_t seeds, std::uint64_t first_seed = 1);
SuiteOutcome merge_suite(std::size_t seeds, std::uint64_t first_seed = 1);
// alpha = 0.1, delta = 0.05, gamma = 0.1 and m from the sample bound.
// Passes when the success rate reaches 0.93.
SuiteOutcome samples_suite(std::size_t trials, std::uint64_t first_seed = 1);

// The generated instance behind seed: a two-group population, a calibrated
// z per group and a per-group refinement of it.
struct SuiteInstance {
  Population population;
  Predictor z;
  Predictor z_prime;
};
SuiteInstance suite_instance(std::uint64_t seed);

// Every objective crossed with every fairness metric, with parameters drawn
// from seed; metrics undefined on the instance are dropped.
std::vector<OptimizationSpec> spec_matrix(const Population& pop, const Predictor& z,
                                          std::uint64_t seed);

}  // namespace infofair

#endif  // INFOFAIR_SUITES_HPP_
