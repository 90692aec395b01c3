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

#ifndef INFOFAIR_SYNTH_HPP_
#define INFOFAIR_SYNTH_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "infofair/population.hpp"

namespace infofair {

struct ConstructedInstance {
  std::string name;
  Population population;
  Predictor z;
  Predictor z_prime;
  std::optional<double> threshold;
};

// One group, p* in {0,1}, E[p*] = 1/2. z has Pr[z = 1/3] = 3/5 and
// Pr[z = 3/4] = 2/5; z' has Pr[z' = 0] = 1/4 and Pr[z' = 2/3] = 3/4. Cell c1
// is split in two so that a binary feature can isolate mass 1/5.
ConstructedInstance tradeoff_instance();

// Group A scored perfectly, group B scored 1/2 throughout (half of B is
// qualified). z_prime replaces B's scores by p*. Threshold 0.7.
ConstructedInstance caution_calibration_instance();

// z_prime refines z on the whole population yet carries no information
// about group A. The masses are a hand-derived reconstruction.
ConstructedInstance groupwise_loss_instance();

// Look up by "tradeoff", "caution" or "groupwise".
ConstructedInstance constructed_instance(std::string_view name);
std::vector<std::string> constructed_instance_names();

struct GeneratorParams {
  std::uint64_t seed = 1;
  std::size_t cells_per_group = 6;
  double alpha = 0.1;          // p* grid
  double spread = 0.8;         // width of the continuous part of p*
  double atom_share = 0.25;    // chance a cell has p* in {0,1}
  double mass_a = 0.5;         // Pr[x in A]; 1 and 0 give one group

  void validate() const;
};

// Cell masses are exact fractions summing to 1. Continuous p* values are
// snapped to the alpha grid around a per-group centre.
Population random_population(const GeneratorParams& params);

// Random partition of each scope into `coarseness` classes, scored by
// their p*-means. Coarseness above a scope's cell count is clamped and a
// warning appended.
Predictor random_calibrated_predictor(const Population& pop, std::size_t coarseness,
                                      std::uint64_t seed,
                                      Partition partition = Partition::PerGroup,
                                      std::string name = "z",
                                      std::vector<std::string>* warnings = nullptr);

// Splits each level set of z (within each scope) at random and scores the
// pieces by their p*-means.
Predictor random_refinement(const Population& pop, const Predictor& z, std::uint64_t seed,
                            Partition partition = Partition::PerGroup,
                            std::string name = "z_prime");

}  // namespace infofair

#endif  // INFOFAIR_SYNTH_HPP_
