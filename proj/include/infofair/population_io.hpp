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

#ifndef INFOFAIR_POPULATION_IO_HPP_
#define INFOFAIR_POPULATION_IO_HPP_

#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "infofair/population.hpp"

namespace infofair {

// Contents of a population file: the population plus its named predictors.
struct PopulationFile {
  Population population;
  std::vector<Predictor> predictors;
  std::optional<double> grid_alpha;

  bool has_predictor(std::string_view name) const;
  // Throws Error("unknown-predictor").
  const Predictor& predictor(std::string_view name) const;
};

// Parses the JSON population format:
//   {"cells":[{"id":..,"mass":..,"group":"A"|"B","p_star":..}, ...],
//    "predictors":{name:{cell_id:score, ...}, ...},
//    "grid_alpha":alpha}
// Masses, p_star and scores may be numbers or "p/q" fraction strings.
// Errors carry the line (syntax) or the field path (schema/invariants).
PopulationFile parse_population(std::string_view text);
PopulationFile load_population(std::istream& in);
PopulationFile load_population_file(const std::filesystem::path& path);

// Inverse of parse_population. Values that a double represents exactly are
// written as numbers with 17 significant digits, others as fractions.
std::string serialize_population(const Population& pop, std::span<const Predictor> predictors,
                                 std::optional<double> grid_alpha = std::nullopt);
std::string serialize_population(const PopulationFile& file);

}  // namespace infofair

#endif  // INFOFAIR_POPULATION_IO_HPP_
