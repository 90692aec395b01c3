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

#ifndef INFOFAIR_COMMANDS_HPP_
#define INFOFAIR_COMMANDS_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "infofair/optimize.hpp"
#include "infofair/population_io.hpp"
#include "infofair/report_json.hpp"
#include "infofair/synth.hpp"

// JSON documents shared by the command line and the HTTP service.
namespace infofair {

// Calibration and information reports of one predictor on each scope.
// Information figures are null on a scope where the predictor is not
// calibrated; the loss is taken against p*.
Json audit_json(const PopulationFile& file, std::string_view predictor,
                std::span<const Scope> scopes);

Json curves_json(const PopulationFile& file, std::string_view predictor, Group group,
                 std::size_t points);

// The result plus the cost of fairness when the spec is a UtilityMax one.
Json optimize_json(const PopulationFile& file, std::string_view predictor,
                   const OptimizationSpec& spec, OptimizationResult* result = nullptr);

Json compare_json(const PopulationFile& file, std::string_view base, std::string_view refined,
                  std::span<const OptimizationSpec> specs);

// The file of a synth instance: its population with z and z_prime.
PopulationFile instance_file(const ConstructedInstance& instance);

// Parses "A", "B" or "all" (any case) into the scopes to report.
std::vector<Scope> parse_scopes(std::string_view text);

}  // namespace infofair

#endif  // INFOFAIR_COMMANDS_HPP_
