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

#include "infofair/commands.hpp"

#include <fmt/format.h>

#include <cctype>

#include "infofair/error.hpp"
#include "infofair/information.hpp"
#include "infofair/policy.hpp"

namespace infofair {

Json audit_json(const PopulationFile& file, std::string_view predictor,
                std::span<const Scope> scopes) {
  const Population& pop = file.population;
  const Predictor& z = file.predictor(predictor);
  const Predictor ps = Predictor::p_star(pop);
  Json rows = Json::array();
  for (Scope s : scopes) {
    if (pop.scope_cells(s).empty()) continue;
    const auto calibration = check_calibration(pop, z, s);
    Json row = {{"scope", to_string(s)},
                {"distribution", to_json(score_distribution(pop, z, s))},
                {"calibration", to_json(calibration)}};
    if (calibration.is_calibrated) {
      row["information"] = to_json(information_report(pop, z, s, &ps));
      row["base_rate"] = base_rate(pop, s);
    } else {
      row["information"] = nullptr;
    }
    rows.push_back(std::move(row));
  }
  return {{"predictor", z.name()}, {"scopes", std::move(rows)}};
}

Json curves_json(const PopulationFile& file, std::string_view predictor, Group group,
                 std::size_t points) {
  const Population& pop = file.population;
  const Predictor& z = file.predictor(predictor);
  if (!pop.has_group(group)) {
    throw Error("empty-scope", fmt::format("group {} has no cells", to_string(group)));
  }
  const auto profile = score_profile(pop, z);
  const auto& g = profile.group(group);
  const auto grid = curve_grid(g, points);
  Json rows = Json::array();
  for (const auto& p : sweep_curves(g, grid)) rows.push_back(to_json(p));
  Json bp = Json::array();
  for (double b : breakpoints(g)) bp.push_back(b);
  return {{"predictor", z.name()},
          {"group", to_string(group)},
          {"breakpoints", std::move(bp)},
          {"rows", std::move(rows)}};
}

Json optimize_json(const PopulationFile& file, std::string_view predictor,
                   const OptimizationSpec& spec, OptimizationResult* result) {
  const Predictor& z = file.predictor(predictor);
  auto r = solve_optimization(file.population, z, spec);
  Json j = to_json(r);
  if (spec.objective == Objective::UtilityMax) {
    j["cost_of_fairness"] = to_json(cost_of_fairness(file.population, z, spec));
  }
  if (result) *result = std::move(r);
  return j;
}

Json compare_json(const PopulationFile& file, std::string_view base, std::string_view refined,
                  std::span<const OptimizationSpec> specs) {
  const auto report = verify_improvement(file.population, file.predictor(base),
                                         file.predictor(refined), specs);
  Json j = to_json(report);
  Json costs = Json::array();
  for (const auto& spec : specs) {
    if (spec.objective != Objective::UtilityMax) continue;
    costs.push_back(
        {{"spec", to_json(spec)},
         {"base", to_json(cost_of_fairness(file.population, file.predictor(base), spec))},
         {"refined", to_json(cost_of_fairness(file.population, file.predictor(refined), spec))}});
  }
  j["cost_of_fairness"] = std::move(costs);
  return j;
}

PopulationFile instance_file(const ConstructedInstance& instance) {
  return {instance.population, {instance.z, instance.z_prime}, std::nullopt};
}

std::vector<Scope> parse_scopes(std::string_view text) {
  std::string lower(text);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "all") return {Scope::A, Scope::B, Scope::All};
  if (lower == "a") return {Scope::A};
  if (lower == "b") return {Scope::B};
  throw Error("argument", fmt::format("unknown group \"{}\" (expected A, B or all)", text));
}

}  // namespace infofair
