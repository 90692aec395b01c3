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

#include "infofair/detail/mean_predictor.hpp"

#include <map>
#include <utility>

namespace infofair::detail {

Predictor mean_predictor(const Population& pop, std::string name,
                         const std::vector<CellKey>& keys) {
  std::map<CellKey, std::pair<Rational, Rational>> sums;  // (mass * p*, mass)
  for (std::size_t i = 0; i < pop.size(); ++i) {
    auto& [weighted, mass] = sums[keys[i]];
    weighted += pop.cell(i).exact_mass * pop.cell(i).exact_p_star;
    mass += pop.cell(i).exact_mass;
  }
  std::map<CellKey, Rational> means;
  for (auto& [key, s] : sums) means.emplace(key, s.first / s.second);

  std::vector<double> scores;
  std::vector<Rational> exact;
  scores.reserve(pop.size());
  exact.reserve(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const Rational& mean = means.at(keys[i]);
    scores.push_back(to_double(mean));
    exact.push_back(mean);
  }
  return Predictor(std::move(name), std::move(scores), std::move(exact));
}

}  // namespace infofair::detail
