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

#ifndef INFOFAIR_DETAIL_MEAN_PREDICTOR_HPP_
#define INFOFAIR_DETAIL_MEAN_PREDICTOR_HPP_

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "infofair/population.hpp"

namespace infofair::detail {

// Identifies a class of cells that receive a common score.
struct CellKey {
  int part = 0;
  double first = 0.0;
  double second = 0.0;
  std::int64_t sub = 0;

  auto operator<=>(const CellKey&) const = default;
};

// Assigns every cell the exact mass-weighted p*-mean of its key class (the
// float score is that mean correctly rounded). Calibrated on any union of
// classes by construction.
Predictor mean_predictor(const Population& pop, std::string name,
                         const std::vector<CellKey>& keys);

}  // namespace infofair::detail

#endif  // INFOFAIR_DETAIL_MEAN_PREDICTOR_HPP_
