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

#ifndef INFOFAIR_SAMPLES_HPP_
#define INFOFAIR_SAMPLES_HPP_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "infofair/population.hpp"

namespace infofair {

// One labelled draw (x, y): the cell drawn and its Bernoulli(p*) outcome.
struct Sample {
  std::size_t cell = 0;
  int y = 0;
};

// m i.i.d. draws: x ~ cell masses restricted to scope, y ~ Bernoulli(p*(x)).
std::vector<Sample> draw_samples(const Population& pop, std::size_t m, std::uint64_t seed,
                                 Scope scope = Scope::All);

// Newline-delimited "cell_id,y" records with y in {0,1}. Blank lines are
// skipped; errors name the line.
std::vector<Sample> parse_samples(const Population& pop, std::string_view text);
std::vector<Sample> load_samples(const Population& pop, std::istream& in);
std::string format_samples(const Population& pop, const std::vector<Sample>& samples);

}  // namespace infofair

#endif  // INFOFAIR_SAMPLES_HPP_
