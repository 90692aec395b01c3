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

#ifndef INFOFAIR_DETAIL_LEVELS_HPP_
#define INFOFAIR_DETAIL_LEVELS_HPP_

#include <cmath>
#include <cstddef>
#include <map>
#include <vector>

#include "infofair/error.hpp"
#include "infofair/population.hpp"
#include "infofair/rational.hpp"

// Level-set kernels shared by the floating-point and exact front ends.
namespace infofair::detail {

template <class Num>
struct Access;

template <>
struct Access<double> {
  static double mass(const Cell& c) { return c.mass; }
  static double p_star(const Cell& c) { return c.p_star; }
  static double score(const Predictor& z, std::size_t i) { return z.score(i); }
  static double abs(double x) { return std::fabs(x); }
};

template <>
struct Access<Rational> {
  static const Rational& mass(const Cell& c) { return c.exact_mass; }
  static const Rational& p_star(const Cell& c) { return c.exact_p_star; }
  static const Rational& score(const Predictor& z, std::size_t i) { return z.exact_score(i); }
  static Rational abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }
};

template <class Num>
struct Level {
  Num value;
  Num mass;  // unnormalized
  std::vector<std::size_t> cells;
};

inline const std::vector<std::size_t>& nonempty_scope(const Population& pop, Scope scope) {
  const auto& cells = pop.scope_cells(scope);
  if (cells.empty()) {
    throw Error("empty-scope", "scope " + std::string(to_string(scope)) + " has no cells");
  }
  return cells;
}

template <class Num>
Num scope_mass(const Population& pop, Scope scope) {
  Num total = 0;
  for (std::size_t i : nonempty_scope(pop, scope)) total += Access<Num>::mass(pop.cell(i));
  return total;
}

// Level sets of z within scope, ascending by score.
template <class Num>
std::vector<Level<Num>> levels(const Population& pop, const Predictor& z, Scope scope) {
  std::map<Num, Level<Num>> by_value;
  for (std::size_t i : nonempty_scope(pop, scope)) {
    const Num& v = Access<Num>::score(z, i);
    auto [it, inserted] = by_value.try_emplace(v, Level<Num>{v, Num(0), {}});
    it->second.mass += Access<Num>::mass(pop.cell(i));
    it->second.cells.push_back(i);
  }
  std::vector<Level<Num>> out;
  out.reserve(by_value.size());
  for (auto& [v, level] : by_value) out.push_back(std::move(level));
  return out;
}

template <class Num, class Value>
Num weighted_mean(const Population& pop, const std::vector<std::size_t>& cells, Value value) {
  Num num = 0;
  Num den = 0;
  for (std::size_t i : cells) {
    const Num& m = Access<Num>::mass(pop.cell(i));
    num += m * value(i);
    den += m;
  }
  return num / den;
}

template <class Num>
Num mean_p_star(const Population& pop, const std::vector<std::size_t>& cells) {
  return weighted_mean<Num>(pop, cells,
                            [&](std::size_t i) { return Access<Num>::p_star(pop.cell(i)); });
}

template <class Num>
Num mean_score(const Population& pop, const Predictor& z, const std::vector<std::size_t>& cells) {
  return weighted_mean<Num>(pop, cells, [&](std::size_t i) { return Access<Num>::score(z, i); });
}

template <class Num>
struct LevelDeviation {
  Num value;
  Num mass;  // conditional on the scope
  Num mean;
  Num deviation;
};

// For each level set of z in scope: the mass-weighted mean of value(i) over
// the set and its distance from the level's score.
template <class Num, class Value>
std::vector<LevelDeviation<Num>> level_deviations(const Population& pop, const Predictor& z,
                                                  Scope scope, Value value) {
  const Num total = scope_mass<Num>(pop, scope);
  std::vector<LevelDeviation<Num>> out;
  for (const auto& level : levels<Num>(pop, z, scope)) {
    // Averaging the offsets from the level's score keeps a level whose
    // values all equal the score at deviation exactly zero.
    const Num shift = weighted_mean<Num>(
        pop, level.cells, [&](std::size_t i) { return Num(value(i) - level.value); });
    out.push_back({level.value, Num(level.mass / total), Num(level.value + shift),
                   Access<Num>::abs(shift)});
  }
  return out;
}

template <class Num>
std::vector<LevelDeviation<Num>> calibration_deviations(const Population& pop, const Predictor& z,
                                                        Scope scope) {
  return level_deviations<Num>(pop, z, scope,
                               [&](std::size_t i) { return Access<Num>::p_star(pop.cell(i)); });
}

template <class Num>
std::vector<LevelDeviation<Num>> refinement_deviations(const Population& pop, const Predictor& z,
                                                       const Predictor& refined, Scope scope) {
  return level_deviations<Num>(pop, z, scope,
                               [&](std::size_t i) { return Access<Num>::score(refined, i); });
}

template <class Num>
Num max_deviation(const std::vector<LevelDeviation<Num>>& levels) {
  Num worst = 0;
  for (const auto& l : levels) {
    if (l.deviation > worst) worst = l.deviation;
  }
  return worst;
}

template <class Num>
Num information_content(const Population& pop, const Predictor& z, Scope scope) {
  const Num total = scope_mass<Num>(pop, scope);
  Num spread = 0;
  for (const auto& level : levels<Num>(pop, z, scope)) {
    spread += level.mass * level.value * (Num(1) - level.value);
  }
  return Num(1) - Num(4) * spread / total;
}

template <class Num>
Num squared_gap(const Population& pop, const Predictor& reference, const Predictor& z,
                Scope scope) {
  Num total = 0;
  Num sum = 0;
  for (std::size_t i : nonempty_scope(pop, scope)) {
    const Num& m = Access<Num>::mass(pop.cell(i));
    const Num gap = Access<Num>::score(reference, i) - Access<Num>::score(z, i);
    sum += m * gap * gap;
    total += m;
  }
  return Num(4) * sum / total;
}

template <class Num>
Num refinement_distance(const Population& pop, const Predictor& z, const Predictor& q,
                        Scope scope) {
  Num distance = 0;
  for (const auto& l : refinement_deviations<Num>(pop, z, q, scope)) {
    distance += l.mass * l.deviation;
  }
  return distance;
}

}  // namespace infofair::detail

#endif  // INFOFAIR_DETAIL_LEVELS_HPP_
