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

#include "infofair/synth.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <utility>

#include <fmt/format.h>

#include "infofair/detail/mean_predictor.hpp"
#include "infofair/error.hpp"
#include "infofair/random.hpp"

namespace infofair {
namespace {

Rational q(long long p, long long d = 1) { return Rational(p, d); }

Predictor exact_predictor(std::string name, const std::vector<Rational>& scores) {
  std::vector<double> doubles;
  for (const Rational& s : scores) doubles.push_back(to_double(s));
  return Predictor(std::move(name), std::move(doubles), scores);
}

int part_of(const Cell& c, Partition partition) {
  return partition == Partition::Whole ? 0 : 1 + static_cast<int>(c.group);
}

}  // namespace

ConstructedInstance tradeoff_instance() {
  struct Row {
    const char* id;
    Rational mass, p_star, z, z_prime;
  };
  const std::vector<Row> rows = {
      {"c1a", q(1, 5), q(0), q(1, 3), q(0)},        {"c1b", q(1, 20), q(0), q(1, 3), q(0)},
      {"c2", q(3, 20), q(0), q(1, 3), q(2, 3)},     {"c3", q(1, 5), q(1), q(1, 3), q(2, 3)},
      {"c4", q(1, 10), q(0), q(3, 4), q(2, 3)},     {"c5", q(3, 10), q(1), q(3, 4), q(2, 3)},
  };
  std::vector<Cell> cells;
  std::vector<Rational> z;
  std::vector<Rational> zp;
  for (const Row& r : rows) {
    cells.push_back(Cell::make_exact(r.id, r.mass, Group::A, r.p_star));
    z.push_back(r.z);
    zp.push_back(r.z_prime);
  }
  return {"tradeoff", Population(std::move(cells)), exact_predictor("z", z),
          exact_predictor("z_prime", zp), 0.7};
}

ConstructedInstance caution_calibration_instance() {
  std::vector<Cell> cells = {
      Cell::make_exact("a0", q(1, 4), Group::A, q(0)),
      Cell::make_exact("a1", q(1, 4), Group::A, q(1)),
      Cell::make_exact("b0", q(1, 4), Group::B, q(0)),
      Cell::make_exact("b1", q(1, 4), Group::B, q(1)),
  };
  return {"caution", Population(std::move(cells)),
          exact_predictor("z", {q(0), q(1), q(1, 2), q(1, 2)}),
          exact_predictor("z_prime", {q(0), q(1), q(0), q(1)}), 0.7};
}

ConstructedInstance groupwise_loss_instance() {
  struct Row {
    const char* id;
    Group group;
    Rational mass, p_star, z, z_prime;
  };
  const std::vector<Row> rows = {
      {"A_n", Group::A, q(1, 10), q(1, 5), q(1, 5), q(1, 2)},
      {"A_p", Group::A, q(1, 10), q(4, 5), q(4, 5), q(1, 2)},
      {"B_0", Group::B, q(3, 10), q(0), q(1, 5), q(0)},
      {"B_n", Group::B, q(1, 10), q(4, 5), q(1, 5), q(1, 2)},
      {"B_p", Group::B, q(1, 10), q(1, 5), q(4, 5), q(1, 2)},
      {"B_1", Group::B, q(3, 10), q(1), q(4, 5), q(1)},
  };
  std::vector<Cell> cells;
  std::vector<Rational> z;
  std::vector<Rational> zp;
  for (const Row& r : rows) {
    cells.push_back(Cell::make_exact(r.id, r.mass, r.group, r.p_star));
    z.push_back(r.z);
    zp.push_back(r.z_prime);
  }
  return {"groupwise", Population(std::move(cells)), exact_predictor("z", z),
          exact_predictor("z_prime", zp), std::nullopt};
}

ConstructedInstance constructed_instance(std::string_view name) {
  if (name == "tradeoff") return tradeoff_instance();
  if (name == "caution") return caution_calibration_instance();
  if (name == "groupwise") return groupwise_loss_instance();
  throw Error("unknown-instance",
              fmt::format("unknown instance \"{}\" (expected tradeoff, caution or groupwise)", name));
}

std::vector<std::string> constructed_instance_names() { return {"tradeoff", "caution", "groupwise"}; }

void GeneratorParams::validate() const {
  if (cells_per_group < 1) throw Error("argument", "cells_per_group must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("argument", "alpha must lie in (0,1)");
  if (!(spread >= 0.0 && spread <= 1.0)) throw Error("argument", "spread must lie in [0,1]");
  if (!(atom_share >= 0.0 && atom_share <= 1.0)) {
    throw Error("argument", "atom_share must lie in [0,1]");
  }
  if (!(mass_a >= 0.0 && mass_a <= 1.0)) throw Error("argument", "mass_a must lie in [0,1]");
}

Population random_population(const GeneratorParams& params) {
  params.validate();
  Rng rng(params.seed);
  // Group masses are multiples of 1/1000 and cell masses integer shares of
  // them, so the exact total is 1.
  const long long share_a = std::llround(params.mass_a * 1000.0);
  const std::array<Rational, 2> group_mass = {q(share_a, 1000), q(1000 - share_a, 1000)};
  const Rational alpha = q(std::llround(params.alpha * 1e9), 1000000000);
  std::vector<Cell> cells;
  for (Group g : kGroups) {
    if (group_mass[index_of(g)] == 0) continue;
    const double centre = rng.uniform(0.25, 0.75);
    std::vector<long long> weights(params.cells_per_group);
    for (auto& w : weights) w = 1 + static_cast<long long>(rng.index(20));
    const long long total = std::accumulate(weights.begin(), weights.end(), 0LL);
    for (std::size_t i = 0; i < params.cells_per_group; ++i) {
      Rational p;
      if (rng.bernoulli(params.atom_share)) {
        p = rng.bernoulli(0.5) ? 1 : 0;
      } else {
        // Grid point (k + 1/2) alpha, kept as a decimal fraction so that
        // equal p*-means compare equal exactly.
        const double raw = std::clamp(centre + params.spread * (rng.uniform() - 0.5), 0.0, 1.0);
        const double snapped = snap_to_grid(raw, params.alpha);
        if (snapped == 0.0 || snapped == 1.0) {
          p = snapped == 1.0 ? 1 : 0;
        } else {
          const long long k = std::llround(snapped / params.alpha - 0.5);
          p = alpha * q(2 * k + 1, 2);
        }
      }
      cells.push_back(Cell::make_exact(fmt::format("{}{}", to_string(g), i),
                                       group_mass[index_of(g)] * q(weights[i], total), g, p));
    }
  }
  return Population(std::move(cells));
}

Predictor random_calibrated_predictor(const Population& pop, std::size_t coarseness,
                                      std::uint64_t seed, Partition partition, std::string name,
                                      std::vector<std::string>* warnings) {
  if (coarseness < 1) throw Error("argument", "coarseness must be at least 1");
  Rng rng(seed);
  std::vector<detail::CellKey> keys(pop.size());
  for (Scope scope : scopes_of(partition)) {
    std::vector<std::size_t> cells = pop.scope_cells(scope);
    if (cells.empty()) continue;
    std::size_t k = coarseness;
    if (k > cells.size()) {
      if (warnings != nullptr) {
        warnings->push_back(fmt::format("coarseness {} exceeds the {} cells of scope {}; "
                                        "clamped",
                                        coarseness, cells.size(), to_string(scope)));
      }
      k = cells.size();
    }
    // Fisher-Yates, then the first k cells seed one class each.
    for (std::size_t i = cells.size(); i > 1; --i) std::swap(cells[i - 1], cells[rng.index(i)]);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const std::size_t label = i < k ? i : rng.index(k);
      keys[cells[i]] = {part_of(pop.cell(cells[i]), partition), 0.0, 0.0,
                        static_cast<std::int64_t>(label)};
    }
  }
  return detail::mean_predictor(pop, std::move(name), keys);
}

Predictor random_refinement(const Population& pop, const Predictor& z, std::uint64_t seed,
                            Partition partition, std::string name) {
  z.validate(pop);
  Rng rng(seed);
  std::vector<detail::CellKey> keys(pop.size());
  std::map<std::pair<int, double>, std::vector<std::size_t>> level_sets;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    level_sets[{part_of(pop.cell(i), partition), z.score(i)}].push_back(i);
  }
  for (auto& [key, cells] : level_sets) {
    const std::size_t pieces = 1 + rng.index(cells.size());
    for (std::size_t i = cells.size(); i > 1; --i) std::swap(cells[i - 1], cells[rng.index(i)]);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const std::size_t label = i < pieces ? i : rng.index(pieces);
      keys[cells[i]] = {key.first, key.second, 0.0, static_cast<std::int64_t>(label)};
    }
  }
  return detail::mean_predictor(pop, std::move(name), keys);
}

}  // namespace infofair
