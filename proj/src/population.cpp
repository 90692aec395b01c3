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

#include "infofair/population.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "infofair/detail/levels.hpp"
#include "infofair/error.hpp"

namespace infofair {

std::string_view to_string(Group g) { return g == Group::A ? "A" : "B"; }

std::string_view to_string(Scope s) {
  switch (s) {
    case Scope::A:
      return "A";
    case Scope::B:
      return "B";
    case Scope::All:
      break;
  }
  return "all";
}

Group parse_group(std::string_view text) {
  if (text == "A") return Group::A;
  if (text == "B") return Group::B;
  throw Error("parse", fmt::format("unknown group \"{}\" (expected A or B)", text));
}

Scope parse_scope(std::string_view text) {
  if (text == "A") return Scope::A;
  if (text == "B") return Scope::B;
  if (text == "all") return Scope::All;
  throw Error("parse", fmt::format("unknown scope \"{}\" (expected A, B or all)", text));
}

std::vector<Scope> scopes_of(Partition partition) {
  if (partition == Partition::Whole) return {Scope::All};
  return {Scope::A, Scope::B};
}

Cell Cell::make(std::string id, double mass, Group group, double p_star) {
  return Cell{std::move(id), mass, group, p_star, exact_from_double(mass),
              exact_from_double(p_star)};
}

Cell Cell::make_exact(std::string id, const Rational& mass, Group group, const Rational& p_star) {
  return Cell{std::move(id), to_double(mass), group, to_double(p_star), mass, p_star};
}

Population::Population(std::vector<Cell> cells) : cells_(std::move(cells)) {
  if (cells_.empty()) throw Error("empty-population", "population has no cells");
  double total = 0.0;
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    const Cell& c = cells_[i];
    if (c.id.empty()) throw Error("schema", fmt::format("cell #{} has an empty id", i));
    if (!(c.mass > 0.0 && c.mass <= 1.0)) {
      throw Error("mass-range", fmt::format("cell \"{}\": mass {} outside (0,1]", c.id, c.mass));
    }
    if (!(c.p_star >= 0.0 && c.p_star <= 1.0)) {
      throw Error("p-star-range",
                  fmt::format("cell \"{}\": p_star {} outside [0,1]", c.id, c.p_star));
    }
    if (!by_id_.emplace(c.id, i).second) {
      throw Error("duplicate-id", fmt::format("duplicate cell id \"{}\"", c.id));
    }
    scope_index_[static_cast<std::size_t>(scope_of(c.group))].push_back(i);
    scope_index_[static_cast<std::size_t>(Scope::All)].push_back(i);
    scope_mass_[static_cast<std::size_t>(scope_of(c.group))] += c.mass;
    total += c.mass;
  }
  scope_mass_[static_cast<std::size_t>(Scope::All)] = total;
  if (std::fabs(total - 1.0) > kMassSumTolerance) {
    throw Error("mass-sum", fmt::format("cell masses sum to {:.17g}, expected 1", total));
  }
}

std::optional<std::size_t> Population::find(std::string_view id) const {
  const auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

std::size_t Population::index_of_id(std::string_view id) const {
  const auto found = find(id);
  if (!found) throw Error("unknown-cell", fmt::format("unknown cell id \"{}\"", id));
  return *found;
}

const std::vector<std::size_t>& Population::scope_cells(Scope scope) const {
  return scope_index_[static_cast<std::size_t>(scope)];
}

double Population::mass(Scope scope) const { return scope_mass_[static_cast<std::size_t>(scope)]; }

Rational Population::exact_mass(Scope scope) const {
  Rational total = 0;
  for (std::size_t i : scope_cells(scope)) total += cells_[i].exact_mass;
  return total;
}

void Population::require_two_groups() const {
  if (!has_both_groups()) {
    throw Error("needs-two-groups", "operation needs cells in both groups A and B");
  }
}

Predictor::Predictor(std::string name, std::vector<double> scores,
                     std::vector<Rational> exact_scores, std::optional<double> grid)
    : name_(std::move(name)),
      scores_(std::move(scores)),
      exact_(std::move(exact_scores)),
      grid_(grid) {
  if (scores_.size() != exact_.size()) {
    throw Error("schema", "predictor \"" + name_ + "\": exact and float scores differ in size");
  }
}

Predictor Predictor::from_scores(std::string name, std::vector<double> scores,
                                 std::optional<double> grid) {
  std::vector<Rational> exact;
  exact.reserve(scores.size());
  for (double s : scores) exact.push_back(exact_from_double(s));
  return Predictor(std::move(name), std::move(scores), std::move(exact), grid);
}

Predictor Predictor::p_star(const Population& pop, std::string name) {
  std::vector<double> scores;
  std::vector<Rational> exact;
  for (const Cell& c : pop.cells()) {
    scores.push_back(c.p_star);
    exact.push_back(c.exact_p_star);
  }
  return Predictor(std::move(name), std::move(scores), std::move(exact));
}

Predictor Predictor::renamed(std::string name) const {
  Predictor copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

void Predictor::validate(const Population& pop) const {
  if (scores_.size() != pop.size()) {
    throw Error("schema", fmt::format("predictor \"{}\" scores {} cells, population has {}", name_,
                                      scores_.size(), pop.size()));
  }
  if (grid_ && !(*grid_ > 0.0 && *grid_ < 1.0)) {
    throw Error("grid", fmt::format("predictor \"{}\": grid alpha {} outside (0,1)", name_, *grid_));
  }
  for (std::size_t i = 0; i < scores_.size(); ++i) {
    const double s = scores_[i];
    if (!(s >= 0.0 && s <= 1.0)) {
      throw Error("score-range", fmt::format("predictor \"{}\", cell \"{}\": score {} outside [0,1]",
                                             name_, pop.cell(i).id, s));
    }
    if (grid_ && !on_grid(s, *grid_)) {
      throw Error("grid", fmt::format("predictor \"{}\", cell \"{}\": score {} is off the {} grid",
                                      name_, pop.cell(i).id, s, *grid_));
    }
  }
}

std::vector<double> Predictor::support() const {
  std::set<double> values(scores_.begin(), scores_.end());
  return {values.begin(), values.end()};
}

std::vector<double> score_grid(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("grid", "grid alpha must lie in (0,1)");
  std::vector<double> points = {0.0};
  for (int k = 0;; ++k) {
    const double v = (k + 0.5) * alpha;
    if (v >= 1.0 - 1e-12) break;
    points.push_back(v);
  }
  points.push_back(1.0);
  return points;
}

double snap_to_grid(double value, double alpha) {
  if (value == 0.0 || value == 1.0) return value;
  const auto points = score_grid(alpha);
  double best = points[1];
  for (std::size_t k = 1; k + 1 < points.size(); ++k) {
    if (std::fabs(points[k] - value) < std::fabs(best - value)) best = points[k];
  }
  return best;
}

bool on_grid(double value, double alpha, double tolerance) {
  const auto points = score_grid(alpha);
  return std::any_of(points.begin(), points.end(),
                     [&](double p) { return std::fabs(p - value) <= tolerance; });
}

ScoreDistribution score_distribution(const Population& pop, const Predictor& z, Scope scope) {
  const double total = detail::scope_mass<double>(pop, scope);
  ScoreDistribution out{z.name(), scope, {}};
  for (const auto& level : detail::levels<double>(pop, z, scope)) {
    out.entries.push_back({level.value, level.mass / total});
  }
  return out;
}

double base_rate(const Population& pop, Scope scope) {
  return detail::mean_p_star<double>(pop, detail::nonempty_scope(pop, scope));
}

namespace exact {

std::vector<ExactScoreLevel> score_distribution(const Population& pop, const Predictor& z,
                                                Scope scope) {
  const Rational total = detail::scope_mass<Rational>(pop, scope);
  std::vector<ExactScoreLevel> out;
  for (const auto& level : detail::levels<Rational>(pop, z, scope)) {
    out.push_back({level.value, level.mass / total});
  }
  return out;
}

Rational base_rate(const Population& pop, Scope scope) {
  return detail::mean_p_star<Rational>(pop, detail::nonempty_scope(pop, scope));
}

}  // namespace exact
}  // namespace infofair
