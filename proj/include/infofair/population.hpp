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

#ifndef INFOFAIR_POPULATION_HPP_
#define INFOFAIR_POPULATION_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "infofair/rational.hpp"

namespace infofair {

enum class Group : std::uint8_t { A = 0, B = 1 };

inline constexpr std::array<Group, 2> kGroups = {Group::A, Group::B};

// A subpopulation an aggregate is taken over: one group or everyone.
enum class Scope : std::uint8_t { A, B, All };

inline constexpr Scope scope_of(Group g) { return g == Group::A ? Scope::A : Scope::B; }
inline constexpr std::size_t index_of(Group g) { return static_cast<std::size_t>(g); }
inline constexpr bool in_scope(Group g, Scope s) {
  return s == Scope::All || scope_of(g) == s;
}

std::string_view to_string(Group g);
std::string_view to_string(Scope s);
Group parse_group(std::string_view text);
Scope parse_scope(std::string_view text);

// Whether an operation is applied to the whole population or to each group
// separately.
enum class Partition : std::uint8_t { Whole, PerGroup };

std::vector<Scope> scopes_of(Partition partition);

// One atom of the population. The exact_* fields carry the value the cell
// was declared with (a fraction string, or the binary value of a number).
struct Cell {
  std::string id;
  double mass = 0.0;
  Group group = Group::A;
  double p_star = 0.0;
  Rational exact_mass;
  Rational exact_p_star;

  static Cell make(std::string id, double mass, Group group, double p_star);
  static Cell make_exact(std::string id, const Rational& mass, Group group,
                         const Rational& p_star);
};

inline constexpr double kMassSumTolerance = 1e-12;

// A finite weighted set of cells. Immutable after construction.
class Population {
 public:
  // Validates every invariant; throws Error naming the offending cell.
  explicit Population(std::vector<Cell> cells);

  std::span<const Cell> cells() const { return cells_; }
  const Cell& cell(std::size_t i) const { return cells_[i]; }
  std::size_t size() const { return cells_.size(); }

  std::optional<std::size_t> find(std::string_view id) const;
  std::size_t index_of_id(std::string_view id) const;  // throws "unknown-cell"

  // Cell indices of a scope, in declaration order.
  const std::vector<std::size_t>& scope_cells(Scope scope) const;

  double mass(Scope scope) const;
  Rational exact_mass(Scope scope) const;
  bool has_group(Group g) const { return !scope_cells(scope_of(g)).empty(); }
  bool has_both_groups() const { return has_group(Group::A) && has_group(Group::B); }

  // Throws Error("needs-two-groups") unless both groups are present.
  void require_two_groups() const;

 private:
  std::vector<Cell> cells_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::array<std::vector<std::size_t>, 3> scope_index_;
  std::array<double, 3> scope_mass_{};
};

// A score for every cell of one population, stored in cell order.
class Predictor {
 public:
  Predictor() = default;
  Predictor(std::string name, std::vector<double> scores, std::vector<Rational> exact_scores,
            std::optional<double> grid = std::nullopt);

  // Exact scores are taken to be the binary values of `scores`.
  static Predictor from_scores(std::string name, std::vector<double> scores,
                               std::optional<double> grid = std::nullopt);

  // The ground truth p* viewed as a predictor.
  static Predictor p_star(const Population& pop, std::string name = "p_star");

  const std::string& name() const { return name_; }
  std::size_t size() const { return scores_.size(); }
  double score(std::size_t i) const { return scores_[i]; }
  const Rational& exact_score(std::size_t i) const { return exact_[i]; }
  std::span<const double> scores() const { return scores_; }
  const std::optional<double>& grid() const { return grid_; }

  Predictor renamed(std::string name) const;

  // Checks totality against `pop`, the [0,1] range, and grid membership.
  void validate(const Population& pop) const;

  // Distinct score values attained anywhere, ascending.
  std::vector<double> support() const;

 private:
  std::string name_;
  std::vector<double> scores_;
  std::vector<Rational> exact_;
  std::optional<double> grid_;
};

// Grid points {alpha/2, 3alpha/2, ...} strictly inside (0,1), plus 0 and 1.
std::vector<double> score_grid(double alpha);

// Nearest point of score_grid(alpha); 0 and 1 are kept as they are.
double snap_to_grid(double value, double alpha);

bool on_grid(double value, double alpha, double tolerance = 1e-9);

struct ScoreLevel {
  double value = 0.0;
  double mass = 0.0;  // conditional on the scope
};

struct ScoreDistribution {
  std::string predictor;
  Scope scope = Scope::All;
  std::vector<ScoreLevel> entries;  // ascending by value
};

struct ExactScoreLevel {
  Rational value;
  Rational mass;
};

// Throws Error("empty-scope") when the scope holds no cells.
ScoreDistribution score_distribution(const Population& pop, const Predictor& z, Scope scope);
double base_rate(const Population& pop, Scope scope);

namespace exact {
std::vector<ExactScoreLevel> score_distribution(const Population& pop, const Predictor& z,
                                                Scope scope);
Rational base_rate(const Population& pop, Scope scope);
}  // namespace exact

}  // namespace infofair

#endif  // INFOFAIR_POPULATION_HPP_
