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

#ifndef INFOFAIR_POLICY_HPP_
#define INFOFAIR_POLICY_HPP_

#include <array>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "infofair/information.hpp"
#include "infofair/population.hpp"

namespace infofair {

// u(p) = p - tau_u for the decision maker, l(p) = p - tau_l for the group.
struct ImpactParams {
  double tau_u = 0.5;
  double tau_l = 0.5;
  bool risk_averse = false;  // when set, tau_u > tau_l is required

  void validate() const;
};

// Selects v > tau with probability 1 and v == tau with probability p.
struct ThresholdRule {
  double tau = 1.0;
  double p = 0.0;

  double select(double v) const { return v > tau ? 1.0 : (v == tau ? p : 0.0); }
};

struct ThresholdPolicy {
  std::array<ThresholdRule, 2> rules;

  const ThresholdRule& operator[](Group g) const { return rules[index_of(g)]; }
  ThresholdRule& operator[](Group g) { return rules[index_of(g)]; }
};

// A table f(v, S) of selection probabilities keyed by score.
struct SelectionRule {
  std::array<std::map<double, double>, 2> table;

  void set(Group g, double v, double f) { table[index_of(g)][v] = f; }
  std::optional<double> get(Group g, double v) const;
};

// The score distribution of a calibrated predictor on one group. Because z
// is calibrated, the p*-mean on each level equals its score, so every
// policy statistic is a function of these levels alone.
struct GroupProfile {
  Group group = Group::A;
  double weight = 0.0;     // Pr[x in S]
  double base_rate = 0.0;  // r_S
  std::vector<ScoreLevel> levels;  // ascending, conditional masses
};

struct ScoreProfile {
  std::string predictor;
  std::array<std::optional<GroupProfile>, 2> groups;

  const GroupProfile& group(Group g) const;  // throws "empty-scope"
  bool has(Group g) const { return groups[index_of(g)].has_value(); }
};

// Requires z calibrated on every group present.
ScoreProfile score_profile(const Population& pop, const Predictor& z,
                           double tolerance = kDefaultCalibrationTolerance);

// The table of `policy` on every score each present group attains.
SelectionRule to_selection_rule(const ScoreProfile& profile, const ThresholdPolicy& policy);

struct GroupStats {
  Group group = Group::A;
  double beta = 0.0;
  std::optional<double> tpr;  // absent when r_S = 0
  std::optional<double> fpr;  // absent when r_S = 1
  std::optional<double> ppv;  // absent when beta_S = 0
  double impact = 0.0;
  double base_rate = 0.0;
  double weight = 0.0;
};

struct PolicyStats {
  std::array<std::optional<GroupStats>, 2> groups;
  double utility = 0.0;

  const GroupStats& group(Group g) const;
};

// Sums over the levels of one group for selection probabilities f (one per
// level): selected mass, selected positive mass, selected negative mass.
struct RateAtoms {
  double beta = 0.0;
  double positives = 0.0;  // sum m f v
  double negatives = 0.0;  // sum m f (1 - v)
};

RateAtoms rate_atoms(const GroupProfile& g, std::span<const double> f);
GroupStats group_stats(const GroupProfile& g, const RateAtoms& atoms, const ImpactParams& params);

PolicyStats evaluate(const ScoreProfile& profile, const SelectionRule& rule,
                     const ImpactParams& params);
PolicyStats evaluate(const ScoreProfile& profile, const ThresholdPolicy& policy,
                     const ImpactParams& params);
// Throw Error("rule-incomplete") when the rule lacks some (v, S).
PolicyStats evaluate(const Population& pop, const Predictor& z, const SelectionRule& rule,
                     const ImpactParams& params,
                     double tolerance = kDefaultCalibrationTolerance);
PolicyStats evaluate(const Population& pop, const Predictor& z, const ThresholdPolicy& policy,
                     const ImpactParams& params,
                     double tolerance = kDefaultCalibrationTolerance);

// The threshold rule with selection rate exactly beta on the group.
ThresholdRule threshold_for_rate(const GroupProfile& g, double beta);
ThresholdRule threshold_for_rate(const Population& pop, const Predictor& z, Group g, double beta);

// Selection probabilities per level (ascending) of the rate-beta threshold.
std::vector<double> selection_at_rate(const GroupProfile& g, double beta);
RateAtoms atoms_at_rate(const GroupProfile& g, double beta);

// Smallest rate whose threshold policy selects positive mass `positives`
// (sum m f v), and largest rate whose threshold policy selects negative mass
// `negatives` (sum m f (1 - v)). These match a TPR or an FPR.
double rate_for_positives(const GroupProfile& g, double positives);
double rate_for_negatives(const GroupProfile& g, double negatives);

// Cumulative masses of the levels taken from the top score down: the betas
// where the rate curves change slope. Starts at 0 and ends at 1.
std::vector<double> breakpoints(const GroupProfile& g);

// n evenly spaced points on [0,1], n >= 2.
std::vector<double> uniform_grid(std::size_t n);

// Sorted union of the given point sets with near-duplicates removed.
std::vector<double> merge_grids(std::initializer_list<std::span<const double>> grids);

struct CurvePoint {
  double beta = 0.0;
  std::optional<double> tpr;
  std::optional<double> fpr;
  std::optional<double> ppv;
};

std::vector<CurvePoint> sweep_curves(const GroupProfile& g, std::span<const double> betas);
std::vector<CurvePoint> sweep_curves(const Population& pop, const Predictor& z, Group g,
                                     std::span<const double> betas,
                                     double tolerance = kDefaultCalibrationTolerance);

inline constexpr std::size_t kDefaultCurvePoints = 1001;

// Uniform grid of `points` plus the group's breakpoints.
std::vector<double> curve_grid(const GroupProfile& g, std::size_t points = kDefaultCurvePoints);

inline constexpr double kDominanceTolerance = 1e-10;

struct GroupDominance {
  Group group = Group::A;
  std::size_t points = 0;
  // Smallest of TPR' - TPR, FPR - FPR', PPV' - PPV over the grid.
  double worst_tpr = 0.0;
  double worst_fpr = 0.0;
  double worst_ppv = 0.0;
  std::size_t violations = 0;
};

struct DominanceReport {
  std::string base;
  std::string refined;
  std::vector<GroupDominance> groups;
  bool holds = true;
};

// Compares the rate curves of z and its refinement z_prime on each group at
// a uniform grid plus every breakpoint of both. Throws
// Error("not-refinement") unless z_prime refines z on each group.
DominanceReport dominance_check(const Population& pop, const Predictor& z,
                                const Predictor& z_prime, std::span<const Group> groups,
                                std::size_t points = kDefaultCurvePoints,
                                double tolerance = kDefaultCalibrationTolerance);

}  // namespace infofair

#endif  // INFOFAIR_POLICY_HPP_
