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

#ifndef INFOFAIR_OPTIMIZE_HPP_
#define INFOFAIR_OPTIMIZE_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "infofair/lp.hpp"
#include "infofair/policy.hpp"
#include "infofair/population.hpp"

namespace infofair {

enum class Objective { UtilityMax, DisparityMin, ImpactMax, WeightedCombo };
enum class FairnessMetric { SelectionRate, TPR, FPR };

inline constexpr std::array<Objective, 4> kObjectives = {
    Objective::UtilityMax, Objective::DisparityMin, Objective::ImpactMax,
    Objective::WeightedCombo};
inline constexpr std::array<FairnessMetric, 3> kFairnessMetrics = {
    FairnessMetric::SelectionRate, FairnessMetric::TPR, FairnessMetric::FPR};

// "utility", "disparity", "impact", "combo" and "beta", "tpr", "fpr".
std::string_view to_string(Objective o);
std::string_view to_string(FairnessMetric h);
Objective parse_objective(std::string_view text);
FairnessMetric parse_fairness_metric(std::string_view text);

// Objective is maximized except for DisparityMin.
inline constexpr bool maximizes(Objective o) { return o != Objective::DisparityMin; }

struct OptimizationSpec {
  Objective objective = Objective::UtilityMax;
  FairnessMetric fairness_metric = FairnessMetric::SelectionRate;
  double eps = 0.0;   // parity bound for UtilityMax and ImpactMax
  double t_i = -1.0;  // floor on Imp_B for UtilityMax and DisparityMin
  double t_u = -1.0;  // floor on U for DisparityMin and ImpactMax
  ImpactParams impact_params;
  double lambda_u = 1.0;
  double lambda_i = 0.0;
  double lambda_beta = 0.0;

  void validate() const;
};

std::string describe(const OptimizationSpec& spec);

// h_S for the metric; throws when the rate is undefined for the group.
double fairness_value(const GroupStats& s, FairnessMetric h);
double disparity(const PolicyStats& stats, FairnessMetric h);

// The spec's objective evaluated on a policy (with |h_A - h_B| in place of
// the auxiliary variable).
double objective_value(const OptimizationSpec& spec, const PolicyStats& stats);

// Largest amount by which the policy violates a constraint of the spec
// (zero when feasible).
double constraint_violation(const OptimizationSpec& spec, const PolicyStats& stats);

// Index of every LP variable: f(v, S) for each level of each group, then
// the auxiliary disparity variable when the objective needs one.
struct LpLayout {
  std::array<std::vector<std::size_t>, 2> f;  // per group, ascending score
  std::optional<std::size_t> t;
};

struct BuiltLp {
  LinearProgram lp;
  LpLayout layout;
};

// Throws Error("needs-two-groups"), or Error("degenerate-rate") for TPR
// parity with some r_S = 0 and FPR parity with some r_S = 1.
BuiltLp build_lp(const ScoreProfile& profile, const OptimizationSpec& spec);
BuiltLp build_lp(const Population& pop, const Predictor& z, const OptimizationSpec& spec);

// One reason an infeasible spec cannot be met.
struct InfeasibilityDiagnostic {
  std::string constraint;  // "t_u", "t_i" or "eps"
  double bound = 0.0;
  std::optional<double> best_achievable;  // subject to the other constraints
  std::string message;
};

struct OptimizationResult {
  OptimizationSpec spec;
  std::string predictor;
  LpStatus status = LpStatus::Infeasible;
  SelectionRule rule;
  std::optional<ThresholdPolicy> as_threshold;
  PolicyStats stats;            // of `rule`
  std::optional<PolicyStats> threshold_stats;
  double value = 0.0;           // OPT(z)
  std::vector<InfeasibilityDiagnostic> diagnostics;
};

OptimizationResult solve_optimization(const ScoreProfile& profile, const OptimizationSpec& spec);
OptimizationResult solve_optimization(const Population& pop, const Predictor& z,
                                      const OptimizationSpec& spec);

inline constexpr std::size_t kDefaultSweepPoints = 201;

// Independent oracle over threshold policies: scans (beta_A, beta_B) over
// both groups' breakpoints and a uniform grid, plus every vertex of the
// feasible region inside each breakpoint cell, where all quantities are
// affine. Ties go to smaller beta_B, then smaller beta_A.
OptimizationResult solve_by_sweep(const ScoreProfile& profile, const OptimizationSpec& spec,
                                  std::size_t points = kDefaultSweepPoints);
OptimizationResult solve_by_sweep(const Population& pop, const Predictor& z,
                                  const OptimizationSpec& spec,
                                  std::size_t points = kDefaultSweepPoints);

struct CostOfFairness {
  LpStatus status = LpStatus::Infeasible;
  std::optional<double> u_star;  // absent without p*
  double opt = 0.0;
  std::optional<double> cost;
  bool p_star_available = true;
};

// U* is the unconstrained threshold optimum under p*. Requires a
// UtilityMax spec.
CostOfFairness cost_of_fairness(const Population& pop, const Predictor& z,
                                const OptimizationSpec& spec, bool p_star_available = true);

inline constexpr double kImprovementTolerance = 1e-8;
inline constexpr double kWitnessTolerance = 1e-10;

// Matched-rate policy under the refinement built from the base optimum.
struct ImprovementWitness {
  std::array<double, 2> beta{};        // base rates (A, B)
  std::array<double, 2> beta_prime{};  // witness rates
  std::array<double, 2> h{};
  std::array<double, 2> h_prime{};
  double utility = 0.0;
  double utility_prime = 0.0;
  double impact_b = 0.0;
  double impact_b_prime = 0.0;
  bool holds = false;
};

struct SpecComparison {
  OptimizationSpec spec;
  LpStatus status_base = LpStatus::Infeasible;
  LpStatus status_refined = LpStatus::Infeasible;
  double opt_base = 0.0;
  double opt_refined = 0.0;
  double margin = 0.0;  // signed so that >= 0 means the refinement is no worse
  std::optional<ImprovementWitness> witness;
  bool holds = false;
  std::string failure;
};

struct ImprovementReport {
  std::string base;
  std::string refined;
  std::vector<SpecComparison> comparisons;
  bool holds = true;
};

ImprovementWitness improvement_witness(const ScoreProfile& base, const ScoreProfile& refined,
                                       const OptimizationSpec& spec, const ThresholdPolicy& f);

// Throws Error("not-refinement") unless z_prime refines z on A and on B.
ImprovementReport verify_improvement(const Population& pop, const Predictor& z,
                                     const Predictor& z_prime,
                                     std::span<const OptimizationSpec> specs);

}  // namespace infofair

#endif  // INFOFAIR_OPTIMIZE_HPP_
