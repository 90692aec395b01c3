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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "infofair/error.hpp"
#include "infofair/optimize.hpp"
#include "infofair/random.hpp"
#include "infofair/refinement.hpp"
#include "infofair/synth.hpp"
#include "support/lp_oracle.hpp"
#include "support/oracles.hpp"

namespace infofair {
namespace {

Population random_pop(std::uint64_t seed, std::size_t cells = 6) {
  GeneratorParams params;
  params.seed = seed;
  params.cells_per_group = cells;
  params.atom_share = 0.15;
  return random_population(params);
}

OptimizationSpec random_spec(Rng& rng, Objective o, FairnessMetric h) {
  OptimizationSpec spec;
  spec.objective = o;
  spec.fairness_metric = h;
  spec.impact_params.tau_u = rng.uniform(0.2, 0.8);
  spec.impact_params.tau_l = rng.uniform(0.2, 0.8);
  spec.eps = rng.uniform() < 0.3 ? 0.0 : rng.uniform(0.0, 0.3);
  spec.t_i = rng.uniform() < 0.5 ? -1.0 : rng.uniform(-0.05, 0.05);
  spec.t_u = rng.uniform() < 0.5 ? -1.0 : rng.uniform(-0.05, 0.05);
  spec.lambda_u = rng.uniform();
  spec.lambda_i = rng.uniform();
  spec.lambda_beta = rng.uniform();
  return spec;
}

bool degenerate(const ScoreProfile& p, FairnessMetric h) {
  for (Group g : kGroups) {
    const double r = p.group(g).base_rate;
    if (h == FairnessMetric::TPR && r <= 0.0) return true;
    if (h == FairnessMetric::FPR && r >= 1.0) return true;
  }
  return false;
}

double unconstrained_utility(const Population& pop, const Predictor& z, double tau_u) {
  double u = 0.0;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    u += pop.cell(i).mass * std::max(z.score(i) - tau_u, 0.0);
  }
  return u;
}

TEST(BuildLp, NeedsTwoGroups) {
  const auto f = tradeoff_instance();
  try {
    build_lp(f.population, f.z, OptimizationSpec{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "needs-two-groups");
  }
}

TEST(BuildLp, TwoScoresPerGroupStructure) {
  const auto c = caution_calibration_instance();
  const Predictor two = Predictor::from_scores("two", {0.0, 1.0, 0.0, 1.0});
  OptimizationSpec spec;
  spec.eps = 0.0;
  spec.t_i = 0.0;
  const auto built = build_lp(c.population, two, spec);
  EXPECT_EQ(built.lp.variables.size(), 4u);
  EXPECT_FALSE(built.layout.t.has_value());
  std::size_t parity = 0;
  std::size_t impact = 0;
  for (const auto& con : built.lp.constraints) {
    if (con.name.find("eps") != std::string::npos) ++parity;
    if (con.name.find("Imp_B") != std::string::npos) ++impact;
  }
  EXPECT_EQ(parity, 2u);
  EXPECT_EQ(impact, 1u);
  for (const auto& v : built.lp.variables) {
    EXPECT_EQ(v.lo, 0.0);
    EXPECT_EQ(v.hi, 1.0);
  }
}

TEST(BuildLp, DegenerateRates) {
  const Population pop({Cell::make("a0", 0.5, Group::A, 0.0), Cell::make("b", 0.5, Group::B, 0.4)});
  const Predictor z = Predictor::p_star(pop);
  OptimizationSpec spec;
  spec.fairness_metric = FairnessMetric::TPR;
  EXPECT_THROW(build_lp(pop, z, spec), Error);
  spec.fairness_metric = FairnessMetric::FPR;
  EXPECT_NO_THROW(build_lp(pop, z, spec));
  spec.fairness_metric = FairnessMetric::SelectionRate;
  EXPECT_NO_THROW(build_lp(pop, z, spec));
}

TEST(Solve, VacuousConstraintsGiveSignRule) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Population pop = random_pop(seed);
    const Predictor z = random_calibrated_predictor(pop, 4, seed);
    OptimizationSpec spec;
    spec.eps = 1.0;
    spec.t_i = -1.0;
    spec.impact_params.tau_u = 0.45;
    const auto r = solve_optimization(pop, z, spec);
    ASSERT_EQ(r.status, LpStatus::Optimal);
    EXPECT_NEAR(r.value, unconstrained_utility(pop, z, 0.45), 1e-10);
    for (Group g : kGroups) {
      for (const auto& [v, f] : r.rule.table[index_of(g)]) {
        if (v > 0.45) EXPECT_NEAR(f, 1.0, 1e-9);
        if (v < 0.45) EXPECT_NEAR(f, 0.0, 1e-9);
      }
    }
    const auto s = solve_by_sweep(pop, z, spec);
    EXPECT_NEAR(s.value, r.value, 1e-7);
  }
}

TEST(Solve, CautionInstanceParity) {
  const auto c = caution_calibration_instance();
  OptimizationSpec spec;
  spec.eps = 0.0;
  spec.t_i = -1.0;
  spec.impact_params.tau_u = 0.7;
  const auto base = solve_optimization(c.population, c.z, spec);
  const auto refined = solve_optimization(c.population, c.z_prime, spec);
  ASSERT_EQ(base.status, LpStatus::Optimal);
  EXPECT_NEAR(base.value, 0.025, 1e-12);
  EXPECT_NEAR(refined.value, 0.15, 1e-12);
  EXPECT_NEAR(base.stats.group(Group::A).beta, base.stats.group(Group::B).beta, 1e-12);
  EXPECT_NEAR(solve_by_sweep(c.population, c.z, spec).value, 0.025, 1e-12);
  EXPECT_NEAR(solve_by_sweep(c.population, c.z_prime, spec).value, 0.15, 1e-12);
}

TEST(Solve, ComboReducesToUtility) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Population pop = random_pop(seed);
    const Predictor z = random_calibrated_predictor(pop, 3, seed);
    OptimizationSpec combo;
    combo.objective = Objective::WeightedCombo;
    combo.lambda_u = 1.0;
    combo.lambda_i = 0.0;
    combo.lambda_beta = 0.0;
    OptimizationSpec opt1;
    opt1.eps = 1.0;
    opt1.t_i = -1.0;
    EXPECT_NEAR(solve_optimization(pop, z, combo).value, solve_optimization(pop, z, opt1).value,
                1e-10);
  }
}

TEST(Solve, UnreachableUtilityFloor) {
  const auto c = caution_calibration_instance();
  OptimizationSpec spec;
  spec.objective = Objective::DisparityMin;
  spec.t_u = 0.9;
  const auto r = solve_optimization(c.population, c.z, spec);
  EXPECT_EQ(r.status, LpStatus::Infeasible);
  ASSERT_FALSE(r.diagnostics.empty());
  EXPECT_EQ(r.diagnostics[0].constraint, "t_u");
  ASSERT_TRUE(r.diagnostics[0].best_achievable.has_value());
  EXPECT_NEAR(*r.diagnostics[0].best_achievable, 0.125, 1e-10);
  EXPECT_EQ(solve_by_sweep(c.population, c.z, spec).status, LpStatus::Infeasible);
}

TEST(Solve, ZeroPolicyIsFeasibleForParity) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Population pop = random_pop(seed);
    const Predictor z = random_calibrated_predictor(pop, 3, seed);
    for (FairnessMetric h : kFairnessMetrics) {
      OptimizationSpec spec;
      spec.fairness_metric = h;
      spec.eps = 0.0;
      spec.t_i = 0.0;
      const auto profile = score_profile(pop, z);
      if (degenerate(profile, h)) continue;
      const auto r = solve_optimization(profile, spec);
      EXPECT_EQ(r.status, LpStatus::Optimal);
      EXPECT_GE(r.value, -1e-12);
    }
  }
}

// LP optimum against the sweep oracle, a grid of threshold pairs scored by
// the cell-level oracle, and vertex enumeration of the same program.
TEST(Solve, CrossValidation) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const Population pop = random_pop(seed, 4);
    const Predictor z = random_calibrated_predictor(pop, 1 + seed % 3, seed);
    const auto profile = score_profile(pop, z);
    Rng rng(seed * 7919);
    for (Objective o : kObjectives) {
      for (FairnessMetric h : kFairnessMetrics) {
        const OptimizationSpec spec = random_spec(rng, o, h);
        if (degenerate(profile, h)) continue;
        const auto lp = solve_optimization(profile, spec);
        const auto sweep = solve_by_sweep(profile, spec);
        ASSERT_EQ(lp.status, sweep.status) << describe(spec) << " seed " << seed;
        if (lp.status != LpStatus::Optimal) continue;
        EXPECT_NEAR(lp.value, sweep.value, 1e-7) << describe(spec) << " seed " << seed;

        // stats of the returned rule reproduce the value; thresholds too
        EXPECT_NEAR(objective_value(spec, lp.stats), lp.value, 1e-9);
        EXPECT_LE(constraint_violation(spec, lp.stats), 1e-9);
        ASSERT_TRUE(lp.threshold_stats.has_value());
        EXPECT_NEAR(objective_value(spec, *lp.threshold_stats), lp.value, 1e-9);
        EXPECT_LE(constraint_violation(spec, *lp.threshold_stats), 1e-9);

        const auto vertex = testing::vertex_enumeration(build_lp(profile, spec).lp);
        ASSERT_TRUE(vertex.feasible);
        const double sign = maximizes(o) ? 1.0 : -1.0;
        EXPECT_NEAR(vertex.value, lp.value, 1e-8);

        // no threshold pair on a grid does better
        const auto grid = uniform_grid(21);
        for (double ba : grid) {
          for (double bb : grid) {
            ThresholdPolicy policy;
            policy[Group::A] = threshold_for_rate(profile.group(Group::A), ba);
            policy[Group::B] = threshold_for_rate(profile.group(Group::B), bb);
            const auto cell = testing::cell_policy(
                pop, z, [&](double v, Group g) { return policy[g].select(v); },
                spec.impact_params.tau_u, spec.impact_params.tau_l);
            const auto& sa = cell.group[0];
            const auto& sb = cell.group[1];
            auto hv = [h](const testing::CellStats& s) {
              return h == FairnessMetric::SelectionRate ? s.beta
                     : h == FairnessMetric::TPR         ? s.tpr
                                                        : s.fpr;
            };
            const double diff = std::fabs(hv(sa) - hv(sb));
            const double imp_b = sb.impact;
            const double u = cell.utility;
            double value = 0.0;
            bool feasible = true;
            switch (o) {
              case Objective::UtilityMax:
                feasible = imp_b >= spec.t_i - 1e-12 && diff <= spec.eps + 1e-12;
                value = u;
                break;
              case Objective::DisparityMin:
                feasible = imp_b >= spec.t_i - 1e-12 && u >= spec.t_u - 1e-12;
                value = diff;
                break;
              case Objective::ImpactMax:
                feasible = u >= spec.t_u - 1e-12 && diff <= spec.eps + 1e-12;
                value = imp_b;
                break;
              case Objective::WeightedCombo:
                value = spec.lambda_u * u + spec.lambda_i * imp_b - spec.lambda_beta * diff;
                break;
            }
            if (!feasible) continue;
            EXPECT_GE(sign * lp.value, sign * value - 1e-9) << describe(spec) << " seed " << seed;
          }
        }
      }
    }
  }
}

TEST(Solve, DisparityMinBeatsFeasibleGridPoints) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Population pop = random_pop(seed);
    const Predictor z = random_calibrated_predictor(pop, 3, seed);
    const auto profile = score_profile(pop, z);
    OptimizationSpec spec;
    spec.objective = Objective::DisparityMin;
    spec.t_u = 0.0;
    spec.t_i = -1.0;
    const auto r = solve_optimization(profile, spec);
    ASSERT_EQ(r.status, LpStatus::Optimal);
    const auto grid = uniform_grid(41);
    for (double ba : grid) {
      for (double bb : grid) {
        ThresholdPolicy policy;
        policy[Group::A] = threshold_for_rate(profile.group(Group::A), ba);
        policy[Group::B] = threshold_for_rate(profile.group(Group::B), bb);
        const auto stats = evaluate(profile, policy, spec.impact_params);
        if (stats.utility < 0.0) continue;
        EXPECT_LE(r.value, std::fabs(ba - bb) + 1e-9);
      }
    }
  }
}

TEST(CostOfFairness, Examples) {
  const auto c = caution_calibration_instance();
  OptimizationSpec spec;
  spec.eps = 0.0;
  spec.impact_params.tau_u = 0.7;
  const auto base = cost_of_fairness(c.population, c.z, spec);
  const auto refined = cost_of_fairness(c.population, c.z_prime, spec);
  ASSERT_TRUE(base.cost && refined.cost);
  EXPECT_NEAR(*base.u_star, 0.15, 1e-12);
  EXPECT_NEAR(*base.cost, 0.125, 1e-12);
  EXPECT_NEAR(*refined.cost, 0.0, 1e-12);
  EXPECT_GT(*base.cost, *refined.cost);

  const auto f = groupwise_loss_instance();
  OptimizationSpec loose;
  loose.eps = 1.0;
  const auto perfect = cost_of_fairness(f.population, Predictor::p_star(f.population), loose);
  EXPECT_NEAR(*perfect.cost, 0.0, 1e-12);

  const auto sample = cost_of_fairness(c.population, c.z, spec, false);
  EXPECT_FALSE(sample.p_star_available);
  EXPECT_FALSE(sample.u_star.has_value());
  EXPECT_FALSE(sample.cost.has_value());
  EXPECT_NEAR(sample.opt, 0.025, 1e-12);

  OptimizationSpec other;
  other.objective = Objective::ImpactMax;
  EXPECT_THROW(cost_of_fairness(c.population, c.z, other), Error);
}

TEST(CostOfFairness, RefinementNeverCostsMore) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Population pop = random_pop(seed);
    const Predictor z = random_calibrated_predictor(pop, 2, seed);
    const Predictor zp = random_refinement(pop, z, seed + 1);
    Rng rng(seed);
    OptimizationSpec spec = random_spec(rng, Objective::UtilityMax, FairnessMetric::SelectionRate);
    spec.t_i = -1.0;
    const auto a = cost_of_fairness(pop, z, spec);
    const auto b = cost_of_fairness(pop, zp, spec);
    ASSERT_TRUE(a.cost && b.cost);
    EXPECT_GE(*a.cost, *b.cost - 1e-8);
    EXPECT_GE(*b.cost, -1e-9);
  }
}

std::vector<OptimizationSpec> spec_matrix(Rng& rng) {
  std::vector<OptimizationSpec> specs;
  for (Objective o : kObjectives) {
    for (FairnessMetric h : kFairnessMetrics) specs.push_back(random_spec(rng, o, h));
  }
  return specs;
}

TEST(VerifyImprovement, SelfComparisonIsEqual) {
  const Population pop = random_pop(3);
  const Predictor z = random_calibrated_predictor(pop, 3, 3);
  Rng rng(3);
  const auto specs = spec_matrix(rng);
  const auto report = verify_improvement(pop, z, z, specs);
  EXPECT_TRUE(report.holds);
  for (const auto& c : report.comparisons) {
    if (c.status_base == LpStatus::Optimal) EXPECT_NEAR(c.margin, 0.0, 1e-9);
  }
}

TEST(VerifyImprovement, MergedFeaturesOnRandomInstances) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Population pop = random_pop(seed, 5);
    const Predictor z = random_calibrated_predictor(pop, 2 + seed % 2, seed);
    Rng rng(seed * 17);
    const double cut = rng.uniform();
    const Predictor q = feature_predictor(pop, [cut](const Cell& c) { return c.p_star > cut; },
                                          Partition::PerGroup);
    const auto merged = merge_oracle(pop, z, q, Partition::PerGroup);
    auto specs = spec_matrix(rng);
    const auto profile = score_profile(pop, z);
    std::erase_if(specs, [&](const OptimizationSpec& s) {
      return degenerate(profile, s.fairness_metric);
    });
    const auto report = verify_improvement(pop, z, merged.result, specs);
    for (const auto& c : report.comparisons) {
      EXPECT_TRUE(c.holds) << "seed " << seed << " " << describe(c.spec) << " " << c.failure;
      EXPECT_GE(c.margin, -kImprovementTolerance);
      if (c.witness) EXPECT_TRUE(c.witness->holds) << "seed " << seed << " " << describe(c.spec);
    }
    EXPECT_TRUE(report.holds);
  }
}

TEST(VerifyImprovement, ParityWitnessKeepsRates) {
  const auto c = caution_calibration_instance();
  OptimizationSpec spec;
  spec.eps = 0.0;
  spec.impact_params.tau_u = 0.7;
  const auto base = solve_optimization(c.population, c.z, spec);
  ASSERT_TRUE(base.as_threshold.has_value());
  const auto w = improvement_witness(score_profile(c.population, c.z),
                                     score_profile(c.population, c.z_prime), spec,
                                     *base.as_threshold);
  EXPECT_TRUE(w.holds);
  EXPECT_EQ(w.beta, w.beta_prime);
  EXPECT_GE(w.utility_prime, w.utility);
  EXPECT_GE(w.impact_b_prime, w.impact_b);
}

TEST(VerifyImprovement, RefusesPartialRefinement) {
  const auto g = groupwise_loss_instance();
  const std::vector<OptimizationSpec> specs = {OptimizationSpec{}};
  try {
    verify_improvement(g.population, g.z, g.z_prime, specs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "not-refinement");
  }
}

TEST(Spec, ParseAndValidate) {
  EXPECT_EQ(parse_objective("utility"), Objective::UtilityMax);
  EXPECT_EQ(parse_objective("DisparityMin"), Objective::DisparityMin);
  EXPECT_EQ(parse_fairness_metric("fpr"), FairnessMetric::FPR);
  EXPECT_THROW(parse_objective("speed"), Error);
  OptimizationSpec spec;
  spec.eps = -0.1;
  EXPECT_THROW(spec.validate(), Error);
  spec.eps = 0.0;
  spec.lambda_i = -1.0;
  EXPECT_THROW(spec.validate(), Error);
}

}  // namespace
}  // namespace infofair
