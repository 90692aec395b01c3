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

#include <cmath>

#include "infofair/error.hpp"
#include "infofair/policy.hpp"
#include "infofair/random.hpp"
#include "infofair/refinement.hpp"
#include "infofair/synth.hpp"
#include "support/oracles.hpp"

namespace infofair {
namespace {

constexpr double kTight = 1e-12;

Population random_pop(std::uint64_t seed) {
  GeneratorParams params;
  params.seed = seed;
  params.cells_per_group = 4 + seed % 5;
  params.atom_share = seed % 3 == 0 ? 0.0 : 0.25;
  return random_population(params);
}

ThresholdPolicy both(double tau, double p = 0.0) {
  ThresholdPolicy policy;
  policy[Group::A] = {tau, p};
  policy[Group::B] = {tau, p};
  return policy;
}

TEST(Evaluate, CautionInstanceAtPointSeven) {
  const auto c = caution_calibration_instance();
  const auto stats = evaluate(c.population, c.z, both(0.7), ImpactParams{});
  EXPECT_EQ(stats.group(Group::A).tpr.value(), 1.0);
  EXPECT_EQ(stats.group(Group::B).beta, 0.0);
  EXPECT_FALSE(stats.group(Group::B).ppv.has_value());
}

TEST(Evaluate, SelectEveryone) {
  const auto g = groupwise_loss_instance();
  const Population& pop = g.population;
  ImpactParams params{0.3, 0.4, false};
  const auto stats = evaluate(pop, g.z, both(0.0, 1.0), params);
  for (Group grp : kGroups) {
    const auto& s = stats.group(grp);
    EXPECT_EQ(s.beta, 1.0);
    EXPECT_NEAR(*s.tpr, 1.0, kTight);
    EXPECT_NEAR(*s.fpr, 1.0, kTight);
    EXPECT_NEAR(*s.ppv, base_rate(pop, scope_of(grp)), kTight);
  }
  EXPECT_NEAR(stats.utility, base_rate(pop, Scope::All) - 0.3, kTight);
}

TEST(Evaluate, TradeoffUtility) {
  const auto f = tradeoff_instance();
  ImpactParams params{0.7, 0.5, false};
  ThresholdPolicy policy;
  policy[Group::A] = {0.7, 0.0};
  EXPECT_NEAR(evaluate(f.population, f.z, policy, params).utility, 0.02, kTight);
  EXPECT_NEAR(evaluate(f.population, f.z_prime, policy, params).utility, 0.0, kTight);
}

TEST(Evaluate, IncompleteRule) {
  const auto f = tradeoff_instance();
  SelectionRule rule;
  rule.set(Group::A, 0.75, 1.0);
  try {
    evaluate(f.population, f.z, rule, ImpactParams{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "rule-incomplete");
  }
}

TEST(Evaluate, MatchesCellOracleOnRandomRules) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Population pop = random_pop(seed);
    const Predictor z = random_calibrated_predictor(pop, 2 + seed % 4, seed);
    Rng rng(seed);
    SelectionRule rule;
    const auto profile = score_profile(pop, z);
    for (Group g : kGroups) {
      for (const auto& level : profile.group(g).levels) rule.set(g, level.value, rng.uniform());
    }
    const ImpactParams params{rng.uniform(), rng.uniform(), false};
    const auto stats = evaluate(pop, z, rule, params);
    const auto oracle = testing::cell_policy(
        pop, z, [&](double v, Group g) { return *rule.get(g, v); }, params.tau_u, params.tau_l);
    EXPECT_NEAR(stats.utility, oracle.utility, 1e-12);
    for (Group g : kGroups) {
      const auto& s = stats.group(g);
      const auto& o = oracle.group[index_of(g)];
      EXPECT_NEAR(s.beta, o.beta, kTight);
      if (s.tpr) EXPECT_NEAR(*s.tpr, o.tpr, 1e-11);
      if (s.fpr) EXPECT_NEAR(*s.fpr, o.fpr, 1e-11);
      if (s.ppv) EXPECT_NEAR(*s.ppv, o.ppv, 1e-11);
      EXPECT_NEAR(s.impact, o.impact, kTight);
      // beta decomposition and PPV beta = r TPR
      if (s.tpr && s.fpr) {
        EXPECT_NEAR(s.beta, s.base_rate * *s.tpr + (1.0 - s.base_rate) * *s.fpr, kTight);
      }
      if (s.ppv && s.tpr) EXPECT_NEAR(*s.ppv * s.beta, s.base_rate * *s.tpr, kTight);
    }
  }
}

TEST(ThresholdForRate, TradeoffExamples) {
  const auto f = tradeoff_instance();
  const auto r0 = threshold_for_rate(f.population, f.z, Group::A, 0.0);
  EXPECT_EQ(r0.tau, 1.0);
  EXPECT_EQ(r0.p, 0.0);
  const auto r25 = threshold_for_rate(f.population, f.z, Group::A, 0.4);
  EXPECT_EQ(r25.tau, 0.75);
  EXPECT_NEAR(r25.p, 1.0, kTight);
  const auto r12 = threshold_for_rate(f.population, f.z, Group::A, 0.5);
  EXPECT_EQ(r12.tau, 1.0 / 3.0);
  EXPECT_NEAR(r12.p, 1.0 / 6.0, kTight);
  const auto r1 = threshold_for_rate(f.population, f.z, Group::A, 1.0);
  EXPECT_EQ(r1.tau, 0.0);
  EXPECT_EQ(r1.p, 1.0);
}

TEST(ThresholdForRate, RateIsExactOnRandomInstances) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Population pop = random_pop(seed);
    const Predictor z = random_calibrated_predictor(pop, 2 + seed % 5, seed);
    const auto profile = score_profile(pop, z);
    for (Group g : kGroups) {
      const auto grid = curve_grid(profile.group(g), 101);
      for (double beta : grid) {
        ThresholdPolicy policy;
        policy[g] = threshold_for_rate(profile.group(g), beta);
        policy[g == Group::A ? Group::B : Group::A] = {1.0, 0.0};
        const auto stats = evaluate(profile, policy, ImpactParams{});
        EXPECT_NEAR(stats.group(g).beta, beta, kTight) << "seed " << seed << " beta " << beta;
      }
    }
  }
}

TEST(SweepCurves, Examples) {
  const auto f = tradeoff_instance();
  const std::vector<double> betas = {0.0, 0.4, 1.0};
  const auto rows = sweep_curves(f.population, f.z, Group::A, betas);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_NEAR(*rows[0].tpr, 0.0, kTight);
  EXPECT_FALSE(rows[0].ppv.has_value());
  EXPECT_NEAR(*rows[1].tpr, 0.6, kTight);
  EXPECT_NEAR(*rows[1].fpr, 0.2, kTight);
  EXPECT_NEAR(*rows[1].ppv, 0.75, kTight);
  EXPECT_NEAR(*rows[2].tpr, 1.0, kTight);
  EXPECT_NEAR(*rows[2].fpr, 1.0, kTight);

  const Predictor ps = Predictor::p_star(f.population);
  const std::vector<double> at_r = {0.5};
  const auto perfect = sweep_curves(f.population, ps, Group::A, at_r);
  EXPECT_NEAR(*perfect[0].tpr, 1.0, kTight);
  EXPECT_NEAR(*perfect[0].fpr, 0.0, kTight);
  EXPECT_NEAR(*perfect[0].ppv, 1.0, kTight);
}

TEST(SweepCurves, BreakpointsAreCumulativeMasses) {
  const auto f = tradeoff_instance();
  const auto profile = score_profile(f.population, f.z);
  const auto bp = breakpoints(profile.group(Group::A));
  ASSERT_EQ(bp.size(), 3u);
  EXPECT_EQ(bp[0], 0.0);
  EXPECT_NEAR(bp[1], 0.4, kTight);
  EXPECT_EQ(bp[2], 1.0);
}

TEST(SweepCurves, MonotoneConcaveConvex) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Population pop = random_pop(seed);
    const Predictor z = random_calibrated_predictor(pop, 2 + seed % 5, seed);
    const auto profile = score_profile(pop, z);
    for (Group g : kGroups) {
      const auto grid = curve_grid(profile.group(g), 201);
      const auto rows = sweep_curves(profile.group(g), grid);
      for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].tpr) EXPECT_GE(*rows[i].tpr, *rows[i - 1].tpr - kTight);
        if (rows[i].fpr) EXPECT_GE(*rows[i].fpr, *rows[i - 1].fpr - kTight);
      }
      for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
        const double b0 = rows[i - 1].beta, b1 = rows[i].beta, b2 = rows[i + 1].beta;
        const double w = (b1 - b0) / (b2 - b0);
        if (rows[i].tpr) {
          EXPECT_GE(*rows[i].tpr, (1 - w) * *rows[i - 1].tpr + w * *rows[i + 1].tpr - 1e-10);
        }
        if (rows[i].fpr) {
          EXPECT_LE(*rows[i].fpr, (1 - w) * *rows[i - 1].fpr + w * *rows[i + 1].fpr + 1e-10);
        }
      }
    }
  }
}

TEST(RateInverse, PositivesAndNegatives) {
  const auto f = tradeoff_instance();
  const auto profile = score_profile(f.population, f.z);
  const auto& g = profile.group(Group::A);
  // TPR 3/5 is first reached at beta 2/5; FPR 1/5 persists up to 2/5.
  EXPECT_NEAR(rate_for_positives(g, 0.3), 0.4, kTight);
  EXPECT_NEAR(rate_for_negatives(g, 0.1), 0.4, kTight);
  EXPECT_NEAR(rate_for_positives(g, 0.5), 1.0, kTight);
  EXPECT_NEAR(rate_for_negatives(g, 0.0), 0.0, kTight);
  const Predictor ps = Predictor::p_star(f.population);
  const auto perfect = score_profile(f.population, ps);
  // every positive is selected before any negative
  EXPECT_NEAR(rate_for_positives(perfect.group(Group::A), 0.5), 0.5, kTight);
  EXPECT_NEAR(rate_for_negatives(perfect.group(Group::A), 0.0), 0.5, kTight);
}

TEST(Dominance, SelfAndPStar) {
  const auto f = tradeoff_instance();
  const std::vector<Group> groups = {Group::A};
  const auto self = dominance_check(f.population, f.z, f.z, groups);
  EXPECT_TRUE(self.holds);
  EXPECT_NEAR(self.groups[0].worst_tpr, 0.0, kTight);
  EXPECT_NEAR(self.groups[0].worst_fpr, 0.0, kTight);
  EXPECT_NEAR(self.groups[0].worst_ppv, 0.0, kTight);

  const Predictor ps = Predictor::p_star(f.population);
  EXPECT_TRUE(dominance_check(f.population, f.z, ps, groups).holds);
  const auto profile_z = score_profile(f.population, f.z);
  const auto profile_p = score_profile(f.population, ps);
  const std::vector<double> at = {0.4};
  EXPECT_GT(*sweep_curves(profile_p.group(Group::A), at)[0].tpr,
            *sweep_curves(profile_z.group(Group::A), at)[0].tpr + 0.1);
}

TEST(Dominance, RejectsNonRefinement) {
  const auto f = tradeoff_instance();
  const std::vector<Group> groups = {Group::A};
  try {
    dominance_check(f.population, f.z, f.z_prime, groups);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "not-refinement");
  }
}

TEST(Dominance, MergedFeaturesOnRandomInstances) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Population pop = random_pop(seed);
    const Predictor z = random_calibrated_predictor(pop, 2 + seed % 3, seed);
    Rng rng(seed * 31);
    const double cut = rng.uniform();
    const auto phi = [cut](const Cell& c) { return c.p_star > cut; };
    const Predictor q = feature_predictor(pop, phi, Partition::PerGroup);
    const auto merged = merge_oracle(pop, z, q, Partition::PerGroup);
    const auto report = dominance_check(pop, z, merged.result, kGroups, 201);
    EXPECT_TRUE(report.holds) << "seed " << seed;
    for (const auto& gd : report.groups) {
      EXPECT_EQ(gd.violations, 0u);
      EXPECT_GE(gd.worst_tpr, -kDominanceTolerance);
      EXPECT_GE(gd.worst_fpr, -kDominanceTolerance);
      EXPECT_GE(gd.worst_ppv, -kDominanceTolerance);
    }
  }
}

TEST(ImpactParams, RiskAverseRequiresOrder) {
  EXPECT_THROW((ImpactParams{0.4, 0.5, true}.validate()), Error);
  EXPECT_NO_THROW((ImpactParams{0.6, 0.5, true}.validate()));
  EXPECT_THROW((ImpactParams{1.5, 0.5, false}.validate()), Error);
}

}  // namespace
}  // namespace infofair
