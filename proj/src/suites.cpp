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

#include "infofair/suites.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>

#include "infofair/error.hpp"
#include "infofair/information.hpp"
#include "infofair/policy.hpp"
#include "infofair/random.hpp"
#include "infofair/refinement.hpp"
#include "infofair/synth.hpp"

namespace infofair {
namespace {

constexpr std::size_t kMaxMessages = 10;
constexpr double kIdentityTolerance = 1e-10;
constexpr double kMergeTolerance = 1e-10;

class Tally {
 public:
  Tally(std::string suite, std::size_t seeds) {
    out_.suite = std::move(suite);
    out_.seeds = seeds;
    out_.worst_slack = std::numeric_limits<double>::infinity();
  }

  // Records one check with the given slack (>= 0 passes).
  void check(double slack, const std::function<std::string()>& describe) {
    ++out_.checks;
    if (std::isnan(slack)) slack = -std::numeric_limits<double>::infinity();
    out_.worst_slack = std::min(out_.worst_slack, slack);
    if (slack < 0.0) fail(describe());
  }

  void check(bool ok, const std::function<std::string()>& describe) {
    check(ok ? 0.0 : -1.0, describe);
  }

  void fail(std::string message) {
    ++out_.failures;
    if (out_.messages.size() < kMaxMessages) out_.messages.push_back(std::move(message));
  }

  SuiteOutcome finish() {
    if (out_.checks == 0) out_.worst_slack = 0.0;
    return std::move(out_);
  }

  SuiteOutcome& outcome() { return out_; }

 private:
  SuiteOutcome out_;
};

Population suite_population(std::uint64_t seed) {
  GeneratorParams params;
  params.seed = seed;
  params.cells_per_group = 4 + seed % 6;
  params.atom_share = seed % 4 == 0 ? 0.0 : 0.2;
  params.mass_a = 0.3 + 0.4 * static_cast<double>(seed % 11) / 10.0;
  return random_population(params);
}

double uniform_in(Rng& rng, double lo, double hi) { return rng.uniform(lo, hi); }

}  // namespace

SuiteInstance suite_instance(std::uint64_t seed) {
  Population pop = suite_population(seed);
  Predictor z = random_calibrated_predictor(pop, 1 + seed % 4, seed * 2 + 1);
  Predictor zp = random_refinement(pop, z, seed * 2 + 2);
  return {std::move(pop), std::move(z), std::move(zp)};
}

std::vector<OptimizationSpec> spec_matrix(const Population& pop, const Predictor& z,
                                          std::uint64_t seed) {
  const auto profile = score_profile(pop, z);
  Rng rng(seed ^ 0x5bd1e995u);
  std::vector<OptimizationSpec> specs;
  for (Objective o : kObjectives) {
    for (FairnessMetric h : kFairnessMetrics) {
      OptimizationSpec spec;
      spec.objective = o;
      spec.fairness_metric = h;
      spec.impact_params.tau_u = uniform_in(rng, 0.2, 0.8);
      spec.impact_params.tau_l = uniform_in(rng, 0.2, 0.8);
      spec.eps = rng.uniform() < 0.3 ? 0.0 : uniform_in(rng, 0.0, 0.3);
      spec.t_i = rng.uniform() < 0.5 ? -1.0 : uniform_in(rng, -0.05, 0.05);
      spec.t_u = rng.uniform() < 0.5 ? -1.0 : uniform_in(rng, -0.05, 0.05);
      spec.lambda_u = rng.uniform();
      spec.lambda_i = rng.uniform();
      spec.lambda_beta = rng.uniform();
      bool defined = true;
      for (Group g : kGroups) {
        const double r = profile.group(g).base_rate;
        if (h == FairnessMetric::TPR && r <= 0.0) defined = false;
        if (h == FairnessMetric::FPR && r >= 1.0) defined = false;
      }
      if (defined) specs.push_back(spec);
    }
  }
  return specs;
}

std::vector<std::string> suite_names() {
  return {"improve", "improv", "identities", "merge", "samples"};
}

SuiteOutcome run_suite(std::string_view name, std::size_t seeds, std::uint64_t first_seed) {
  if (name == "improve") return improvement_suite(seeds, first_seed);
  if (name == "improv") return dominance_suite(seeds, first_seed);
  if (name == "identities") return identities_suite(seeds, first_seed);
  if (name == "merge") return merge_suite(seeds, first_seed);
  if (name == "samples") return samples_suite(seeds, first_seed);
  throw Error("argument", fmt::format("unknown suite \"{}\" (expected improve, improv, "
                                      "identities, merge or samples)",
                                      name));
}

SuiteOutcome identities_suite(std::size_t seeds, std::uint64_t first_seed) {
  Tally tally("identities", seeds);
  for (std::uint64_t seed = first_seed; seed < first_seed + seeds; ++seed) {
    const auto inst = suite_instance(seed);
    const Population& pop = inst.population;
    // p* refines everything, so it is checked alongside z_prime.
    const Predictor ps = Predictor::p_star(pop);
    for (Scope s : {Scope::A, Scope::B}) {
      for (const Predictor* ref : {&inst.z_prime, &ps}) {
        const double gap = information_content(pop, *ref, s) - information_content(pop, inst.z, s);
        const double loss = information_loss(pop, *ref, inst.z, s);
        tally.check(kIdentityTolerance - std::fabs(loss - gap), [&] {
          return fmt::format("seed {} scope {} {}: L = {:.17g} but I gap = {:.17g}", seed,
                             to_string(s), ref->name(), loss, gap);
        });
        const double egap = entropic_information_content(pop, *ref, s) -
                            entropic_information_content(pop, inst.z, s);
        const double eloss = entropic_information_loss(pop, *ref, inst.z, s);
        tally.check(kIdentityTolerance - std::fabs(eloss - egap), [&] {
          return fmt::format("seed {} scope {} {}: L_ent = {:.17g} but I_ent gap = {:.17g}", seed,
                             to_string(s), ref->name(), eloss, egap);
        });
      }
    }
  }
  return tally.finish();
}

SuiteOutcome dominance_suite(std::size_t seeds, std::uint64_t first_seed) {
  Tally tally("improv", seeds);
  for (std::uint64_t seed = first_seed; seed < first_seed + seeds; ++seed) {
    const auto inst = suite_instance(seed);
    const auto report = dominance_check(inst.population, inst.z, inst.z_prime, kGroups);
    for (const auto& g : report.groups) {
      const double worst = std::min({g.worst_tpr, g.worst_fpr, g.worst_ppv});
      tally.check(worst + kDominanceTolerance, [&] {
        return fmt::format("seed {} group {}: worst margins TPR {:.3g} FPR {:.3g} PPV {:.3g}",
                           seed, to_string(g.group), g.worst_tpr, g.worst_fpr, g.worst_ppv);
      });
    }
  }
  return tally.finish();
}

SuiteOutcome improvement_suite(std::size_t seeds, std::uint64_t first_seed) {
  Tally tally("improve", seeds);
  for (std::uint64_t seed = first_seed; seed < first_seed + seeds; ++seed) {
    const auto inst = suite_instance(seed);
    const auto specs = spec_matrix(inst.population, inst.z, seed);
    const auto report = verify_improvement(inst.population, inst.z, inst.z_prime, specs);
    for (const auto& c : report.comparisons) {
      const bool both_optimal =
          c.status_base == LpStatus::Optimal && c.status_refined == LpStatus::Optimal;
      tally.check(both_optimal ? c.margin + kImprovementTolerance : (c.holds ? 0.0 : -1.0), [&] {
        return fmt::format("seed {} {}: {}", seed, describe(c.spec), c.failure);
      });
      if (c.witness) {
        tally.check(c.witness->holds, [&] {
          return fmt::format("seed {} {}: constructive witness failed", seed, describe(c.spec));
        });
      }
    }
  }
  return tally.finish();
}

SuiteOutcome merge_suite(std::size_t seeds, std::uint64_t first_seed) {
  Tally tally("merge", seeds);
  for (std::uint64_t seed = first_seed; seed < first_seed + seeds; ++seed) {
    const Population pop = suite_population(seed);
    const Partition part = seed % 2 ? Partition::PerGroup : Partition::Whole;
    const Predictor z = random_calibrated_predictor(pop, 2 + seed % 3, seed * 3 + 1, part, "z");
    const Predictor q = random_calibrated_predictor(pop, 2 + seed % 2, seed * 3 + 2, part, "q");
    const auto r = merge_oracle(pop, z, q, part);
    for (Scope s : scopes_of(part)) {
      for (const Predictor* input : {&z, &q}) {
        tally.check(is_refinement(pop, *input, r.result, s, kMergeTolerance).is_refinement, [&] {
          return fmt::format("seed {} scope {}: merge does not refine {}", seed, to_string(s),
                             input->name());
        });
      }
    }
    for (const auto& st : r.per_scope) {
      tally.check(st.info_rho - st.guaranteed_gain + kMergeTolerance, [&] {
        return fmt::format("seed {} scope {}: I(rho) = {:.17g} below guarantee {:.17g}", seed,
                           to_string(st.scope), st.info_rho, st.guaranteed_gain);
      });
    }
    const Predictor base = calibrate(
        pop, Predictor::from_scores("flat", std::vector<double>(pop.size(), 0.0)), part, "base");
    for (const Predictor* other : {&z, &base}) {
      const auto trivial = merge_oracle(pop, z, *other, part);
      bool same = true;
      for (std::size_t i = 0; i < pop.size(); ++i) {
        same = same && trivial.result.exact_score(i) == z.exact_score(i);
      }
      tally.check(same, [&] {
        return fmt::format("seed {}: merge(z, {}) differs from z", seed, other->name());
      });
    }
  }
  return tally.finish();
}

SuiteOutcome samples_suite(std::size_t trials, std::uint64_t first_seed) {
  constexpr double kAlpha = 0.1;
  constexpr double kGamma = 0.1;
  constexpr double kDelta = 0.05;
  constexpr double kRequired = 0.93;
  Tally tally("samples", trials);
  const SampleBudget budget = SampleBudget::from_bound(kAlpha, kGamma, kDelta);
  std::size_t successes = 0;
  for (std::uint64_t seed = first_seed; seed < first_seed + trials; ++seed) {
    // Redraw until every crossed cell has density at least gamma.
    std::optional<Population> drawn;
    Predictor z;
    Predictor q;
    for (std::uint64_t variant = seed;; variant += 1000003) {
      GeneratorParams params;
      params.seed = variant;
      params.cells_per_group = 3;
      drawn.emplace(random_population(params));
      z = random_calibrated_predictor(*drawn, 2, variant + 1, Partition::Whole, "z");
      q = random_calibrated_predictor(*drawn, 2, variant + 2, Partition::Whole, "q");
      if (min_crossed_density(*drawn, z, q) >= kGamma) break;
    }
    const Population& pop = *drawn;
    const auto oracle = merge_oracle(pop, z, q);
    const auto r = merge_from_samples(pop, z, q, budget, seed);
    bool all_close = true;
    double worst = 0.0;
    for (const auto& e : r.estimates) {
      for (std::size_t i = 0; i < pop.size(); ++i) {
        if (z.score(i) != e.z_value || q.score(i) != e.q_value) continue;
        const double err = std::fabs(e.empirical_mean - oracle.result.score(i));
        worst = std::max(worst, err);
        if (err >= kAlpha / 2) all_close = false;
        break;
      }
    }
    ++tally.outcome().checks;
    if (all_close) {
      ++successes;
    } else if (tally.outcome().messages.size() < kMaxMessages) {
      tally.outcome().messages.push_back(
          fmt::format("trial {}: a crossed-cell estimate is off by {:.4g}", seed, worst));
    }
  }
  SuiteOutcome out = tally.finish();
  out.success_rate = trials ? static_cast<double>(successes) / static_cast<double>(trials) : 1.0;
  out.required_rate = kRequired;
  out.worst_slack = out.success_rate - kRequired;
  out.failures = out.success_rate >= kRequired ? 0 : trials - successes;
  return out;
}

}  // namespace infofair
