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

// One line per acceptance criterion; exit status 1 when any fails.

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <array>
#include <functional>
#include <string>
#include <vector>

#include "infofair/information.hpp"
#include "infofair/lp.hpp"
#include "infofair/optimize.hpp"
#include "infofair/policy.hpp"
#include "infofair/refinement.hpp"
#include "infofair/samples.hpp"
#include "infofair/suites.hpp"
#include "infofair/synth.hpp"
#include "support/lp_oracle.hpp"
#include "support/oracles.hpp"
#include "support/random_lp.hpp"

namespace infofair {
namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  std::string name;
  double budget_seconds;  // 0 when the criterion states no runtime
  std::function<Verdict()> check;
};

// Collects failures and keeps the first message.
class Checks {
 public:
  void expect(bool ok, const std::function<std::string()>& why) {
    ++count_;
    if (ok) return;
    ++failures_;
    if (first_.empty()) first_ = why();
  }
  Verdict verdict(std::string summary) const {
    if (failures_ == 0) return {true, fmt::format("{} checks; {}", count_, summary)};
    return {false, fmt::format("{}/{} checks failed; first: {}", failures_, count_, first_)};
  }
  std::size_t count() const { return count_; }

 private:
  std::size_t count_ = 0;
  std::size_t failures_ = 0;
  std::string first_;
};

ThresholdPolicy single(double tau) {
  ThresholdPolicy p;
  p[Group::A] = {tau, 0.0};
  p[Group::B] = {tau, 0.0};
  return p;
}

Verdict tradeoff() {
  const auto f = tradeoff_instance();
  const Population& pop = f.population;
  Checks c;
  const Rational iz = exact::information_content(pop, f.z, Scope::All);
  const Rational izp = exact::information_content(pop, f.z_prime, Scope::All);
  c.expect(iz == Rational(1, 6), [&] { return fmt::format("I(z) = {}", to_fraction_string(iz)); });
  c.expect(izp == Rational(1, 3), [&] { return fmt::format("I(z') = {}", to_fraction_string(izp)); });
  c.expect(testing::information(pop, f.z, Scope::All) == Rational(1, 6), [] { return "oracle I(z)"; });
  c.expect(testing::information(pop, f.z_prime, Scope::All) == Rational(1, 3),
           [] { return "oracle I(z')"; });
  const double fz = information_content(pop, f.z, Scope::All);
  const double fzp = information_content(pop, f.z_prime, Scope::All);
  c.expect(std::fabs(fz - 1.0 / 6.0) <= 1e-12, [&] { return fmt::format("float I(z) = {}", fz); });
  c.expect(std::fabs(fzp - 1.0 / 3.0) <= 1e-12, [&] { return fmt::format("float I(z') = {}", fzp); });
  c.expect(izp > iz, [] { return "I(z') not above I(z)"; });
  const ImpactParams params{0.7, 0.5, false};
  const double uz = evaluate(pop, f.z, single(0.7), params).utility;
  const double uzp = evaluate(pop, f.z_prime, single(0.7), params).utility;
  const auto take = [](double v, Group) { return v > 0.7 ? 1.0 : 0.0; };
  const double oz = testing::cell_policy(pop, f.z, take, 0.7, 0.5).utility;
  c.expect(std::fabs(uz - 0.02) <= 1e-12 && std::fabs(oz - 0.02) <= 1e-12,
           [&] { return fmt::format("U(z) = {} (oracle {})", uz, oz); });
  c.expect(std::fabs(uzp) <= 1e-12, [&] { return fmt::format("U(z') = {}", uzp); });
  return c.verdict(fmt::format("I(z) = {}, I(z') = {}, U(z) = {:.12g}, U(z') = {:.3g}",
                               to_fraction_string(iz), to_fraction_string(izp), uz, uzp));
}

Verdict identities() {
  constexpr double kTol = 1e-10;
  const auto suite = identities_suite(500);
  Checks c;
  c.expect(suite.passed(), [&] { return suite.messages.empty() ? "" : suite.messages[0]; });
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    const auto inst = suite_instance(seed);
    const Population& pop = inst.population;
    const Predictor ps = Predictor::p_star(pop);
    for (Scope s : {Scope::A, Scope::B}) {
      for (const Predictor* ref : {&inst.z_prime, &ps}) {
        const double gap =
            testing::information_f(pop, *ref, s) - testing::information_f(pop, inst.z, s);
        const double loss = information_loss(pop, *ref, inst.z, s);
        const double egap = testing::entropic_information(pop, *ref, s) -
                            testing::entropic_information(pop, inst.z, s);
        const double eloss = entropic_information_loss(pop, *ref, inst.z, s);
        worst = std::max({worst, std::fabs(loss - gap), std::fabs(eloss - egap)});
        c.expect(std::fabs(loss - gap) <= kTol && std::fabs(eloss - egap) <= kTol, [&] {
          return fmt::format("seed {} scope {}: L {} vs oracle gap {}, L_ent {} vs {}", seed,
                             to_string(s), loss, gap, eloss, egap);
        });
      }
    }
  }
  return c.verdict(fmt::format("500 seeds, worst |L - gap| = {:.2g}", worst));
}

Verdict dominance() {
  const auto suite = dominance_suite(200);
  Checks c;
  c.expect(suite.passed(), [&] { return suite.messages.empty() ? "" : suite.messages[0]; });
  // Recompute the curves cell by cell at every breakpoint of both predictors.
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto inst = suite_instance(seed);
    const Population& pop = inst.population;
    const auto base = score_profile(pop, inst.z);
    const auto refined = score_profile(pop, inst.z_prime);
    for (Group g : kGroups) {
      const auto b1 = breakpoints(base.group(g));
      const auto b2 = breakpoints(refined.group(g));
      const auto grid = uniform_grid(101);
      for (double beta : merge_grids({b1, b2, grid})) {
        const auto at = [&](const Predictor& z, const GroupProfile& gp) {
          ThresholdPolicy p = single(1.0);
          p[g] = threshold_for_rate(gp, beta);
          return testing::cell_policy(
                     pop, z, [&](double v, Group h) { return p[h].select(v); }, 0.5, 0.5)
              .group[index_of(g)];
        };
        const auto s = at(inst.z, base.group(g));
        const auto sp = at(inst.z_prime, refined.group(g));
        const double margin = std::min({sp.tpr - s.tpr, s.fpr - sp.fpr,
                                        beta > 0.0 ? sp.ppv - s.ppv : 0.0});
        worst = std::min(worst, margin);
        c.expect(margin >= -kDominanceTolerance, [&] {
          return fmt::format("seed {} group {} beta {}: margin {}", seed, to_string(g), beta,
                             margin);
        });
      }
    }
  }
  return c.verdict(fmt::format("200 pairs, {} suite checks, worst oracle margin {:.2g}",
                               suite.checks, worst));
}

Verdict improvement() {
  const auto suite = improvement_suite(100);
  Checks c;
  c.expect(suite.passed(), [&] { return suite.messages.empty() ? "" : suite.messages[0]; });
  // Witness cases by metric, counted so that all three proof cases are seen.
  std::array<std::size_t, 3> witnesses{};
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto inst = suite_instance(seed);
    const auto specs = spec_matrix(inst.population, inst.z, seed);
    const auto base = score_profile(inst.population, inst.z);
    const auto refined = score_profile(inst.population, inst.z_prime);
    for (const auto& spec : specs) {
      const auto r = solve_optimization(base, spec);
      if (r.status != LpStatus::Optimal || !r.as_threshold) continue;
      const auto w = improvement_witness(base, refined, spec, *r.as_threshold);
      ++witnesses[static_cast<std::size_t>(spec.fairness_metric)];
      const bool same_h = std::fabs(w.h[0] - w.h_prime[0]) <= kWitnessTolerance &&
                          std::fabs(w.h[1] - w.h_prime[1]) <= kWitnessTolerance;
      c.expect(same_h && w.utility_prime >= w.utility - kWitnessTolerance &&
                   w.impact_b_prime >= w.impact_b - kWitnessTolerance,
               [&] { return fmt::format("seed {} {}: witness fails", seed, describe(spec)); });
    }
  }
  c.expect(witnesses[0] > 0 && witnesses[1] > 0 && witnesses[2] > 0,
           [] { return "some proof case never exercised"; });
  return c.verdict(fmt::format("100 instances, {} comparisons, witnesses beta/TPR/FPR = {}/{}/{}",
                               suite.checks, witnesses[0], witnesses[1], witnesses[2]));
}

Verdict merge() {
  const auto suite = merge_suite(200);
  Checks c;
  c.expect(suite.passed(), [&] { return suite.messages.empty() ? "" : suite.messages[0]; });
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    GeneratorParams params;
    params.seed = seed + 5000;
    params.cells_per_group = 4 + seed % 5;
    const Population pop = random_population(params);
    const bool per_group = seed % 2 == 1;
    const Partition part = per_group ? Partition::PerGroup : Partition::Whole;
    const Predictor z = random_calibrated_predictor(pop, 2 + seed % 3, seed, part, "z");
    const Predictor q = random_calibrated_predictor(pop, 2 + seed % 2, seed + 1, part, "q");
    const auto r = merge_oracle(pop, z, q, part);
    const auto expected = testing::merged_scores(pop, z, q, per_group);
    bool same = true;
    for (std::size_t i = 0; i < pop.size(); ++i) {
      same = same && r.result.exact_score(i) == expected[i];
    }
    c.expect(same, [&] { return fmt::format("seed {}: merge differs from the oracle", seed); });
    const auto same_scores = [&](const Predictor& a, const Predictor& b) {
      for (std::size_t i = 0; i < pop.size(); ++i) {
        if (a.exact_score(i) != b.exact_score(i)) return false;
      }
      return true;
    };
    c.expect(same_scores(merge_oracle(pop, z, z, part).result, z),
             [&] { return fmt::format("seed {}: merge(z, z) != z", seed); });
    const Predictor base = feature_predictor(pop, [](const Cell&) { return false; }, part, "r");
    c.expect(same_scores(merge_oracle(pop, z, base, part).result, z),
             [&] { return fmt::format("seed {}: merge(z, base rate) != z", seed); });
    for (Scope s : scopes_of(part)) {
      c.expect(testing::refines(pop, z, r.result, s) && testing::refines(pop, q, r.result, s),
               [&] { return fmt::format("seed {}: oracle says merge is not a refinement", seed); });
      const Rational dqz = testing::refinement_distance(pop, q, z, s);
      const Rational dzq = testing::refinement_distance(pop, z, q, s);
      const Rational ir = testing::information(pop, r.result, s);
      const Rational bound = std::max(testing::information(pop, z, s) + 4 * dqz * dqz,
                                      testing::information(pop, q, s) + 4 * dzq * dzq);
      c.expect(ir >= bound, [&] {
        return fmt::format("seed {}: I(rho) = {} below {}", seed, to_fraction_string(ir), to_fraction_string(bound));
      });
    }
  }
  return c.verdict("200 suite merges plus 200 exact-oracle merges");
}

Verdict samples() {
  const auto suite = samples_suite(200);
  return {suite.passed(), fmt::format("success rate {:.3f} over 200 trials (accept >= {:.2f}); m = {}",
                                      suite.success_rate, suite.required_rate,
                                      SampleBudget::from_bound(0.1, 0.1, 0.05).m)};
}

Verdict entropic_bounds() {
  Checks c;
  // Entropic content below variance content on every generated predictor.
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    const auto inst = suite_instance(seed);
    const Predictor ps = Predictor::p_star(inst.population);
    for (const Predictor* z : {&inst.z, &inst.z_prime, &ps}) {
      for (Scope s : {Scope::A, Scope::B}) {
        const double ie = entropic_information_content(inst.population, *z, s);
        const double iv = information_content(inst.population, *z, s);
        c.expect(ie <= iv + 1e-12, [&] {
          return fmt::format("seed {} {}: I_ent {} > I {}", seed, z->name(), ie, iv);
        });
      }
    }
  }
  // Pinsker sandwich against p*.
  std::size_t sandwiches = 0;
  for (double alpha : {0.1, 0.25}) {
    std::size_t found = 0;
    for (std::uint64_t seed = 1; found < 200 && seed < 100000; ++seed) {
      GeneratorParams params;
      params.seed = seed + (alpha < 0.2 ? 10000 : 20000);
      params.cells_per_group = 5;
      const Population pop = random_population(params);
      const Predictor z =
          random_calibrated_predictor(pop, 1 + seed % 4, seed, Partition::Whole, "z");
      bool ok = true;
      for (double v : z.support()) {
        ok = ok && (v == 0.0 || v == 1.0 || (v >= alpha && v <= 1.0 - alpha));
      }
      if (!ok) continue;
      ++found;
      const Predictor ps = Predictor::p_star(pop);
      const double l = information_loss(pop, ps, z, Scope::All);
      const double le = 2.0 * std::log(2.0) * entropic_information_loss(pop, ps, z, Scope::All);
      c.expect(l <= le + 1e-12 && le <= l / alpha + 1e-12, [&] {
        return fmt::format("alpha {} seed {}: L {} 2ln2 L_ent {} L/alpha {}", alpha, seed, l, le,
                           l / alpha);
      });
      ++sandwiches;
    }
    c.expect(found == 200, [&] { return fmt::format("alpha {}: only {} instances", alpha, found); });
  }
  // Expected log-likelihood, analytically and by simulation.
  std::size_t within = 0;
  std::size_t trials = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto inst = suite_instance(seed);
    const Population& pop = inst.population;
    double analytic = 0.0;
    for (std::size_t i = 0; i < pop.size(); ++i) {
      const double p = pop.cell(i).p_star;
      const double v = inst.z.score(i);
      const double pos = p > 0.0 ? p * std::log2(v) : 0.0;
      const double neg = p < 1.0 ? (1.0 - p) * std::log2(1.0 - v) : 0.0;
      analytic += pop.cell(i).mass * (pos + neg);
    }
    const double lib = expected_log_likelihood(pop, inst.z, Scope::All);
    const double ient = entropic_information_content(pop, inst.z, Scope::All);
    c.expect(std::fabs(analytic - (ient - 1.0)) <= 1e-10 && std::fabs(lib - analytic) <= 1e-10,
             [&] {
               return fmt::format("seed {}: E[ll] {} lib {} I_ent - 1 {}", seed, analytic, lib,
                                  ient - 1.0);
             });
  }
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto inst = suite_instance(seed);
    const auto draws = draw_samples(inst.population, 1000000, seed + 77);
    const auto est = empirical_log_likelihood(inst.z, draws);
    const double target = entropic_information_content(inst.population, inst.z, Scope::All) - 1.0;
    ++trials;
    const bool close = std::fabs(est.mean - target) <= 3.0 * est.standard_error;
    if (close) ++within;
    c.expect(close, [&] {
      return fmt::format("seed {}: MC mean {} vs {} (se {})", seed, est.mean, target,
                         est.standard_error);
    });
  }
  return c.verdict(fmt::format("{} sandwiches, Monte-Carlo {}/{} within 3 se", sandwiches,
                               within, trials));
}

Verdict solvers() {
  Checks c;
  double worst = 0.0;
  std::size_t compared = 0;
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    GeneratorParams params;
    params.seed = seed + 30000;
    params.cells_per_group = 4;
    const Population pop = random_population(params);
    const Predictor z = random_calibrated_predictor(pop, 1 + seed % 3, seed);
    const auto profile = score_profile(pop, z);
    for (const auto& spec : spec_matrix(pop, z, seed)) {
      const auto lp = solve_optimization(profile, spec);
      const auto sweep = solve_by_sweep(profile, spec);
      c.expect(lp.status == sweep.status, [&] {
        return fmt::format("seed {} {}: LP {} sweep {}", seed, describe(spec),
                           to_string(lp.status), to_string(sweep.status));
      });
      if (lp.status != LpStatus::Optimal || sweep.status != LpStatus::Optimal) continue;
      ++compared;
      worst = std::max(worst, std::fabs(lp.value - sweep.value));
      c.expect(std::fabs(lp.value - sweep.value) <= 1e-7, [&] {
        return fmt::format("seed {} {}: LP {} sweep {}", seed, describe(spec), lp.value,
                           sweep.value);
      });
    }
  }
  double worst_vertex = 0.0;
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    const LinearProgram lp = testing::random_small_lp(seed);
    const auto s = solve(lp);
    const auto oracle = testing::vertex_enumeration(lp);
    c.expect((s.status == LpStatus::Optimal) == oracle.feasible,
             [&] { return fmt::format("LP seed {}: status disagrees", seed); });
    if (!oracle.feasible || s.status != LpStatus::Optimal) continue;
    worst_vertex = std::max(worst_vertex, std::fabs(s.objective_value - oracle.value));
    c.expect(std::fabs(s.objective_value - oracle.value) <= 1e-9, [&] {
      return fmt::format("LP seed {}: simplex {} vertices {}", seed, s.objective_value,
                         oracle.value);
    });
  }
  return c.verdict(fmt::format("{} optimal specs, worst LP-sweep gap {:.2g}; worst vertex gap {:.2g}",
                               compared, worst, worst_vertex));
}

Verdict groupwise() {
  const auto g = groupwise_loss_instance();
  const Population& pop = g.population;
  Checks c;
  c.expect(is_refinement(pop, g.z, g.z_prime, Scope::All, 1e-12).is_refinement,
           [] { return "overall refinement fails"; });
  c.expect(!is_refinement(pop, g.z, g.z_prime, Scope::A, 1e-12).is_refinement,
           [] { return "per-group refinement on A passes"; });
  c.expect(testing::refines(pop, g.z, g.z_prime, Scope::All) &&
               !testing::refines(pop, g.z, g.z_prime, Scope::A),
           [] { return "oracle disagrees"; });
  const Rational a = testing::information(pop, g.z, Scope::A);
  const Rational ap = testing::information(pop, g.z_prime, Scope::A);
  c.expect(ap < a, [&] { return fmt::format("I_A(z') {} not below I_A(z) {}", to_fraction_string(ap),
                                            to_fraction_string(a)); });
  return c.verdict(fmt::format("I_A(z) = {}, I_A(z') = {} (reconstructed instance)", to_fraction_string(a),
                               to_fraction_string(ap)));
}

Verdict cost_monotonicity() {
  Checks c;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto inst = suite_instance(seed + 40000);
    OptimizationSpec spec;
    spec.eps = 0.0;
    spec.t_i = 0.0;
    const auto a = cost_of_fairness(inst.population, inst.z, spec);
    const auto b = cost_of_fairness(inst.population, inst.z_prime, spec);
    c.expect(a.cost && b.cost, [&] { return fmt::format("seed {}: infeasible", seed); });
    if (!a.cost || !b.cost) continue;
    worst = std::min(worst, *a.cost - *b.cost);
    c.expect(*a.cost >= *b.cost - 1e-9, [&] {
      return fmt::format("seed {}: cost(z) {} < cost(z') {}", seed, *a.cost, *b.cost);
    });
  }
  return c.verdict(fmt::format("50 pairs, smallest cost(z) - cost(z') = {:.2g}", worst));
}

}  // namespace
}  // namespace infofair

int main() {
  using namespace infofair;
  const std::vector<Criterion> criteria = {
      {"tradeoff instance", 1.0, tradeoff},
      {"identity suite", 30.0, identities},
      {"rate-curve dominance", 0.0, dominance},
      {"improvement under refinement", 300.0, improvement},
      {"merge guarantee", 0.0, merge},
      {"sample bound", 120.0, samples},
      {"entropic bounds", 0.0, entropic_bounds},
      {"solver cross-validation", 0.0, solvers},
      {"group-wise information loss", 0.0, groupwise},
      {"cost-of-fairness monotonicity", 0.0, cost_monotonicity},
  };
  int failed = 0;
  for (const auto& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criterion.check();
    } catch (const std::exception& e) {
      v = {false, fmt::format("exception: {}", e.what())};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (criterion.budget_seconds > 0.0 && seconds > criterion.budget_seconds) {
      v.pass = false;
      v.detail += fmt::format("; over the {:.0f} s budget", criterion.budget_seconds);
    }
    if (!v.pass) ++failed;
    fmt::print("{} {:<32} {:7.2f}s  {}\n", v.pass ? "PASS" : "FAIL", criterion.name, seconds,
               v.detail);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
