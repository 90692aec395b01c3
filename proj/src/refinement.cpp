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

#include "infofair/refinement.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "infofair/detail/levels.hpp"
#include "infofair/detail/mean_predictor.hpp"
#include "infofair/error.hpp"

namespace infofair {
namespace {

int part_of(const Cell& c, Partition partition) {
  return partition == Partition::Whole ? 0 : 1 + static_cast<int>(c.group);
}

Scope scope_of_part(int part) {
  return part == 0 ? Scope::All : scope_of(static_cast<Group>(part - 1));
}

std::vector<Scope> present_scopes(const Population& pop, Partition partition) {
  std::vector<Scope> out;
  for (Scope s : scopes_of(partition)) {
    if (!pop.scope_cells(s).empty()) out.push_back(s);
  }
  return out;
}

std::vector<detail::CellKey> crossed_keys(const Population& pop, const Predictor& z,
                                          const Predictor& q, Partition partition) {
  std::vector<detail::CellKey> keys;
  keys.reserve(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) {
    keys.push_back({part_of(pop.cell(i), partition), z.score(i), q.score(i), 0});
  }
  return keys;
}

MergeScopeStats scope_stats(const Population& pop, const Predictor& z, const Predictor& q,
                            const Predictor& rho, Scope scope) {
  MergeScopeStats s;
  s.scope = scope;
  s.info_z = detail::information_content<double>(pop, z, scope);
  s.info_q = detail::information_content<double>(pop, q, scope);
  s.info_rho = detail::information_content<double>(pop, rho, scope);
  s.distance_q_z = detail::refinement_distance<double>(pop, q, z, scope);
  s.distance_z_q = detail::refinement_distance<double>(pop, z, q, scope);
  s.guaranteed_gain = std::max(s.info_z + 4.0 * s.distance_q_z * s.distance_q_z,
                               s.info_q + 4.0 * s.distance_z_q * s.distance_z_q);
  s.eta = std::min(s.distance_q_z, s.distance_z_q);
  return s;
}

MergeReport make_report(const Population& pop, const Predictor& z, const Predictor& q,
                        Predictor rho, Partition partition) {
  MergeReport report;
  report.z_name = z.name();
  report.q_name = q.name();
  report.partition = partition;
  const MergeScopeStats whole = scope_stats(pop, z, q, rho, Scope::All);
  report.info_before = {whole.info_z, whole.info_q};
  report.info_after = whole.info_rho;
  report.distances = {whole.distance_q_z, whole.distance_z_q};
  report.guaranteed_gain = whole.guaranteed_gain;
  report.eta = whole.eta;
  for (Scope s : present_scopes(pop, partition)) {
    report.per_scope.push_back(s == Scope::All ? whole : scope_stats(pop, z, q, rho, s));
  }
  report.result = std::move(rho);
  return report;
}

void check_inputs(const Population& pop, const Predictor& z, const Predictor& q) {
  z.validate(pop);
  q.validate(pop);
}

}  // namespace

RefinementCheck is_refinement(const Population& pop, const Predictor& z, const Predictor& z_prime,
                              Scope scope, double tolerance) {
  if (tolerance < 0.0) throw Error("argument", "refinement tolerance must be nonnegative");
  require_calibrated(pop, z, scope, tolerance);
  require_calibrated(pop, z_prime, scope, tolerance);
  RefinementCheck check{z.name(), z_prime.name(), scope, {}, 0.0, tolerance, false};
  for (const auto& l : detail::refinement_deviations<double>(pop, z, z_prime, scope)) {
    check.per_level.push_back({l.value, l.mass, l.mean, l.deviation});
    check.max_deviation = std::max(check.max_deviation, l.deviation);
  }
  check.is_refinement = check.max_deviation <= tolerance;
  return check;
}

void require_refinement(const Population& pop, const Predictor& z, const Predictor& z_prime,
                        std::span<const Scope> scopes, double tolerance) {
  for (Scope s : scopes) {
    const auto check = is_refinement(pop, z, z_prime, s, tolerance);
    if (!check.is_refinement) {
      throw Error("not-refinement",
                  fmt::format("\"{}\" does not refine \"{}\" on scope {}: max deviation {:.6g}",
                              z_prime.name(), z.name(), to_string(s), check.max_deviation));
    }
  }
}

double refinement_distance(const Population& pop, const Predictor& z, const Predictor& q,
                           Scope scope, double tolerance) {
  require_calibrated(pop, z, scope, tolerance);
  require_calibrated(pop, q, scope, tolerance);
  return detail::refinement_distance<double>(pop, z, q, scope);
}

namespace exact {

Rational refinement_distance(const Population& pop, const Predictor& z, const Predictor& q,
                             Scope scope) {
  return detail::refinement_distance<Rational>(pop, z, q, scope);
}

bool is_refinement(const Population& pop, const Predictor& z, const Predictor& z_prime,
                   Scope scope) {
  return detail::max_deviation(
             detail::refinement_deviations<Rational>(pop, z, z_prime, scope)) == 0;
}

}  // namespace exact

SampleBudget SampleBudget::from_bound(double alpha, double gamma, double delta) {
  SampleBudget b;
  b.alpha = alpha;
  b.gamma = gamma;
  b.delta = delta;
  if (!(alpha > 0.0 && alpha < 1.0 && gamma > 0.0 && gamma < 1.0 && delta > 0.0 &&
        delta < 1.0)) {
    throw Error("budget", "alpha, gamma and delta must lie in (0,1)");
  }
  const double t = std::ceil(std::log(2.0 / (delta * alpha * alpha)) / (alpha * alpha));
  b.per_cell = static_cast<std::size_t>(t);
  b.m = static_cast<std::size_t>(std::ceil(t * std::log(2.0 * t / delta) / gamma));
  return b;
}

void SampleBudget::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0 && gamma > 0.0 && gamma < 1.0 && delta > 0.0 &&
        delta < 1.0)) {
    throw Error("budget", "alpha, gamma and delta must lie in (0,1)");
  }
  if (m < 1) throw Error("budget", "sample count m must be at least 1");
}

std::string default_merge_name(const Predictor& z, const Predictor& q) {
  return fmt::format("merge({},{})", z.name(), q.name());
}

MergeReport merge_oracle(const Population& pop, const Predictor& z, const Predictor& q,
                         Partition partition, std::string name, double tolerance) {
  check_inputs(pop, z, q);
  for (Scope s : present_scopes(pop, partition)) {
    require_calibrated(pop, z, s, tolerance);
    require_calibrated(pop, q, s, tolerance);
  }
  if (name.empty()) name = default_merge_name(z, q);
  Predictor rho = detail::mean_predictor(pop, std::move(name), crossed_keys(pop, z, q, partition));
  return make_report(pop, z, q, std::move(rho), partition);
}

MergeReport merge_from_samples(const Population& pop, const Predictor& z, const Predictor& q,
                               std::span<const Sample> samples, const SampleBudget& budget,
                               Partition partition, std::string name) {
  check_inputs(pop, z, q);
  budget.validate();
  const auto keys = crossed_keys(pop, z, q, partition);

  struct Tally {
    double mass = 0.0;
    std::size_t count = 0;
    std::size_t positives = 0;
  };
  std::map<detail::CellKey, Tally> tallies;
  for (std::size_t i = 0; i < pop.size(); ++i) tallies[keys[i]].mass += pop.cell(i).mass;
  for (const Sample& s : samples) {
    if (s.cell >= pop.size()) throw Error("argument", "sample refers to a cell out of range");
    Tally& t = tallies[keys[s.cell]];
    ++t.count;
    t.positives += s.y != 0 ? 1 : 0;
  }

  std::map<detail::CellKey, double> snapped;
  std::vector<CrossedCellEstimate> estimates;
  for (const auto& [key, t] : tallies) {
    const Scope scope = scope_of_part(key.part);
    if (t.count == 0) {
      throw Error("undersampled",
                  fmt::format("crossed cell (scope {}, z = {}, q = {}) received no samples; "
                              "raise m or gamma",
                              to_string(scope), key.first, key.second));
    }
    const double mean = static_cast<double>(t.positives) / static_cast<double>(t.count);
    const double value = snap_to_grid(mean, budget.alpha);
    snapped.emplace(key, value);
    estimates.push_back({scope, key.first, key.second, t.mass, t.count, mean, value});
  }

  std::vector<double> scores;
  scores.reserve(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) scores.push_back(snapped.at(keys[i]));
  if (name.empty()) name = default_merge_name(z, q);
  Predictor rho = Predictor::from_scores(std::move(name), std::move(scores), budget.alpha);

  MergeReport report = make_report(pop, z, q, std::move(rho), partition);
  report.budget = budget;
  report.estimates = std::move(estimates);
  report.samples_used = samples.size();
  return report;
}

MergeReport merge_from_samples(const Population& pop, const Predictor& z, const Predictor& q,
                               const SampleBudget& budget, std::uint64_t seed,
                               Partition partition, std::string name) {
  budget.validate();
  const auto samples = draw_samples(pop, budget.m, seed);
  return merge_from_samples(pop, z, q, samples, budget, partition, std::move(name));
}

double min_crossed_density(const Population& pop, const Predictor& z, const Predictor& q,
                           Partition partition) {
  std::map<detail::CellKey, double> mass;
  const auto keys = crossed_keys(pop, z, q, partition);
  for (std::size_t i = 0; i < pop.size(); ++i) mass[keys[i]] += pop.cell(i).mass;
  double lowest = 1.0;
  for (const auto& [key, m] : mass) lowest = std::min(lowest, m);
  return lowest;
}

Predictor feature_predictor(const Population& pop, const CellFeature& phi, Partition partition,
                            std::string name) {
  std::vector<detail::CellKey> keys;
  keys.reserve(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) {
    keys.push_back({part_of(pop.cell(i), partition), phi(pop.cell(i)) ? 1.0 : 0.0, 0.0, 0});
  }
  return detail::mean_predictor(pop, std::move(name), keys);
}

double feature_informativeness(const Population& pop, const CellFeature& phi, Scope scope) {
  std::vector<std::size_t> on;
  std::vector<std::size_t> off;
  for (std::size_t i : detail::nonempty_scope(pop, scope)) {
    (phi(pop.cell(i)) ? on : off).push_back(i);
  }
  if (on.empty() || off.empty()) return 0.0;
  return std::fabs(detail::mean_p_star<double>(pop, on) - detail::mean_p_star<double>(pop, off));
}

EtaMergeSummary count_eta_merges(std::span<const MergeReport> history, double eta) {
  EtaMergeSummary summary;
  summary.eta = eta;
  if (eta <= 0.0) return summary;
  summary.bound = static_cast<std::size_t>(std::ceil(1.0 / (4.0 * eta * eta))) + 1;
  for (std::size_t k = 0; k < history.size(); ++k) {
    const MergeReport& r = history[k];
    if (r.eta < eta) continue;
    ++summary.count;
    if (r.info_after - r.info_before.first < 4.0 * eta * eta - 1e-10) {
      summary.gain_violations.push_back(k);
    }
  }
  summary.within_bound = summary.count <= summary.bound;
  return summary;
}

}  // namespace infofair
