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

#include "infofair/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "infofair/error.hpp"
#include "infofair/refinement.hpp"

namespace infofair {
namespace {

void check_unit(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) throw Error("argument", fmt::format("{} = {} is outside [0,1]", what, x));
}

std::vector<double> rule_column(const GroupProfile& g, const SelectionRule& rule) {
  std::vector<double> f;
  f.reserve(g.levels.size());
  for (const ScoreLevel& level : g.levels) {
    const auto entry = rule.get(g.group, level.value);
    if (!entry) {
      throw Error("rule-incomplete",
                  fmt::format("selection rule has no entry for score {} in group {}", level.value,
                              to_string(g.group)));
    }
    if (!(*entry >= 0.0 && *entry <= 1.0)) {
      throw Error("rule-range", fmt::format("selection probability {} for score {} in group {} "
                                            "is outside [0,1]",
                                            *entry, level.value, to_string(g.group)));
    }
    f.push_back(*entry);
  }
  return f;
}

std::vector<double> threshold_column(const GroupProfile& g, const ThresholdRule& rule) {
  std::vector<double> f;
  f.reserve(g.levels.size());
  for (const ScoreLevel& level : g.levels) f.push_back(rule.select(level.value));
  return f;
}

template <class Column>
PolicyStats evaluate_with(const ScoreProfile& profile, const ImpactParams& params, Column column) {
  params.validate();
  PolicyStats stats;
  for (Group g : kGroups) {
    if (!profile.has(g)) continue;
    const GroupProfile& gp = profile.group(g);
    const RateAtoms atoms = rate_atoms(gp, column(gp));
    stats.groups[index_of(g)] = group_stats(gp, atoms, params);
    stats.utility += gp.weight * (atoms.positives - params.tau_u * atoms.beta);
  }
  return stats;
}

}  // namespace

void ImpactParams::validate() const {
  check_unit(tau_u, "tau_u");
  check_unit(tau_l, "tau_l");
  if (risk_averse && !(tau_u > tau_l)) {
    throw Error("argument", fmt::format("risk aversion requires tau_u > tau_l (got {} and {})",
                                        tau_u, tau_l));
  }
}

std::optional<double> SelectionRule::get(Group g, double v) const {
  const auto& column = table[index_of(g)];
  const auto it = column.find(v);
  if (it == column.end()) return std::nullopt;
  return it->second;
}

const GroupProfile& ScoreProfile::group(Group g) const {
  if (!has(g)) {
    throw Error("empty-scope", fmt::format("group {} has no cells", to_string(g)));
  }
  return *groups[index_of(g)];
}

const GroupStats& PolicyStats::group(Group g) const {
  if (!groups[index_of(g)]) {
    throw Error("empty-scope", fmt::format("group {} has no cells", to_string(g)));
  }
  return *groups[index_of(g)];
}

ScoreProfile score_profile(const Population& pop, const Predictor& z, double tolerance) {
  z.validate(pop);
  ScoreProfile profile;
  profile.predictor = z.name();
  for (Group g : kGroups) {
    if (!pop.has_group(g)) continue;
    const Scope scope = scope_of(g);
    require_calibrated(pop, z, scope, tolerance);
    GroupProfile gp;
    gp.group = g;
    gp.weight = pop.mass(scope);
    gp.levels = score_distribution(pop, z, scope).entries;
    for (const ScoreLevel& level : gp.levels) gp.base_rate += level.mass * level.value;
    profile.groups[index_of(g)] = std::move(gp);
  }
  return profile;
}

SelectionRule to_selection_rule(const ScoreProfile& profile, const ThresholdPolicy& policy) {
  SelectionRule rule;
  for (Group g : kGroups) {
    if (!profile.has(g)) continue;
    for (const ScoreLevel& level : profile.group(g).levels) {
      rule.set(g, level.value, policy[g].select(level.value));
    }
  }
  return rule;
}

RateAtoms rate_atoms(const GroupProfile& g, std::span<const double> f) {
  RateAtoms atoms;
  for (std::size_t k = 0; k < g.levels.size(); ++k) {
    const double selected = g.levels[k].mass * f[k];
    atoms.beta += selected;
    atoms.positives += selected * g.levels[k].value;
    atoms.negatives += selected * (1.0 - g.levels[k].value);
  }
  return atoms;
}

GroupStats group_stats(const GroupProfile& g, const RateAtoms& atoms, const ImpactParams& params) {
  GroupStats s;
  s.group = g.group;
  s.beta = atoms.beta;
  s.base_rate = g.base_rate;
  s.weight = g.weight;
  if (g.base_rate > 0.0) s.tpr = atoms.positives / g.base_rate;
  if (g.base_rate < 1.0) s.fpr = atoms.negatives / (1.0 - g.base_rate);
  if (atoms.beta > 0.0) s.ppv = atoms.positives / atoms.beta;
  s.impact = atoms.positives - params.tau_l * atoms.beta;
  return s;
}

PolicyStats evaluate(const ScoreProfile& profile, const SelectionRule& rule,
                     const ImpactParams& params) {
  return evaluate_with(profile, params,
                       [&](const GroupProfile& g) { return rule_column(g, rule); });
}

PolicyStats evaluate(const ScoreProfile& profile, const ThresholdPolicy& policy,
                     const ImpactParams& params) {
  return evaluate_with(profile, params,
                       [&](const GroupProfile& g) { return threshold_column(g, policy[g.group]); });
}

PolicyStats evaluate(const Population& pop, const Predictor& z, const SelectionRule& rule,
                     const ImpactParams& params, double tolerance) {
  return evaluate(score_profile(pop, z, tolerance), rule, params);
}

PolicyStats evaluate(const Population& pop, const Predictor& z, const ThresholdPolicy& policy,
                     const ImpactParams& params, double tolerance) {
  return evaluate(score_profile(pop, z, tolerance), policy, params);
}

ThresholdRule threshold_for_rate(const GroupProfile& g, double beta) {
  // Rates summed from floating selections may overshoot by an ulp or two.
  if (beta > 1.0 && beta <= 1.0 + 1e-9) beta = 1.0;
  if (beta < 0.0 && beta >= -1e-9) beta = 0.0;
  check_unit(beta, "beta");
  if (beta == 0.0) return {1.0, 0.0};
  if (beta == 1.0) return {0.0, 1.0};
  double above = 0.0;  // Pr[z > current level]
  for (auto it = g.levels.rbegin(); it != g.levels.rend(); ++it) {
    if (beta <= above + it->mass) {
      return {it->value, std::clamp((beta - above) / it->mass, 0.0, 1.0)};
    }
    above += it->mass;
  }
  return {g.levels.front().value, 1.0};
}

ThresholdRule threshold_for_rate(const Population& pop, const Predictor& z, Group g, double beta) {
  return threshold_for_rate(score_profile(pop, z).group(g), beta);
}

std::vector<double> selection_at_rate(const GroupProfile& g, double beta) {
  return threshold_column(g, threshold_for_rate(g, beta));
}

RateAtoms atoms_at_rate(const GroupProfile& g, double beta) {
  return rate_atoms(g, selection_at_rate(g, beta));
}

double rate_for_positives(const GroupProfile& g, double positives) {
  if (positives <= 0.0) return 0.0;
  double beta = 0.0;
  double taken = 0.0;
  for (auto it = g.levels.rbegin(); it != g.levels.rend(); ++it) {
    const double gain = it->mass * it->value;
    if (gain > 0.0 && taken + gain >= positives) {
      return std::min(beta + std::clamp((positives - taken) / it->value, 0.0, it->mass), 1.0);
    }
    beta += it->mass;
    taken += gain;
  }
  return 1.0;
}

double rate_for_negatives(const GroupProfile& g, double negatives) {
  double beta = 0.0;
  double taken = 0.0;
  for (auto it = g.levels.rbegin(); it != g.levels.rend(); ++it) {
    const double cost = it->mass * (1.0 - it->value);
    if (taken + cost > negatives) {
      return std::min(beta + std::clamp((negatives - taken) / (1.0 - it->value), 0.0, it->mass),
                      1.0);
    }
    beta += it->mass;
    taken += cost;
  }
  return 1.0;
}

std::vector<double> breakpoints(const GroupProfile& g) {
  std::vector<double> out{0.0};
  double cumulative = 0.0;
  for (auto it = g.levels.rbegin(); it != g.levels.rend(); ++it) {
    cumulative += it->mass;
    out.push_back(std::min(cumulative, 1.0));
  }
  out.back() = 1.0;
  return out;
}

std::vector<double> uniform_grid(std::size_t n) {
  if (n < 2) throw Error("argument", "a grid needs at least two points");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

std::vector<double> merge_grids(std::initializer_list<std::span<const double>> grids) {
  std::vector<double> all;
  for (const auto& grid : grids) all.insert(all.end(), grid.begin(), grid.end());
  std::sort(all.begin(), all.end());
  std::vector<double> out;
  for (double x : all) {
    if (out.empty() || x - out.back() > 1e-13) out.push_back(x);
  }
  return out;
}

std::vector<CurvePoint> sweep_curves(const GroupProfile& g, std::span<const double> betas) {
  const ImpactParams neutral;
  std::vector<CurvePoint> rows;
  rows.reserve(betas.size());
  for (double beta : betas) {
    const GroupStats s = group_stats(g, atoms_at_rate(g, beta), neutral);
    rows.push_back({beta, s.tpr, s.fpr, s.ppv});
  }
  return rows;
}

std::vector<CurvePoint> sweep_curves(const Population& pop, const Predictor& z, Group g,
                                     std::span<const double> betas, double tolerance) {
  return sweep_curves(score_profile(pop, z, tolerance).group(g), betas);
}

std::vector<double> curve_grid(const GroupProfile& g, std::size_t points) {
  const auto grid = uniform_grid(points);
  const auto bp = breakpoints(g);
  return merge_grids({grid, bp});
}

DominanceReport dominance_check(const Population& pop, const Predictor& z,
                                const Predictor& z_prime, std::span<const Group> groups,
                                std::size_t points, double tolerance) {
  std::vector<Scope> scopes;
  for (Group g : groups) scopes.push_back(scope_of(g));
  require_refinement(pop, z, z_prime, scopes, tolerance);
  const ScoreProfile base = score_profile(pop, z, tolerance);
  const ScoreProfile refined = score_profile(pop, z_prime, tolerance);
  const ImpactParams neutral;

  DominanceReport report{z.name(), z_prime.name(), {}, true};
  for (Group g : groups) {
    const GroupProfile& gz = base.group(g);
    const GroupProfile& gr = refined.group(g);
    const auto grid = uniform_grid(points);
    const auto bz = breakpoints(gz);
    const auto br = breakpoints(gr);
    const auto betas = merge_grids({grid, bz, br});

    GroupDominance d;
    d.group = g;
    d.points = betas.size();
    d.worst_tpr = d.worst_fpr = d.worst_ppv = std::numeric_limits<double>::infinity();
    for (double beta : betas) {
      const GroupStats s = group_stats(gz, atoms_at_rate(gz, beta), neutral);
      const GroupStats t = group_stats(gr, atoms_at_rate(gr, beta), neutral);
      bool bad = false;
      const auto track = [&](double margin, double& worst) {
        worst = std::min(worst, margin);
        bad = bad || margin < -kDominanceTolerance;
      };
      if (s.tpr && t.tpr) track(*t.tpr - *s.tpr, d.worst_tpr);
      if (s.fpr && t.fpr) track(*s.fpr - *t.fpr, d.worst_fpr);
      if (s.ppv && t.ppv) track(*t.ppv - *s.ppv, d.worst_ppv);
      if (bad) ++d.violations;
    }
    for (double* worst : {&d.worst_tpr, &d.worst_fpr, &d.worst_ppv}) {
      if (std::isinf(*worst)) *worst = 0.0;
    }
    report.holds = report.holds && d.violations == 0;
    report.groups.push_back(d);
  }
  return report;
}

}  // namespace infofair
