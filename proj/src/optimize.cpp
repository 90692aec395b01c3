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

#include "infofair/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "infofair/error.hpp"
#include "infofair/refinement.hpp"

namespace infofair {
namespace {

constexpr double kFeasibilityTolerance = 1e-9;

// What the LP optimizes and which of the spec's constraints it keeps; the
// diagnostics re-solve with one constraint turned into the goal.
enum class Goal { Spec, MaxUtility, MaxImpact, MinDisparity };

struct Constraints {
  bool impact_floor = false;
  bool utility_floor = false;
  bool parity = false;
};

Constraints constraints_of(Objective o) {
  switch (o) {
    case Objective::UtilityMax:
      return {true, false, true};
    case Objective::DisparityMin:
      return {true, true, false};
    case Objective::ImpactMax:
      return {false, true, true};
    case Objective::WeightedCombo:
      return {false, false, false};
  }
  return {};
}

void require_pair(const ScoreProfile& profile, FairnessMetric h) {
  if (!profile.has(Group::A) || !profile.has(Group::B)) {
    throw Error("needs-two-groups", "fairness-constrained optimization needs both groups A and B");
  }
  for (Group g : kGroups) {
    const double r = profile.group(g).base_rate;
    if (h == FairnessMetric::TPR && r <= 0.0) {
      throw Error("degenerate-rate",
                  fmt::format("TPR is undefined on group {}: its base rate is 0", to_string(g)));
    }
    if (h == FairnessMetric::FPR && r >= 1.0) {
      throw Error("degenerate-rate",
                  fmt::format("FPR is undefined on group {}: its base rate is 1", to_string(g)));
    }
  }
}

double h_coefficient(const GroupProfile& g, const ScoreLevel& level, FairnessMetric h) {
  switch (h) {
    case FairnessMetric::SelectionRate:
      return level.mass;
    case FairnessMetric::TPR:
      return level.mass * level.value / g.base_rate;
    case FairnessMetric::FPR:
      return level.mass * (1.0 - level.value) / (1.0 - g.base_rate);
  }
  return 0.0;
}

BuiltLp assemble(const ScoreProfile& profile, const OptimizationSpec& spec, Goal goal,
                 Constraints keep) {
  spec.validate();
  require_pair(profile, spec.fairness_metric);
  const ImpactParams& ip = spec.impact_params;
  BuiltLp built;
  LinearProgram& lp = built.lp;

  std::vector<double> utility;
  std::vector<double> impact;
  std::vector<double> diff;  // h_A - h_B
  for (Group g : kGroups) {
    const GroupProfile& gp = profile.group(g);
    for (const ScoreLevel& level : gp.levels) {
      built.layout.f[index_of(g)].push_back(lp.add_variable(
          fmt::format("f({:.6g},{})", level.value, to_string(g)), 0.0, 1.0));
      utility.push_back(gp.weight * level.mass * (level.value - ip.tau_u));
      impact.push_back(g == Group::B ? level.mass * (level.value - ip.tau_l) : 0.0);
      const double hc = h_coefficient(gp, level, spec.fairness_metric);
      diff.push_back(g == Group::A ? hc : -hc);
    }
  }
  const bool needs_t = goal == Goal::MinDisparity ||
                       (goal == Goal::Spec && (spec.objective == Objective::DisparityMin ||
                                               spec.objective == Objective::WeightedCombo));
  if (needs_t) {
    built.layout.t = lp.add_variable("t", 0.0, 1.0);
    utility.push_back(0.0);
    impact.push_back(0.0);
    diff.push_back(0.0);
    std::vector<double> up = diff;
    std::vector<double> down = diff;
    for (double& x : down) x = -x;
    up[*built.layout.t] = -1.0;
    down[*built.layout.t] = -1.0;
    lp.add_constraint("t >= h_A - h_B", up, Relation::LessEqual, 0.0);
    lp.add_constraint("t >= h_B - h_A", down, Relation::LessEqual, 0.0);
  }
  if (keep.impact_floor) lp.add_constraint("Imp_B >= t_i", impact, Relation::GreaterEqual, spec.t_i);
  if (keep.utility_floor) lp.add_constraint("U >= t_u", utility, Relation::GreaterEqual, spec.t_u);
  if (keep.parity) {
    std::vector<double> negated = diff;
    for (double& x : negated) x = -x;
    lp.add_constraint("h_A - h_B <= eps", diff, Relation::LessEqual, spec.eps);
    lp.add_constraint("h_B - h_A <= eps", negated, Relation::LessEqual, spec.eps);
  }

  switch (goal) {
    case Goal::MaxUtility:
      lp.objective = utility;
      break;
    case Goal::MaxImpact:
      lp.objective = impact;
      break;
    case Goal::MinDisparity:
      lp.sense = Sense::Minimize;
      lp.objective.assign(lp.variables.size(), 0.0);
      lp.objective[*built.layout.t] = 1.0;
      break;
    case Goal::Spec:
      switch (spec.objective) {
        case Objective::UtilityMax:
          lp.objective = utility;
          break;
        case Objective::ImpactMax:
          lp.objective = impact;
          break;
        case Objective::DisparityMin:
          lp.sense = Sense::Minimize;
          lp.objective.assign(lp.variables.size(), 0.0);
          lp.objective[*built.layout.t] = 1.0;
          break;
        case Objective::WeightedCombo:
          lp.objective.assign(lp.variables.size(), 0.0);
          for (std::size_t j = 0; j < lp.variables.size(); ++j) {
            lp.objective[j] = spec.lambda_u * utility[j] + spec.lambda_i * impact[j];
          }
          lp.objective[*built.layout.t] = -spec.lambda_beta;
          break;
      }
      break;
  }
  return built;
}

std::vector<InfeasibilityDiagnostic> diagnose(const ScoreProfile& profile,
                                              const OptimizationSpec& spec) {
  const Constraints all = constraints_of(spec.objective);
  std::vector<InfeasibilityDiagnostic> out;
  const auto probe = [&](Goal goal, Constraints keep) {
    const auto sol = solve(assemble(profile, spec, goal, keep).lp);
    return sol.status == LpStatus::Optimal ? std::optional<double>(sol.objective_value)
                                           : std::nullopt;
  };
  if (all.utility_floor) {
    Constraints keep = all;
    keep.utility_floor = false;
    const auto best = probe(Goal::MaxUtility, keep);
    if (!best || *best < spec.t_u - kFeasibilityTolerance) {
      out.push_back({"t_u", spec.t_u, best,
                     best ? fmt::format("utility floor t_u = {} is unreachable: the largest "
                                        "achievable utility is {:.12g}",
                                        spec.t_u, *best)
                          : std::string("utility floor cannot be tested: the remaining "
                                        "constraints are already infeasible")});
    }
  }
  if (all.impact_floor) {
    Constraints keep = all;
    keep.impact_floor = false;
    const auto best = probe(Goal::MaxImpact, keep);
    if (!best || *best < spec.t_i - kFeasibilityTolerance) {
      out.push_back({"t_i", spec.t_i, best,
                     best ? fmt::format("impact floor t_i = {} is unreachable: the largest "
                                        "achievable Imp_B is {:.12g}",
                                        spec.t_i, *best)
                          : std::string("impact floor cannot be tested: the remaining "
                                        "constraints are already infeasible")});
    }
  }
  if (all.parity) {
    Constraints keep = all;
    keep.parity = false;
    const auto best = probe(Goal::MinDisparity, keep);
    if (!best || *best > spec.eps + kFeasibilityTolerance) {
      out.push_back({"eps", spec.eps, best,
                     best ? fmt::format("parity bound eps = {} is unreachable: the smallest "
                                        "achievable disparity is {:.12g}",
                                        spec.eps, *best)
                          : std::string("parity bound cannot be tested: the remaining "
                                        "constraints are already infeasible")});
    }
  }
  // Once some bound is shown unreachable, the untestable ones add nothing.
  if (std::any_of(out.begin(), out.end(), [](const auto& d) { return d.best_achievable; })) {
    std::erase_if(out, [](const auto& d) { return !d.best_achievable; });
  }
  if (out.empty()) {
    out.push_back({"combination", 0.0, std::nullopt,
                   "each constraint is attainable alone but not all of them together"});
  }
  return out;
}

bool no_worse(const OptimizationSpec& spec, double candidate, double reference, double tol) {
  return maximizes(spec.objective) ? candidate >= reference - tol : candidate <= reference + tol;
}

// Rate of the threshold policy on g that matches h on the selected atoms.
double matched_rate(const GroupProfile& g, const RateAtoms& atoms, FairnessMetric h) {
  switch (h) {
    case FairnessMetric::SelectionRate:
      return std::clamp(atoms.beta, 0.0, 1.0);
    case FairnessMetric::TPR:
      return rate_for_positives(g, atoms.positives);
    case FairnessMetric::FPR:
      return rate_for_negatives(g, atoms.negatives);
  }
  return 0.0;
}

ThresholdPolicy policy_at_rates(const ScoreProfile& profile, double beta_a, double beta_b) {
  ThresholdPolicy policy;
  policy[Group::A] = threshold_for_rate(profile.group(Group::A), beta_a);
  policy[Group::B] = threshold_for_rate(profile.group(Group::B), beta_b);
  return policy;
}

std::vector<double> column(const GroupProfile& g, const SelectionRule& rule) {
  std::vector<double> f;
  for (const ScoreLevel& level : g.levels) f.push_back(*rule.get(g.group, level.value));
  return f;
}

// Affine pieces of one group's curves in beta: on [start, end], the
// threshold is at `value` and positives = p0 + value (beta - start).
struct Segment {
  double start = 0.0;
  double end = 0.0;
  double value = 0.0;
  double positives = 0.0;
  double negatives = 0.0;
};

std::vector<Segment> segments(const GroupProfile& g) {
  std::vector<Segment> out;
  double beta = 0.0;
  double pos = 0.0;
  double neg = 0.0;
  for (auto it = g.levels.rbegin(); it != g.levels.rend(); ++it) {
    out.push_back({beta, std::min(beta + it->mass, 1.0), it->value, pos, neg});
    beta += it->mass;
    pos += it->mass * it->value;
    neg += it->mass * (1.0 - it->value);
  }
  out.back().end = 1.0;
  return out;
}

// h_S on a segment as intercept + slope * beta.
std::pair<double, double> h_affine(const GroupProfile& g, const Segment& s, FairnessMetric h) {
  switch (h) {
    case FairnessMetric::SelectionRate:
      return {0.0, 1.0};
    case FairnessMetric::TPR:
      return {(s.positives - s.value * s.start) / g.base_rate, s.value / g.base_rate};
    case FairnessMetric::FPR:
      return {(s.negatives - (1.0 - s.value) * s.start) / (1.0 - g.base_rate),
              (1.0 - s.value) / (1.0 - g.base_rate)};
  }
  return {0.0, 0.0};
}

struct Line {
  double a, b, c;  // a x + b y = c
};

}  // namespace

std::string_view to_string(Objective o) {
  switch (o) {
    case Objective::UtilityMax:
      return "utility";
    case Objective::DisparityMin:
      return "disparity";
    case Objective::ImpactMax:
      return "impact";
    case Objective::WeightedCombo:
      return "combo";
  }
  return "?";
}

std::string_view to_string(FairnessMetric h) {
  switch (h) {
    case FairnessMetric::SelectionRate:
      return "beta";
    case FairnessMetric::TPR:
      return "tpr";
    case FairnessMetric::FPR:
      return "fpr";
  }
  return "?";
}

Objective parse_objective(std::string_view text) {
  if (text == "utility" || text == "UtilityMax") return Objective::UtilityMax;
  if (text == "disparity" || text == "DisparityMin") return Objective::DisparityMin;
  if (text == "impact" || text == "ImpactMax") return Objective::ImpactMax;
  if (text == "combo" || text == "WeightedCombo") return Objective::WeightedCombo;
  throw Error("parse", fmt::format("unknown objective \"{}\" (expected utility, disparity, "
                                   "impact or combo)",
                                   text));
}

FairnessMetric parse_fairness_metric(std::string_view text) {
  if (text == "beta" || text == "SelectionRate") return FairnessMetric::SelectionRate;
  if (text == "tpr" || text == "TPR") return FairnessMetric::TPR;
  if (text == "fpr" || text == "FPR") return FairnessMetric::FPR;
  throw Error("parse",
              fmt::format("unknown fairness metric \"{}\" (expected beta, tpr or fpr)", text));
}

void OptimizationSpec::validate() const {
  impact_params.validate();
  if (!(eps >= 0.0)) throw Error("argument", fmt::format("eps must be nonnegative (got {})", eps));
  if (!(lambda_u >= 0.0 && lambda_i >= 0.0 && lambda_beta >= 0.0)) {
    throw Error("argument", "lambda weights must be nonnegative");
  }
  if (!std::isfinite(t_i) || !std::isfinite(t_u)) {
    throw Error("argument", "floors t_i and t_u must be finite");
  }
}

std::string describe(const OptimizationSpec& spec) {
  return fmt::format("{}/{} eps={} t_i={} t_u={} tau_u={} tau_l={} lambda=({},{},{})",
                     to_string(spec.objective), to_string(spec.fairness_metric), spec.eps,
                     spec.t_i, spec.t_u, spec.impact_params.tau_u, spec.impact_params.tau_l,
                     spec.lambda_u, spec.lambda_i, spec.lambda_beta);
}

double fairness_value(const GroupStats& s, FairnessMetric h) {
  switch (h) {
    case FairnessMetric::SelectionRate:
      return s.beta;
    case FairnessMetric::TPR:
      if (!s.tpr) throw Error("degenerate-rate", "TPR undefined for a group with base rate 0");
      return *s.tpr;
    case FairnessMetric::FPR:
      if (!s.fpr) throw Error("degenerate-rate", "FPR undefined for a group with base rate 1");
      return *s.fpr;
  }
  return 0.0;
}

double disparity(const PolicyStats& stats, FairnessMetric h) {
  return std::fabs(fairness_value(stats.group(Group::A), h) -
                   fairness_value(stats.group(Group::B), h));
}

double objective_value(const OptimizationSpec& spec, const PolicyStats& stats) {
  switch (spec.objective) {
    case Objective::UtilityMax:
      return stats.utility;
    case Objective::DisparityMin:
      return disparity(stats, spec.fairness_metric);
    case Objective::ImpactMax:
      return stats.group(Group::B).impact;
    case Objective::WeightedCombo:
      return spec.lambda_u * stats.utility + spec.lambda_i * stats.group(Group::B).impact -
             spec.lambda_beta * disparity(stats, spec.fairness_metric);
  }
  return 0.0;
}

double constraint_violation(const OptimizationSpec& spec, const PolicyStats& stats) {
  const Constraints c = constraints_of(spec.objective);
  double worst = 0.0;
  if (c.impact_floor) worst = std::max(worst, spec.t_i - stats.group(Group::B).impact);
  if (c.utility_floor) worst = std::max(worst, spec.t_u - stats.utility);
  if (c.parity) worst = std::max(worst, disparity(stats, spec.fairness_metric) - spec.eps);
  return worst;
}

BuiltLp build_lp(const ScoreProfile& profile, const OptimizationSpec& spec) {
  return assemble(profile, spec, Goal::Spec, constraints_of(spec.objective));
}

BuiltLp build_lp(const Population& pop, const Predictor& z, const OptimizationSpec& spec) {
  pop.require_two_groups();
  return build_lp(score_profile(pop, z), spec);
}

OptimizationResult solve_optimization(const ScoreProfile& profile, const OptimizationSpec& spec) {
  const BuiltLp built = build_lp(profile, spec);
  const LpSolution sol = solve(built.lp);
  OptimizationResult result;
  result.spec = spec;
  result.predictor = profile.predictor;
  result.status = sol.status;
  if (sol.status != LpStatus::Optimal) {
    if (sol.status == LpStatus::Infeasible) result.diagnostics = diagnose(profile, spec);
    return result;
  }

  for (Group g : kGroups) {
    const GroupProfile& gp = profile.group(g);
    for (std::size_t k = 0; k < gp.levels.size(); ++k) {
      const double f = std::clamp(sol.values[built.layout.f[index_of(g)][k]], 0.0, 1.0);
      result.rule.set(g, gp.levels[k].value, f);
    }
  }
  result.stats = evaluate(profile, result.rule, spec.impact_params);
  result.value = objective_value(spec, result.stats);

  // A threshold policy matching h per group is feasible and no worse.
  double rates[2];
  for (Group g : kGroups) {
    const GroupProfile& gp = profile.group(g);
    rates[index_of(g)] = matched_rate(gp, rate_atoms(gp, column(gp, result.rule)),
                                      spec.fairness_metric);
  }
  const ThresholdPolicy policy = policy_at_rates(profile, rates[0], rates[1]);
  PolicyStats tstats = evaluate(profile, policy, spec.impact_params);
  if (constraint_violation(spec, tstats) <= kFeasibilityTolerance &&
      no_worse(spec, objective_value(spec, tstats), result.value, kFeasibilityTolerance)) {
    result.as_threshold = policy;
    result.threshold_stats = std::move(tstats);
  }
  return result;
}

OptimizationResult solve_optimization(const Population& pop, const Predictor& z,
                                      const OptimizationSpec& spec) {
  pop.require_two_groups();
  return solve_optimization(score_profile(pop, z), spec);
}

OptimizationResult solve_by_sweep(const ScoreProfile& profile, const OptimizationSpec& spec,
                                  std::size_t points) {
  spec.validate();
  require_pair(profile, spec.fairness_metric);
  const GroupProfile& ga = profile.group(Group::A);
  const GroupProfile& gb = profile.group(Group::B);
  const ImpactParams& ip = spec.impact_params;

  OptimizationResult best;
  best.spec = spec;
  best.predictor = profile.predictor;
  best.status = LpStatus::Infeasible;
  double best_a = 0.0;
  double best_b = 0.0;

  const auto consider = [&](double x, double y) {
    x = std::clamp(x, 0.0, 1.0);
    y = std::clamp(y, 0.0, 1.0);
    const PolicyStats stats = evaluate(profile, policy_at_rates(profile, x, y), ip);
    if (constraint_violation(spec, stats) > kFeasibilityTolerance) return;
    const double value = objective_value(spec, stats);
    bool take = best.status != LpStatus::Optimal;
    if (!take) {
      const double gain = maximizes(spec.objective) ? value - best.value : best.value - value;
      take = gain > 1e-12 ||
             (gain >= -1e-12 && (y < best_b || (y == best_b && x < best_a)));
    }
    if (take) {
      best.status = LpStatus::Optimal;
      best.value = value;
      best.stats = stats;
      best_a = x;
      best_b = y;
    }
  };

  const auto grid = uniform_grid(points);
  const auto bpa = breakpoints(ga);
  const auto bpb = breakpoints(gb);
  const auto xs = merge_grids({grid, bpa});
  const auto ys = merge_grids({grid, bpb});
  for (double y : ys) {
    for (double x : xs) consider(x, y);
  }

  // Vertices of the feasible region within each cell of affine pieces.
  const auto sa = segments(ga);
  const auto sb = segments(gb);
  for (const Segment& a : sa) {
    const auto [ha0, ha1] = h_affine(ga, a, spec.fairness_metric);
    for (const Segment& b : sb) {
      const auto [hb0, hb1] = h_affine(gb, b, spec.fairness_metric);
      std::vector<Line> lines = {{1, 0, a.start}, {1, 0, a.end}, {0, 1, b.start}, {0, 1, b.end}};
      // h_A - h_B = ha0 + ha1 x - hb0 - hb1 y
      for (double level : {spec.eps, -spec.eps, 0.0}) {
        lines.push_back({ha1, -hb1, level - ha0 + hb0});
      }
      // U = wA (pA + vA (x - sA) - tau_u x) + wB (...)
      const double ua = ga.weight * (a.value - ip.tau_u);
      const double ub = gb.weight * (b.value - ip.tau_u);
      const double u0 = ga.weight * (a.positives - a.value * a.start) +
                        gb.weight * (b.positives - b.value * b.start);
      lines.push_back({ua, ub, spec.t_u - u0});
      lines.push_back({0, b.value - ip.tau_l, spec.t_i - (b.positives - b.value * b.start)});
      for (std::size_t i = 0; i < lines.size(); ++i) {
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
          const Line& p = lines[i];
          const Line& q = lines[j];
          const double det = p.a * q.b - p.b * q.a;
          if (std::fabs(det) < 1e-14) continue;
          const double x = (p.c * q.b - p.b * q.c) / det;
          const double y = (p.a * q.c - p.c * q.a) / det;
          constexpr double slack = 1e-12;
          if (x < a.start - slack || x > a.end + slack || y < b.start - slack ||
              y > b.end + slack) {
            continue;
          }
          consider(std::clamp(x, a.start, a.end), std::clamp(y, b.start, b.end));
        }
      }
    }
  }

  if (best.status == LpStatus::Optimal) {
    const ThresholdPolicy policy = policy_at_rates(profile, best_a, best_b);
    best.as_threshold = policy;
    best.rule = to_selection_rule(profile, policy);
    best.threshold_stats = best.stats;
  } else {
    best.diagnostics = diagnose(profile, spec);
  }
  return best;
}

OptimizationResult solve_by_sweep(const Population& pop, const Predictor& z,
                                  const OptimizationSpec& spec, std::size_t points) {
  pop.require_two_groups();
  return solve_by_sweep(score_profile(pop, z), spec, points);
}

CostOfFairness cost_of_fairness(const Population& pop, const Predictor& z,
                                const OptimizationSpec& spec, bool p_star_available) {
  if (spec.objective != Objective::UtilityMax) {
    throw Error("argument", "cost of fairness is defined for the utility-maximization program");
  }
  const OptimizationResult r = solve_optimization(pop, z, spec);
  CostOfFairness out;
  out.status = r.status;
  out.opt = r.value;
  out.p_star_available = p_star_available;
  if (!p_star_available) return out;
  double u_star = 0.0;
  for (const Cell& c : pop.cells()) {
    u_star += c.mass * std::max(c.p_star - spec.impact_params.tau_u, 0.0);
  }
  out.u_star = u_star;
  if (r.status == LpStatus::Optimal) out.cost = u_star - r.value;
  return out;
}

ImprovementWitness improvement_witness(const ScoreProfile& base, const ScoreProfile& refined,
                                       const OptimizationSpec& spec, const ThresholdPolicy& f) {
  const ImpactParams& ip = spec.impact_params;
  const PolicyStats before = evaluate(base, f, ip);
  ImprovementWitness w;
  for (Group g : kGroups) {
    const GroupStats& s = before.group(g);
    const GroupProfile& gr = refined.group(g);
    w.beta[index_of(g)] = s.beta;
    w.h[index_of(g)] = fairness_value(s, spec.fairness_metric);
    double rate = s.beta;
    if (spec.fairness_metric == FairnessMetric::TPR) {
      rate = rate_for_positives(gr, *s.tpr * gr.base_rate);
    } else if (spec.fairness_metric == FairnessMetric::FPR) {
      rate = rate_for_negatives(gr, *s.fpr * (1.0 - gr.base_rate));
    }
    w.beta_prime[index_of(g)] = rate;
  }
  const PolicyStats after =
      evaluate(refined, policy_at_rates(refined, w.beta_prime[0], w.beta_prime[1]), ip);
  bool same_h = true;
  for (Group g : kGroups) {
    w.h_prime[index_of(g)] = fairness_value(after.group(g), spec.fairness_metric);
    same_h = same_h && std::fabs(w.h_prime[index_of(g)] - w.h[index_of(g)]) <= kWitnessTolerance;
  }
  w.utility = before.utility;
  w.utility_prime = after.utility;
  w.impact_b = before.group(Group::B).impact;
  w.impact_b_prime = after.group(Group::B).impact;
  w.holds = same_h && w.utility_prime >= w.utility - kWitnessTolerance &&
            w.impact_b_prime >= w.impact_b - kWitnessTolerance;
  return w;
}

ImprovementReport verify_improvement(const Population& pop, const Predictor& z,
                                     const Predictor& z_prime,
                                     std::span<const OptimizationSpec> specs) {
  pop.require_two_groups();
  const std::array<Scope, 2> groups = {Scope::A, Scope::B};
  require_refinement(pop, z, z_prime, groups);
  const ScoreProfile base = score_profile(pop, z);
  const ScoreProfile refined = score_profile(pop, z_prime);

  ImprovementReport report{z.name(), z_prime.name(), {}, true};
  for (const OptimizationSpec& spec : specs) {
    SpecComparison c;
    c.spec = spec;
    const OptimizationResult rz = solve_optimization(base, spec);
    const OptimizationResult rr = solve_optimization(refined, spec);
    c.status_base = rz.status;
    c.status_refined = rr.status;
    c.opt_base = rz.value;
    c.opt_refined = rr.value;
    if (rz.status != LpStatus::Optimal) {
      c.holds = true;  // nothing to improve on
    } else if (rr.status != LpStatus::Optimal) {
      c.failure = fmt::format("{}: feasible under \"{}\" but {} under \"{}\"", describe(spec),
                              z.name(), to_string(rr.status), z_prime.name());
    } else {
      c.margin = maximizes(spec.objective) ? rr.value - rz.value : rz.value - rr.value;
      c.holds = c.margin >= -kImprovementTolerance;
      if (!c.holds) {
        c.failure = fmt::format("{}: OPT({}) = {:.12g}, OPT({}) = {:.12g}, margin {:.3g}",
                                describe(spec), z.name(), rz.value, z_prime.name(), rr.value,
                                c.margin);
      }
      if (!rz.as_threshold) {
        c.holds = false;
        c.failure = fmt::format("{}: no threshold policy extracted under \"{}\"", describe(spec),
                                z.name());
      } else {
        c.witness = improvement_witness(base, refined, spec, *rz.as_threshold);
        if (!c.witness->holds && c.failure.empty()) {
          c.failure = fmt::format("{}: matched-rate witness under \"{}\" does not preserve h or "
                                  "weakly improve U and Imp_B",
                                  describe(spec), z_prime.name());
        }
        c.holds = c.holds && c.witness->holds;
      }
    }
    report.holds = report.holds && c.holds;
    report.comparisons.push_back(std::move(c));
  }
  return report;
}

}  // namespace infofair
