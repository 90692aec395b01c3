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

#include "infofair/report_json.hpp"

#include <fmt/format.h>

#include "infofair/error.hpp"

namespace infofair {
namespace {

template <class T>
Json optional_json(const std::optional<T>& x) {
  return x ? Json(*x) : Json(nullptr);
}

Json group_pair(const std::array<double, 2>& v) { return Json{{"A", v[0]}, {"B", v[1]}}; }

double number_field(const Json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_number()) throw Error("spec", fmt::format("field \"{}\" must be a number", key));
  return v.get<double>();
}

std::string string_field(const Json& j, const char* key, std::string fallback) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_string()) throw Error("spec", fmt::format("field \"{}\" must be a string", key));
  return v.get<std::string>();
}

}  // namespace

Json to_json(const ScoreDistribution& d) {
  Json entries = Json::array();
  for (const ScoreLevel& e : d.entries) entries.push_back({{"v", e.value}, {"mass", e.mass}});
  return {{"predictor", d.predictor}, {"scope", to_string(d.scope)}, {"entries", entries}};
}

Json to_json(const CalibrationReport& r) {
  Json levels = Json::array();
  for (const auto& l : r.per_level) {
    levels.push_back({{"v", l.value},
                      {"mass", l.mass},
                      {"mean_p_star", l.mean_p_star},
                      {"deviation", l.deviation}});
  }
  return {{"predictor", r.predictor},   {"scope", to_string(r.scope)},
          {"per_level", levels},        {"max_deviation", r.max_deviation},
          {"tolerance", r.tolerance},   {"is_calibrated", r.is_calibrated}};
}

Json to_json(const InformationReport& r) {
  Json j = {{"predictor", r.predictor},
            {"scope", to_string(r.scope)},
            {"content", r.content},
            {"entropic_content", r.entropic_content},
            {"loss_vs", nullptr},
            {"entropic_loss_vs", nullptr}};
  if (r.loss_vs) {
    j["loss_vs"] = {{"reference", r.loss_vs->reference},
                    {"loss", r.loss_vs->loss},
                    {"identity_applicable", r.loss_vs->identity_applicable}};
    if (!r.loss_vs->identity_applicable) j["loss_vs"]["flag"] = "identity-not-applicable";
    if (r.loss_vs->entropic_loss) {
      j["entropic_loss_vs"] = {{"reference", r.loss_vs->reference},
                               {"loss", *r.loss_vs->entropic_loss}};
    }
  }
  return j;
}

Json to_json(const RefinementCheck& r) {
  Json levels = Json::array();
  for (const auto& l : r.per_level) {
    levels.push_back({{"v", l.value},
                      {"mass", l.mass},
                      {"mean_refined", l.mean_refined},
                      {"deviation", l.deviation}});
  }
  return {{"base", r.base},
          {"refined", r.refined},
          {"scope", to_string(r.scope)},
          {"per_level", levels},
          {"max_deviation", r.max_deviation},
          {"tolerance", r.tolerance},
          {"is_refinement", r.is_refinement}};
}

Json to_json(const Population& pop, const MergeReport& r) {
  Json scores = Json::object();
  for (std::size_t i = 0; i < pop.size(); ++i) scores[pop.cell(i).id] = r.result.score(i);
  Json per_scope = Json::array();
  for (const auto& s : r.per_scope) {
    per_scope.push_back({{"scope", to_string(s.scope)},
                         {"info_z", s.info_z},
                         {"info_q", s.info_q},
                         {"info_rho", s.info_rho},
                         {"distance_q_z", s.distance_q_z},
                         {"distance_z_q", s.distance_z_q},
                         {"guaranteed_gain", s.guaranteed_gain},
                         {"eta", s.eta}});
  }
  Json j = {{"z", r.z_name},
            {"q", r.q_name},
            {"partition", r.partition == Partition::Whole ? "whole" : "per_group"},
            {"result", {{"name", r.result.name()}, {"scores", scores}}},
            {"info_before", {{"z", r.info_before.first}, {"q", r.info_before.second}}},
            {"info_after", r.info_after},
            {"distances", {{"q_z", r.distances.first}, {"z_q", r.distances.second}}},
            {"guaranteed_gain", r.guaranteed_gain},
            {"eta", r.eta},
            {"per_scope", per_scope}};
  if (r.budget) {
    Json estimates = Json::array();
    for (const auto& e : r.estimates) {
      estimates.push_back({{"scope", to_string(e.scope)},
                           {"z", e.z_value},
                           {"q", e.q_value},
                           {"mass", e.mass},
                           {"count", e.count},
                           {"empirical_mean", e.empirical_mean},
                           {"snapped", e.snapped}});
    }
    j["sampling"] = {{"alpha", r.budget->alpha},   {"gamma", r.budget->gamma},
                     {"delta", r.budget->delta},   {"per_cell", r.budget->per_cell},
                     {"m", r.budget->m},           {"samples_used", r.samples_used},
                     {"estimates", estimates}};
  }
  return j;
}

Json to_json(const EtaMergeSummary& s) {
  return {{"eta", s.eta},
          {"count", s.count},
          {"bound", s.bound},
          {"within_bound", s.within_bound},
          {"gain_violations", s.gain_violations}};
}

Json to_json(const ImpactParams& p) {
  return {{"tau_u", p.tau_u}, {"tau_l", p.tau_l}, {"risk_averse", p.risk_averse}};
}

Json to_json(const ThresholdPolicy& p) {
  Json j = Json::object();
  for (Group g : kGroups) j[std::string(to_string(g))] = {{"tau", p[g].tau}, {"p", p[g].p}};
  return j;
}

Json to_json(const SelectionRule& r) {
  Json j = Json::object();
  for (Group g : kGroups) {
    Json rows = Json::array();
    for (const auto& [v, f] : r.table[index_of(g)]) rows.push_back({{"v", v}, {"f", f}});
    j[std::string(to_string(g))] = rows;
  }
  return j;
}

Json to_json(const GroupStats& s) {
  return {{"beta", s.beta},           {"tpr", optional_json(s.tpr)},
          {"fpr", optional_json(s.fpr)}, {"ppv", optional_json(s.ppv)},
          {"impact", s.impact},       {"base_rate", s.base_rate},
          {"weight", s.weight}};
}

Json to_json(const PolicyStats& s) {
  Json groups = Json::object();
  for (Group g : kGroups) {
    if (s.groups[index_of(g)]) groups[std::string(to_string(g))] = to_json(*s.groups[index_of(g)]);
  }
  return {{"groups", groups}, {"utility", s.utility}};
}

Json to_json(const CurvePoint& p) {
  return {{"beta", p.beta},
          {"tpr", optional_json(p.tpr)},
          {"fpr", optional_json(p.fpr)},
          {"ppv", optional_json(p.ppv)}};
}

Json to_json(const DominanceReport& r) {
  Json groups = Json::array();
  for (const auto& g : r.groups) {
    groups.push_back({{"group", to_string(g.group)},
                      {"points", g.points},
                      {"worst_tpr_margin", g.worst_tpr},
                      {"worst_fpr_margin", g.worst_fpr},
                      {"worst_ppv_margin", g.worst_ppv},
                      {"violations", g.violations}});
  }
  return {{"base", r.base}, {"refined", r.refined}, {"groups", groups}, {"holds", r.holds}};
}

Json to_json(const OptimizationSpec& s) {
  return {{"objective", to_string(s.objective)},
          {"fairness_metric", to_string(s.fairness_metric)},
          {"eps", s.eps},
          {"t_i", s.t_i},
          {"t_u", s.t_u},
          {"impact_params", to_json(s.impact_params)},
          {"lambda_u", s.lambda_u},
          {"lambda_i", s.lambda_i},
          {"lambda_beta", s.lambda_beta}};
}

Json to_json(const OptimizationResult& r) {
  Json diagnostics = Json::array();
  for (const auto& d : r.diagnostics) {
    diagnostics.push_back({{"constraint", d.constraint},
                           {"bound", d.bound},
                           {"best_achievable", optional_json(d.best_achievable)},
                           {"message", d.message}});
  }
  Json j = {{"spec", to_json(r.spec)},
            {"predictor", r.predictor},
            {"status", to_string(r.status)}};
  if (r.status == LpStatus::Optimal) {
    j["value"] = r.value;
    j["rule"] = to_json(r.rule);
    j["stats"] = to_json(r.stats);
    j["disparity"] = disparity(r.stats, r.spec.fairness_metric);
    j["as_threshold"] = r.as_threshold ? to_json(*r.as_threshold) : Json(nullptr);
    j["threshold_stats"] = r.threshold_stats ? to_json(*r.threshold_stats) : Json(nullptr);
  } else {
    j["diagnostics"] = diagnostics;
  }
  return j;
}

Json to_json(const CostOfFairness& c) {
  return {{"status", to_string(c.status)},
          {"p_star_available", c.p_star_available},
          {"u_star", optional_json(c.u_star)},
          {"opt", c.opt},
          {"cost", optional_json(c.cost)}};
}

Json to_json(const ImprovementReport& r) {
  Json rows = Json::array();
  for (const auto& c : r.comparisons) {
    Json row = {{"spec", to_json(c.spec)},
                {"status_base", to_string(c.status_base)},
                {"status_refined", to_string(c.status_refined)},
                {"opt_base", c.opt_base},
                {"opt_refined", c.opt_refined},
                {"margin", c.margin},
                {"holds", c.holds},
                {"witness", nullptr}};
    if (c.witness) {
      const auto& w = *c.witness;
      row["witness"] = {{"beta", group_pair(w.beta)},
                        {"beta_prime", group_pair(w.beta_prime)},
                        {"h", group_pair(w.h)},
                        {"h_prime", group_pair(w.h_prime)},
                        {"utility", w.utility},
                        {"utility_prime", w.utility_prime},
                        {"impact_b", w.impact_b},
                        {"impact_b_prime", w.impact_b_prime},
                        {"holds", w.holds}};
    }
    if (!c.failure.empty()) row["failure"] = c.failure;
    rows.push_back(std::move(row));
  }
  return {{"base", r.base}, {"refined", r.refined}, {"comparisons", rows}, {"holds", r.holds}};
}

OptimizationSpec spec_from_json(const Json& j) {
  if (!j.is_object()) throw Error("spec", "optimization spec must be a JSON object");
  OptimizationSpec s;
  try {
    s.objective = parse_objective(string_field(j, "objective", "utility"));
    s.fairness_metric = parse_fairness_metric(string_field(j, "fairness_metric", "beta"));
  } catch (const Error& e) {
    throw Error("spec", e.what());
  }
  s.eps = number_field(j, "eps", s.eps);
  s.t_i = number_field(j, "t_i", s.t_i);
  s.t_u = number_field(j, "t_u", s.t_u);
  s.lambda_u = number_field(j, "lambda_u", s.lambda_u);
  s.lambda_i = number_field(j, "lambda_i", s.lambda_i);
  s.lambda_beta = number_field(j, "lambda_beta", s.lambda_beta);
  if (j.contains("impact_params")) {
    const Json& p = j.at("impact_params");
    if (!p.is_object()) throw Error("spec", "field \"impact_params\" must be an object");
    s.impact_params.tau_u = number_field(p, "tau_u", s.impact_params.tau_u);
    s.impact_params.tau_l = number_field(p, "tau_l", s.impact_params.tau_l);
    if (p.contains("risk_averse")) {
      if (!p.at("risk_averse").is_boolean()) {
        throw Error("spec", "field \"risk_averse\" must be a boolean");
      }
      s.impact_params.risk_averse = p.at("risk_averse").get<bool>();
    }
  }
  try {
    s.validate();
  } catch (const Error& e) {
    throw Error("spec", e.what());
  }
  return s;
}

std::string curves_csv(std::span<const CurvePoint> rows) {
  const auto cell = [](const std::optional<double>& x) {
    return x ? fmt::format("{:.12g}", *x) : std::string();
  };
  std::string out = "beta,tpr,fpr,ppv\n";
  for (const CurvePoint& p : rows) {
    out += fmt::format("{:.12g},{},{},{}\n", p.beta, cell(p.tpr), cell(p.fpr), cell(p.ppv));
  }
  return out;
}

}  // namespace infofair
