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

#ifndef INFOFAIR_REPORT_JSON_HPP_
#define INFOFAIR_REPORT_JSON_HPP_

#include <span>
#include <string>

#include <json.hpp>

#include "infofair/information.hpp"
#include "infofair/optimize.hpp"
#include "infofair/policy.hpp"
#include "infofair/refinement.hpp"

namespace infofair {

using Json = nlohmann::ordered_json;

Json to_json(const ScoreDistribution& d);
Json to_json(const CalibrationReport& r);
Json to_json(const InformationReport& r);
Json to_json(const RefinementCheck& r);
// Includes the merged predictor's scores keyed by cell id.
Json to_json(const Population& pop, const MergeReport& r);
Json to_json(const EtaMergeSummary& s);
Json to_json(const ImpactParams& p);
Json to_json(const ThresholdPolicy& p);
Json to_json(const SelectionRule& r);
Json to_json(const GroupStats& s);
Json to_json(const PolicyStats& s);
Json to_json(const CurvePoint& p);
Json to_json(const DominanceReport& r);
Json to_json(const OptimizationSpec& s);
Json to_json(const OptimizationResult& r);
Json to_json(const CostOfFairness& c);
Json to_json(const ImprovementReport& r);

// Reads the fields of to_json(OptimizationSpec); absent fields keep their
// defaults. Throws Error("spec") naming the bad field.
OptimizationSpec spec_from_json(const Json& j);

// "beta,tpr,fpr,ppv" rows with 12 significant digits; undefined rates are
// left empty.
std::string curves_csv(std::span<const CurvePoint> rows);

}  // namespace infofair

#endif  // INFOFAIR_REPORT_JSON_HPP_
