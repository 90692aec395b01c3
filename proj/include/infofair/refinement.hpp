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

#ifndef INFOFAIR_REFINEMENT_HPP_
#define INFOFAIR_REFINEMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "infofair/information.hpp"
#include "infofair/population.hpp"
#include "infofair/samples.hpp"

namespace infofair {

struct RefinementLevel {
  double value = 0.0;
  double mass = 0.0;
  double mean_refined = 0.0;  // E[z' | z = value]
  double deviation = 0.0;
};

struct RefinementCheck {
  std::string base;
  std::string refined;
  Scope scope = Scope::All;
  std::vector<RefinementLevel> per_level;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool is_refinement = false;
};

// Whether z_prime keeps the mean of every level set of z on scope. Both
// predictors must be calibrated on scope.
RefinementCheck is_refinement(const Population& pop, const Predictor& z, const Predictor& z_prime,
                              Scope scope, double tolerance = kDefaultCalibrationTolerance);

// Throws Error("not-refinement") unless z_prime refines z on every scope.
void require_refinement(const Population& pop, const Predictor& z, const Predictor& z_prime,
                        std::span<const Scope> scopes,
                        double tolerance = kDefaultCalibrationTolerance);

// D_R(z; q) = sum_v Pr[z = v] |E[q | z = v] - v|. Asymmetric.
double refinement_distance(const Population& pop, const Predictor& z, const Predictor& q,
                           Scope scope, double tolerance = kDefaultCalibrationTolerance);

namespace exact {
Rational refinement_distance(const Population& pop, const Predictor& z, const Predictor& q,
                             Scope scope);
bool is_refinement(const Population& pop, const Predictor& z, const Predictor& z_prime,
                   Scope scope);
}  // namespace exact

struct MergeScopeStats {
  Scope scope = Scope::All;
  double info_z = 0.0;
  double info_q = 0.0;
  double info_rho = 0.0;
  double distance_q_z = 0.0;  // D_R(q; z)
  double distance_z_q = 0.0;  // D_R(z; q)
  // max{I(z) + 4 D_R(q;z)^2, I(q) + 4 D_R(z;q)^2}: a lower bound on I(rho).
  double guaranteed_gain = 0.0;
  double eta = 0.0;  // min{D_R(z;q), D_R(q;z)}
};

// Per crossed cell answer to the statistical query, in sample mode.
struct CrossedCellEstimate {
  Scope scope = Scope::All;
  double z_value = 0.0;
  double q_value = 0.0;
  double mass = 0.0;
  std::size_t count = 0;
  double empirical_mean = 0.0;
  double snapped = 0.0;
};

// Discretization alpha, minimum crossed-cell density gamma, failure
// probability delta, and the sample counts implied by the uniform
// convergence argument: t = ceil(ln(2/(delta alpha^2)) / alpha^2) samples per
// crossed cell, m = ceil(t ln(2t/delta) / gamma) draws overall.
struct SampleBudget {
  double alpha = 0.1;
  double gamma = 0.1;
  double delta = 0.05;
  std::size_t per_cell = 0;
  std::size_t m = 0;

  static SampleBudget from_bound(double alpha, double gamma, double delta);
  void validate() const;
};

struct MergeReport {
  Predictor result;
  std::string z_name;
  std::string q_name;
  Partition partition = Partition::Whole;
  // Whole-population figures.
  std::pair<double, double> info_before;  // (I(z), I(q))
  double info_after = 0.0;                // I(rho)
  std::pair<double, double> distances;    // (D_R(q;z), D_R(z;q))
  double guaranteed_gain = 0.0;
  double eta = 0.0;
  std::vector<MergeScopeStats> per_scope;
  // Present for sample-based merges.
  std::optional<SampleBudget> budget;
  std::vector<CrossedCellEstimate> estimates;
  std::size_t samples_used = 0;
};

std::string default_merge_name(const Predictor& z, const Predictor& q);

// Crosses the level sets of z and q (within each scope of the partition) and
// assigns every crossed cell its p*-mean. Empty crossed cells do not occur.
MergeReport merge_oracle(const Population& pop, const Predictor& z, const Predictor& q,
                         Partition partition = Partition::Whole, std::string name = {},
                         double tolerance = kDefaultCalibrationTolerance);

// Same crossing, but each crossed cell gets the empirical mean of the
// observed outcomes, snapped to the alpha grid. p* is never read; masses and
// groups route the samples. Throws Error("undersampled") when a crossed cell
// received no sample.
MergeReport merge_from_samples(const Population& pop, const Predictor& z, const Predictor& q,
                               std::span<const Sample> samples, const SampleBudget& budget,
                               Partition partition = Partition::Whole, std::string name = {});

// Draws budget.m samples with the given seed, then merges from them.
MergeReport merge_from_samples(const Population& pop, const Predictor& z, const Predictor& q,
                               const SampleBudget& budget, std::uint64_t seed,
                               Partition partition = Partition::Whole, std::string name = {});

// Smallest crossed-cell mass (relative to the whole population).
double min_crossed_density(const Population& pop, const Predictor& z, const Predictor& q,
                           Partition partition = Partition::Whole);

using CellFeature = std::function<bool(const Cell&)>;

// q_phi(x) = E[p* | phi = phi(x)] within each scope of the partition. A
// feature constant on a scope yields that scope's base rate.
Predictor feature_predictor(const Population& pop, const CellFeature& phi,
                            Partition partition = Partition::Whole, std::string name = "q_phi");

// |E[p* | phi = 1] - E[p* | phi = 0]| on scope; zero when phi is constant.
double feature_informativeness(const Population& pop, const CellFeature& phi, Scope scope);

struct EtaMergeSummary {
  double eta = 0.0;
  std::size_t count = 0;
  std::size_t bound = 0;  // ceil(1 / (4 eta^2)) + 1
  bool within_bound = true;
  std::vector<std::size_t> gain_violations;  // history indices
};

// Counts the eta-merges (report.eta >= eta > 0) in the history of one
// evolving predictor and checks each raised I by at least 4 eta^2.
EtaMergeSummary count_eta_merges(std::span<const MergeReport> history, double eta);

}  // namespace infofair

#endif  // INFOFAIR_REFINEMENT_HPP_
