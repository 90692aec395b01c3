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

#ifndef INFOFAIR_INFORMATION_HPP_
#define INFOFAIR_INFORMATION_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "infofair/population.hpp"
#include "infofair/rational.hpp"
#include "infofair/samples.hpp"

namespace infofair {

inline constexpr double kDefaultCalibrationTolerance = 1e-9;

struct CalibrationLevel {
  double value = 0.0;
  double mass = 0.0;
  double mean_p_star = 0.0;
  double deviation = 0.0;
};

struct CalibrationReport {
  std::string predictor;
  Scope scope = Scope::All;
  std::vector<CalibrationLevel> per_level;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool is_calibrated = false;
};

CalibrationReport check_calibration(const Population& pop, const Predictor& z, Scope scope,
                                    double tolerance = kDefaultCalibrationTolerance);

// Throws Error("calibration") naming the predictor, scope and max deviation.
void require_calibrated(const Population& pop, const Predictor& z, Scope scope,
                        double tolerance = kDefaultCalibrationTolerance);

// Replaces each level-set score within each scope of the partition by the
// level set's p*-mean. The result is calibrated on every scope.
Predictor calibrate(const Population& pop, const Predictor& raw, Partition partition,
                    std::string name = {});

// 1 - 4 E[z(1-z)] over scope; z must be calibrated there.
double information_content(const Population& pop, const Predictor& z, Scope scope,
                           double tolerance = kDefaultCalibrationTolerance);

// 4 E[(reference - z)^2] over scope; z must be calibrated there. Equals
// I(reference) - I(z) when reference refines z.
double information_loss(const Population& pop, const Predictor& reference, const Predictor& z,
                        Scope scope, double tolerance = kDefaultCalibrationTolerance);

// Logs are base 2 throughout so both measures live in [0,1]; 0 log 0 = 0.
double binary_entropy(double p);
double binary_kl(double p, double q);  // +inf when q in {0,1} and p != q

double entropic_information_content(const Population& pop, const Predictor& z, Scope scope,
                                    double tolerance = kDefaultCalibrationTolerance);

// E[D_KL(reference(x); z(x))]. Throws Error("infinite-divergence") naming the
// first cell where z is 0 or 1 and reference disagrees.
double entropic_information_loss(const Population& pop, const Predictor& reference,
                                 const Predictor& z, Scope scope,
                                 double tolerance = kDefaultCalibrationTolerance);

// Expected normalized log-likelihood of z on fresh outcomes: I_ent(z) - 1.
double expected_log_likelihood(const Population& pop, const Predictor& z, Scope scope,
                               double tolerance = kDefaultCalibrationTolerance);

struct LogLikelihoodEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
};

// Empirical normalized log-likelihood (base 2) of z on labelled draws.
LogLikelihoodEstimate empirical_log_likelihood(const Predictor& z, std::span<const Sample> samples);

struct LossComparison {
  std::string reference;
  double loss = 0.0;
  std::optional<double> entropic_loss;  // absent when the divergence is infinite
  // False when reference is not a refinement of z on the scope, so the loss
  // is not a difference of information contents.
  bool identity_applicable = true;
};

struct InformationReport {
  std::string predictor;
  Scope scope = Scope::All;
  double content = 0.0;
  double entropic_content = 0.0;
  std::optional<LossComparison> loss_vs;
};

InformationReport information_report(const Population& pop, const Predictor& z, Scope scope,
                                     const Predictor* reference = nullptr,
                                     double tolerance = kDefaultCalibrationTolerance);

namespace exact {
Rational max_calibration_deviation(const Population& pop, const Predictor& z, Scope scope);
// Require exact calibration; throw Error("calibration") otherwise.
Rational information_content(const Population& pop, const Predictor& z, Scope scope);
Rational information_loss(const Population& pop, const Predictor& reference, const Predictor& z,
                          Scope scope);
}  // namespace exact

}  // namespace infofair

#endif  // INFOFAIR_INFORMATION_HPP_
