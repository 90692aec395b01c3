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

#include "infofair/information.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "infofair/detail/levels.hpp"
#include "infofair/detail/mean_predictor.hpp"
#include "infofair/error.hpp"

namespace infofair {
namespace {

double log2_or_zero(double weight, double x) { return weight == 0.0 ? 0.0 : weight * std::log2(x); }

}  // namespace

CalibrationReport check_calibration(const Population& pop, const Predictor& z, Scope scope,
                                    double tolerance) {
  if (tolerance < 0.0) throw Error("argument", "calibration tolerance must be nonnegative");
  CalibrationReport report{z.name(), scope, {}, 0.0, tolerance, false};
  for (const auto& l : detail::calibration_deviations<double>(pop, z, scope)) {
    report.per_level.push_back({l.value, l.mass, l.mean, l.deviation});
    report.max_deviation = std::max(report.max_deviation, l.deviation);
  }
  // Near-calibrated inputs are settled exactly, so a predictor scoring 1/3
  // on a level whose exact p*-mean is 1/3 reports deviation 0.
  if (report.max_deviation > 0.0 && report.max_deviation <= 1e-12) {
    const auto exact_levels = detail::calibration_deviations<Rational>(pop, z, scope);
    if (exact_levels.size() == report.per_level.size()) {
      report.max_deviation = 0.0;
      for (std::size_t k = 0; k < exact_levels.size(); ++k) {
        auto& level = report.per_level[k];
        level.mean_p_star = to_double(exact_levels[k].mean);
        level.deviation = to_double(exact_levels[k].deviation);
        report.max_deviation = std::max(report.max_deviation, level.deviation);
      }
    }
  }
  report.is_calibrated = report.max_deviation <= tolerance;
  return report;
}

void require_calibrated(const Population& pop, const Predictor& z, Scope scope, double tolerance) {
  const auto report = check_calibration(pop, z, scope, tolerance);
  if (!report.is_calibrated) {
    throw Error("calibration",
                fmt::format("predictor \"{}\" is not calibrated on scope {}: max deviation {:.6g} "
                            "exceeds tolerance {:.3g}",
                            z.name(), to_string(scope), report.max_deviation, tolerance));
  }
}

Predictor calibrate(const Population& pop, const Predictor& raw, Partition partition,
                    std::string name) {
  std::vector<detail::CellKey> keys;
  keys.reserve(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const int part = partition == Partition::Whole ? 0 : 1 + static_cast<int>(pop.cell(i).group);
    keys.push_back({part, raw.score(i), 0.0, 0});
  }
  return detail::mean_predictor(pop, name.empty() ? raw.name() : std::move(name), keys);
}

double information_content(const Population& pop, const Predictor& z, Scope scope,
                           double tolerance) {
  require_calibrated(pop, z, scope, tolerance);
  return detail::information_content<double>(pop, z, scope);
}

double information_loss(const Population& pop, const Predictor& reference, const Predictor& z,
                        Scope scope, double tolerance) {
  require_calibrated(pop, z, scope, tolerance);
  return detail::squared_gap<double>(pop, reference, z, scope);
}

double binary_entropy(double p) {
  return -log2_or_zero(p, p) - log2_or_zero(1.0 - p, 1.0 - p);
}

double binary_kl(double p, double q) {
  const auto term = [](double a, double b) {
    if (a == 0.0) return 0.0;
    if (b == 0.0) return std::numeric_limits<double>::infinity();
    return a * std::log2(a / b);
  };
  return term(p, q) + term(1.0 - p, 1.0 - q);
}

double entropic_information_content(const Population& pop, const Predictor& z, Scope scope,
                                    double tolerance) {
  require_calibrated(pop, z, scope, tolerance);
  const double total = detail::scope_mass<double>(pop, scope);
  double entropy = 0.0;
  for (const auto& level : detail::levels<double>(pop, z, scope)) {
    entropy += level.mass * binary_entropy(level.value);
  }
  return 1.0 - entropy / total;
}

double entropic_information_loss(const Population& pop, const Predictor& reference,
                                 const Predictor& z, Scope scope, double tolerance) {
  require_calibrated(pop, z, scope, tolerance);
  double total = 0.0;
  double sum = 0.0;
  for (std::size_t i : detail::nonempty_scope(pop, scope)) {
    const double m = pop.cell(i).mass;
    const double kl = binary_kl(reference.score(i), z.score(i));
    if (!std::isfinite(kl)) {
      throw Error("infinite-divergence",
                  fmt::format("cell \"{}\": predictor \"{}\" scores {} where \"{}\" scores {}",
                              pop.cell(i).id, z.name(), z.score(i), reference.name(),
                              reference.score(i)));
    }
    sum += m * kl;
    total += m;
  }
  return sum / total;
}

double expected_log_likelihood(const Population& pop, const Predictor& z, Scope scope,
                               double tolerance) {
  return entropic_information_content(pop, z, scope, tolerance) - 1.0;
}

LogLikelihoodEstimate empirical_log_likelihood(const Predictor& z,
                                               std::span<const Sample> samples) {
  if (samples.empty()) throw Error("argument", "no samples");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const Sample& s : samples) {
    const double v = z.score(s.cell);
    const double term = s.y ? std::log2(v) : std::log2(1.0 - v);
    if (!std::isfinite(term)) {
      throw Error("infinite-log-likelihood",
                  fmt::format("predictor \"{}\" scores {} on an observed y = {}", z.name(), v, s.y));
    }
    sum += term;
    sum_sq += term * term;
  }
  const double n = static_cast<double>(samples.size());
  const double mean = sum / n;
  const double variance = samples.size() > 1 ? (sum_sq - n * mean * mean) / (n - 1.0) : 0.0;
  return {mean, std::sqrt(std::max(variance, 0.0) / n), samples.size()};
}

InformationReport information_report(const Population& pop, const Predictor& z, Scope scope,
                                     const Predictor* reference, double tolerance) {
  InformationReport report{z.name(), scope, information_content(pop, z, scope, tolerance),
                           entropic_information_content(pop, z, scope, tolerance), std::nullopt};
  if (reference != nullptr) {
    LossComparison loss{reference->name(),
                        information_loss(pop, *reference, z, scope, tolerance), std::nullopt, true};
    const auto deviations = detail::refinement_deviations<double>(pop, z, *reference, scope);
    loss.identity_applicable = detail::max_deviation(deviations) <= tolerance &&
                               check_calibration(pop, *reference, scope, tolerance).is_calibrated;
    try {
      loss.entropic_loss = entropic_information_loss(pop, *reference, z, scope, tolerance);
    } catch (const Error& e) {
      if (e.code() != "infinite-divergence") throw;
    }
    report.loss_vs = std::move(loss);
  }
  return report;
}

namespace exact {

Rational max_calibration_deviation(const Population& pop, const Predictor& z, Scope scope) {
  return detail::max_deviation(detail::calibration_deviations<Rational>(pop, z, scope));
}

namespace {
void require_exactly_calibrated(const Population& pop, const Predictor& z, Scope scope) {
  const Rational deviation = max_calibration_deviation(pop, z, scope);
  if (deviation != 0) {
    throw Error("calibration",
                fmt::format("predictor \"{}\" is not exactly calibrated on scope {} (deviation {})",
                            z.name(), to_string(scope), to_fraction_string(deviation)));
  }
}
}  // namespace

Rational information_content(const Population& pop, const Predictor& z, Scope scope) {
  require_exactly_calibrated(pop, z, scope);
  return detail::information_content<Rational>(pop, z, scope);
}

Rational information_loss(const Population& pop, const Predictor& reference, const Predictor& z,
                          Scope scope) {
  require_exactly_calibrated(pop, z, scope);
  return detail::squared_gap<Rational>(pop, reference, z, scope);
}

}  // namespace exact
}  // namespace infofair
