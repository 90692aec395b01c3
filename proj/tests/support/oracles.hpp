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

#ifndef INFOFAIR_TESTS_SUPPORT_ORACLES_HPP_
#define INFOFAIR_TESTS_SUPPORT_ORACLES_HPP_

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <vector>

#include "infofair/population.hpp"
#include "infofair/rational.hpp"

// Brute-force references that walk the cells directly. They share nothing
// with the library's level-set code beyond the data types.
namespace infofair::testing {

inline bool member(const Cell& c, Scope s) { return s == Scope::All || scope_of(c.group) == s; }

inline Rational scope_mass(const Population& pop, Scope s) {
  Rational m = 0;
  for (const Cell& c : pop.cells()) {
    if (member(c, s)) m += c.exact_mass;
  }
  return m;
}

// 1 - 4 E[z (1 - z)], cell by cell.
inline Rational information(const Population& pop, const Predictor& z, Scope s) {
  Rational acc = 0;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const Cell& c = pop.cell(i);
    if (!member(c, s)) continue;
    const Rational& v = z.exact_score(i);
    acc += c.exact_mass * v * (1 - v);
  }
  return 1 - 4 * acc / scope_mass(pop, s);
}

inline double information_f(const Population& pop, const Predictor& z, Scope s) {
  double acc = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const Cell& c = pop.cell(i);
    if (!member(c, s)) continue;
    acc += c.mass * z.score(i) * (1.0 - z.score(i));
    total += c.mass;
  }
  return 1.0 - 4.0 * acc / total;
}

inline double h2(double p) {
  const auto t = [](double x) { return x <= 0.0 ? 0.0 : -x * std::log(x) / std::log(2.0); };
  return t(p) + t(1.0 - p);
}

inline double entropic_information(const Population& pop, const Predictor& z, Scope s) {
  double acc = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const Cell& c = pop.cell(i);
    if (!member(c, s)) continue;
    acc += c.mass * h2(z.score(i));
    total += c.mass;
  }
  return 1.0 - acc / total;
}

// Mean of value(j) over cells j in scope with the same exact z score as i.
template <class Value>
Rational level_mean(const Population& pop, const Predictor& z, Scope s, std::size_t i,
                    Value value) {
  Rational num = 0;
  Rational den = 0;
  for (std::size_t j = 0; j < pop.size(); ++j) {
    if (!member(pop.cell(j), s) || z.exact_score(j) != z.exact_score(i)) continue;
    num += pop.cell(j).exact_mass * value(j);
    den += pop.cell(j).exact_mass;
  }
  return num / den;
}

inline bool calibrated(const Population& pop, const Predictor& z, Scope s) {
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (!member(pop.cell(i), s)) continue;
    if (level_mean(pop, z, s, i, [&](std::size_t j) { return pop.cell(j).exact_p_star; }) !=
        z.exact_score(i)) {
      return false;
    }
  }
  return true;
}

inline bool refines(const Population& pop, const Predictor& z, const Predictor& zp, Scope s) {
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (!member(pop.cell(i), s)) continue;
    if (level_mean(pop, z, s, i, [&](std::size_t j) { return zp.exact_score(j); }) !=
        z.exact_score(i)) {
      return false;
    }
  }
  return true;
}

// sum over cells of mass * |E[q | z = z(x)] - z(x)| / scope mass.
inline Rational refinement_distance(const Population& pop, const Predictor& z, const Predictor& q,
                                    Scope s) {
  Rational acc = 0;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (!member(pop.cell(i), s)) continue;
    Rational d = level_mean(pop, z, s, i, [&](std::size_t j) { return q.exact_score(j); }) -
                 z.exact_score(i);
    if (d < 0) d = -d;
    acc += pop.cell(i).exact_mass * d;
  }
  return acc / scope_mass(pop, s);
}

// rho(x) = p*-mean over cells sharing x's part, z score and q score.
inline std::vector<Rational> merged_scores(const Population& pop, const Predictor& z,
                                           const Predictor& q, bool per_group) {
  std::vector<Rational> out;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    Rational num = 0;
    Rational den = 0;
    for (std::size_t j = 0; j < pop.size(); ++j) {
      if (per_group && pop.cell(j).group != pop.cell(i).group) continue;
      if (z.exact_score(j) != z.exact_score(i) || q.exact_score(j) != q.exact_score(i)) continue;
      num += pop.cell(j).exact_mass * pop.cell(j).exact_p_star;
      den += pop.cell(j).exact_mass;
    }
    out.push_back(num / den);
  }
  return out;
}

// Policy statistics straight from cells and their p*, for a selection
// function f(score, group).
struct CellStats {
  double beta = 0.0;
  double tpr = 0.0;
  double fpr = 0.0;
  double ppv = 0.0;
  double impact = 0.0;
};

struct CellPolicy {
  CellStats group[2];
  double utility = 0.0;
};

inline CellPolicy cell_policy(const Population& pop, const Predictor& z,
                              const std::function<double(double, Group)>& f, double tau_u,
                              double tau_l) {
  CellPolicy out;
  for (Group g : kGroups) {
    double mass = 0.0;
    double pos = 0.0;
    double sel = 0.0;
    double sel_pos = 0.0;
    double sel_neg = 0.0;
    for (std::size_t i = 0; i < pop.size(); ++i) {
      const Cell& c = pop.cell(i);
      if (c.group != g) continue;
      const double fx = f(z.score(i), g);
      mass += c.mass;
      pos += c.mass * c.p_star;
      sel += c.mass * fx;
      sel_pos += c.mass * fx * c.p_star;
      sel_neg += c.mass * fx * (1.0 - c.p_star);
      out.utility += c.mass * fx * (c.p_star - tau_u);
    }
    if (mass == 0.0) continue;
    CellStats& s = out.group[index_of(g)];
    s.beta = sel / mass;
    s.tpr = pos > 0.0 ? sel_pos / pos : 0.0;
    s.fpr = mass - pos > 0.0 ? sel_neg / (mass - pos) : 0.0;
    s.ppv = sel > 0.0 ? sel_pos / sel : 0.0;
    s.impact = (sel_pos - tau_l * sel) / mass;
  }
  return out;
}

}  // namespace infofair::testing

#endif  // INFOFAIR_TESTS_SUPPORT_ORACLES_HPP_
