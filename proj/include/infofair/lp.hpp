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

#ifndef INFOFAIR_LP_HPP_
#define INFOFAIR_LP_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "infofair/rational.hpp"

namespace infofair {

enum class Sense { Maximize, Minimize };
enum class Relation { LessEqual, Equal, GreaterEqual };
enum class LpStatus { Optimal, Infeasible, Unbounded };

std::string_view to_string(Relation r);
std::string_view to_string(LpStatus s);

template <class Num>
struct BasicLinearProgram {
  struct Variable {
    std::string name;
    std::optional<Num> lo;  // nullopt means unbounded below
    std::optional<Num> hi;  // nullopt means unbounded above
  };
  struct Constraint {
    std::string name;
    std::vector<Num> coefficients;
    Relation relation = Relation::LessEqual;
    Num rhs = 0;
  };

  Sense sense = Sense::Maximize;
  std::vector<Variable> variables;
  std::vector<Num> objective;
  std::vector<Constraint> constraints;

  // Returns the new variable's index; its objective coefficient starts at 0.
  std::size_t add_variable(std::string name, std::optional<Num> lo = Num(0),
                           std::optional<Num> hi = std::nullopt);
  // Coefficients shorter than the variable count are zero-padded.
  void add_constraint(std::string name, std::vector<Num> coefficients, Relation relation, Num rhs);

  // Throws Error("lp-shape") on size mismatches or lo > hi.
  void validate() const;

  // One line per constraint; for debugging only.
  std::string to_text() const;
};

template <class Num>
struct BasicLpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<Num> values;  // empty unless optimal
  Num objective_value = 0;
};

using LinearProgram = BasicLinearProgram<double>;
using ExactLinearProgram = BasicLinearProgram<Rational>;
using LpSolution = BasicLpSolution<double>;
using ExactLpSolution = BasicLpSolution<Rational>;

// Two-phase dense tableau simplex with Bland's rule. Deterministic.
LpSolution solve(const LinearProgram& lp);
ExactLpSolution solve(const ExactLinearProgram& lp);

// The same program with every number replaced by its exact binary value.
ExactLinearProgram to_exact(const LinearProgram& lp);

extern template struct BasicLinearProgram<double>;
extern template struct BasicLinearProgram<Rational>;

}  // namespace infofair

#endif  // INFOFAIR_LP_HPP_
