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

#include "infofair/lp.hpp"

#include <cmath>
#include <type_traits>
#include <utility>

#include <fmt/format.h>

#include "infofair/error.hpp"

namespace infofair {
namespace {

template <class Num>
struct Tolerance;

template <>
struct Tolerance<double> {
  static constexpr double kReducedCost = 1e-11;
  static constexpr double kPivot = 1e-12;
  static constexpr double kFeasibility = 1e-9;
  static bool positive(double x, double tol) { return x > tol; }
  static bool nonzero(double x, double tol) { return std::fabs(x) > tol; }
};

template <>
struct Tolerance<Rational> {
  static constexpr int kReducedCost = 0;
  static constexpr int kPivot = 0;
  static constexpr int kFeasibility = 0;
  static bool positive(const Rational& x, int) { return x > 0; }
  static bool nonzero(const Rational& x, int) { return x != 0; }
};

std::string format_number(double x) { return fmt::format("{:.17g}", x); }
std::string format_number(const Rational& x) { return to_fraction_string(x); }

constexpr std::size_t kIterationLimit = 100000;

// Standard form: maximize c.y subject to T y = rhs, y >= 0, with a starting
// basis made of slack and artificial columns.
template <class Num>
class Tableau {
 public:
  using Tol = Tolerance<Num>;

  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows, std::vector<Num>(cols + 1, Num(0))), basis_(rows, 0), cols_(cols) {}

  Num& at(std::size_t i, std::size_t j) { return rows_[i][j]; }
  Num& rhs(std::size_t i) { return rows_[i][cols_]; }
  std::size_t& basis(std::size_t i) { return basis_[i]; }
  std::size_t rows() const { return rows_.size(); }

  // Maximizes cost.y over columns with allowed[j]. Returns false when
  // unbounded.
  bool optimize(const std::vector<Num>& cost, const std::vector<bool>& allowed) {
    for (std::size_t iter = 0; iter < kIterationLimit; ++iter) {
      std::size_t entering = cols_;
      for (std::size_t j = 0; j < cols_ && entering == cols_; ++j) {
        if (!allowed[j] || is_basic(j)) continue;
        Num reduced = cost[j];
        for (std::size_t i = 0; i < rows(); ++i) reduced -= cost[basis_[i]] * rows_[i][j];
        if (Tol::positive(reduced, Tol::kReducedCost)) entering = j;
      }
      if (entering == cols_) return true;

      std::size_t leaving = rows();
      Num best_ratio = 0;
      for (std::size_t i = 0; i < rows(); ++i) {
        const Num& a = rows_[i][entering];
        if (!Tol::positive(a, Tol::kPivot)) continue;
        Num ratio = rows_[i][cols_] / a;
        if (leaving == rows() || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[leaving])) {
          leaving = i;
          best_ratio = std::move(ratio);
        }
      }
      if (leaving == rows()) return false;
      pivot(leaving, entering);
    }
    throw Error("lp-iterations", "simplex iteration limit reached");
  }

  void pivot(std::size_t r, std::size_t c) {
    const Num p = rows_[r][c];
    for (Num& x : rows_[r]) x /= p;
    for (std::size_t i = 0; i < rows(); ++i) {
      if (i == r) continue;
      const Num factor = rows_[i][c];
      if (factor == 0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) rows_[i][j] -= factor * rows_[r][j];
      if constexpr (std::is_same_v<Num, double>) {
        // Round-off must not make a basic value negative.
        if (rows_[i][cols_] < 0.0 && rows_[i][cols_] > -Tol::kFeasibility) rows_[i][cols_] = 0.0;
      }
    }
    basis_[r] = c;
  }

  void drop_row(std::size_t r) {
    rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

  bool is_basic(std::size_t j) const {
    for (std::size_t b : basis_) {
      if (b == j) return true;
    }
    return false;
  }

 private:
  std::vector<std::vector<Num>> rows_;
  std::vector<std::size_t> basis_;
  std::size_t cols_;
};

// x_j = offset + sum over terms of sign * y_k.
template <class Num>
struct Substitution {
  Num offset = 0;
  std::vector<std::pair<std::size_t, int>> terms;
};

template <class Num>
BasicLpSolution<Num> solve_impl(const BasicLinearProgram<Num>& lp) {
  using Tol = Tolerance<Num>;
  lp.validate();
  const std::size_t n = lp.variables.size();

  // Shift bounded variables to y >= 0, split free ones, and turn finite
  // upper bounds into rows.
  std::vector<Substitution<Num>> subs(n);
  std::size_t ny = 0;
  struct Row {
    std::vector<std::pair<std::size_t, Num>> y_terms;
    Relation relation;
    Num rhs;
  };
  std::vector<Row> rows;
  for (std::size_t j = 0; j < n; ++j) {
    const auto& v = lp.variables[j];
    if (v.lo) {
      subs[j] = {*v.lo, {{ny, 1}}};
      if (v.hi) rows.push_back({{{ny, Num(1)}}, Relation::LessEqual, Num(*v.hi - *v.lo)});
      ++ny;
    } else if (v.hi) {
      subs[j] = {*v.hi, {{ny, -1}}};
      ++ny;
    } else {
      subs[j] = {Num(0), {{ny, 1}, {ny + 1, -1}}};
      ny += 2;
    }
  }
  for (const auto& c : lp.constraints) {
    Row row{{}, c.relation, c.rhs};
    for (std::size_t j = 0; j < n; ++j) {
      if (c.coefficients[j] == 0) continue;
      row.rhs -= c.coefficients[j] * subs[j].offset;
      for (const auto& [k, sign] : subs[j].terms) {
        row.y_terms.emplace_back(k, sign > 0 ? Num(c.coefficients[j]) : Num(-c.coefficients[j]));
      }
    }
    rows.push_back(std::move(row));
  }
  for (Row& row : rows) {
    if (row.rhs < 0) {
      row.rhs = -row.rhs;
      for (auto& [k, a] : row.y_terms) a = -a;
      if (row.relation == Relation::LessEqual) {
        row.relation = Relation::GreaterEqual;
      } else if (row.relation == Relation::GreaterEqual) {
        row.relation = Relation::LessEqual;
      }
    }
  }

  // Column layout: y, then one slack or surplus per inequality, then
  // artificials.
  std::size_t n_slack = 0;
  std::size_t n_art = 0;
  for (const Row& row : rows) {
    if (row.relation != Relation::Equal) ++n_slack;
    if (row.relation != Relation::LessEqual) ++n_art;
  }
  const std::size_t cols = ny + n_slack + n_art;
  Tableau<Num> t(rows.size(), cols);
  std::vector<bool> is_artificial(cols, false);
  std::size_t next_slack = ny;
  std::size_t next_art = ny + n_slack;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& [k, a] : rows[i].y_terms) t.at(i, k) += a;
    t.rhs(i) = rows[i].rhs;
    switch (rows[i].relation) {
      case Relation::LessEqual:
        t.at(i, next_slack) = 1;
        t.basis(i) = next_slack++;
        break;
      case Relation::GreaterEqual:
        t.at(i, next_slack++) = -1;
        [[fallthrough]];
      case Relation::Equal:
        t.at(i, next_art) = 1;
        is_artificial[next_art] = true;
        t.basis(i) = next_art++;
        break;
    }
  }

  BasicLpSolution<Num> result;
  if (n_art > 0) {
    std::vector<Num> phase1(cols, Num(0));
    for (std::size_t j = 0; j < cols; ++j) {
      if (is_artificial[j]) phase1[j] = -1;
    }
    t.optimize(phase1, std::vector<bool>(cols, true));
    Num infeasibility = 0;
    for (std::size_t i = 0; i < t.rows(); ++i) {
      if (is_artificial[t.basis(i)]) infeasibility += t.rhs(i);
    }
    if (Tol::positive(infeasibility, Tol::kFeasibility)) {
      result.status = LpStatus::Infeasible;
      return result;
    }
    // Pivot remaining (zero-level) artificials out; drop redundant rows.
    for (std::size_t i = t.rows(); i-- > 0;) {
      if (!is_artificial[t.basis(i)]) continue;
      std::size_t replacement = cols;
      for (std::size_t j = 0; j < cols && replacement == cols; ++j) {
        if (!is_artificial[j] && Tol::nonzero(t.at(i, j), Tol::kPivot)) replacement = j;
      }
      if (replacement == cols) {
        t.drop_row(i);
      } else {
        t.pivot(i, replacement);
      }
    }
  }

  std::vector<Num> phase2(cols, Num(0));
  for (std::size_t j = 0; j < n; ++j) {
    const Num c = lp.sense == Sense::Maximize ? Num(lp.objective[j]) : Num(-lp.objective[j]);
    for (const auto& [k, sign] : subs[j].terms) phase2[k] += sign > 0 ? c : Num(-c);
  }
  std::vector<bool> allowed(cols);
  for (std::size_t j = 0; j < cols; ++j) allowed[j] = !is_artificial[j];
  if (!t.optimize(phase2, allowed)) {
    result.status = LpStatus::Unbounded;
    return result;
  }

  std::vector<Num> y(cols, Num(0));
  for (std::size_t i = 0; i < t.rows(); ++i) y[t.basis(i)] = t.rhs(i);
  result.status = LpStatus::Optimal;
  result.values.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    Num x = subs[j].offset;
    for (const auto& [k, sign] : subs[j].terms) x += sign > 0 ? y[k] : Num(-y[k]);
    result.values[j] = x;
    result.objective_value += lp.objective[j] * x;
  }
  return result;
}

}  // namespace

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::LessEqual:
      return "<=";
    case Relation::Equal:
      return "=";
    case Relation::GreaterEqual:
      return ">=";
  }
  return "?";
}

std::string_view to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal:
      return "optimal";
    case LpStatus::Infeasible:
      return "infeasible";
    case LpStatus::Unbounded:
      return "unbounded";
  }
  return "?";
}

template <class Num>
std::size_t BasicLinearProgram<Num>::add_variable(std::string name, std::optional<Num> lo,
                                                  std::optional<Num> hi) {
  variables.push_back({std::move(name), std::move(lo), std::move(hi)});
  objective.resize(variables.size(), Num(0));
  return variables.size() - 1;
}

template <class Num>
void BasicLinearProgram<Num>::add_constraint(std::string name, std::vector<Num> coefficients,
                                             Relation relation, Num rhs) {
  if (coefficients.size() > variables.size()) {
    throw Error("lp-shape", fmt::format("constraint \"{}\" has {} coefficients for {} variables",
                                        name, coefficients.size(), variables.size()));
  }
  coefficients.resize(variables.size(), Num(0));
  constraints.push_back({std::move(name), std::move(coefficients), relation, std::move(rhs)});
}

template <class Num>
void BasicLinearProgram<Num>::validate() const {
  if (objective.size() != variables.size()) {
    throw Error("lp-shape", fmt::format("objective has {} coefficients for {} variables",
                                        objective.size(), variables.size()));
  }
  for (const auto& c : constraints) {
    if (c.coefficients.size() != variables.size()) {
      throw Error("lp-shape", fmt::format("constraint \"{}\" has {} coefficients for {} variables",
                                          c.name, c.coefficients.size(), variables.size()));
    }
  }
  for (const auto& v : variables) {
    if (v.lo && v.hi && *v.lo > *v.hi) {
      throw Error("lp-shape", fmt::format("variable \"{}\" has lower bound above upper bound",
                                          v.name));
    }
  }
}

template <class Num>
std::string BasicLinearProgram<Num>::to_text() const {
  const auto linear = [&](const std::vector<Num>& coefficients) {
    std::string out;
    for (std::size_t j = 0; j < coefficients.size(); ++j) {
      if (coefficients[j] == 0) continue;
      if (!out.empty()) out += " + ";
      out += format_number(coefficients[j]) + " " + variables[j].name;
    }
    return out.empty() ? std::string("0") : out;
  };
  std::string text = sense == Sense::Maximize ? "maximize " : "minimize ";
  text += linear(objective) + "\n";
  for (const auto& c : constraints) {
    text += fmt::format("{}: {} {} {}\n", c.name, linear(c.coefficients), to_string(c.relation),
                        format_number(c.rhs));
  }
  for (const auto& v : variables) {
    text += fmt::format("bound {}: {} <= {} <= {}\n", v.name,
                        v.lo ? format_number(*v.lo) : std::string("-inf"), v.name,
                        v.hi ? format_number(*v.hi) : std::string("+inf"));
  }
  return text;
}

template struct BasicLinearProgram<double>;
template struct BasicLinearProgram<Rational>;

LpSolution solve(const LinearProgram& lp) { return solve_impl(lp); }
ExactLpSolution solve(const ExactLinearProgram& lp) { return solve_impl(lp); }

ExactLinearProgram to_exact(const LinearProgram& lp) {
  ExactLinearProgram out;
  out.sense = lp.sense;
  const auto exact_opt = [](const std::optional<double>& x) -> std::optional<Rational> {
    if (!x) return std::nullopt;
    return exact_from_double(*x);
  };
  for (const auto& v : lp.variables) out.variables.push_back({v.name, exact_opt(v.lo), exact_opt(v.hi)});
  for (double c : lp.objective) out.objective.push_back(exact_from_double(c));
  for (const auto& c : lp.constraints) {
    std::vector<Rational> coefficients;
    for (double a : c.coefficients) coefficients.push_back(exact_from_double(a));
    out.constraints.push_back({c.name, std::move(coefficients), c.relation,
                               exact_from_double(c.rhs)});
  }
  return out;
}

}  // namespace infofair
