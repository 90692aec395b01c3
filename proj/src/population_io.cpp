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

#include "infofair/population_io.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "infofair/error.hpp"

namespace infofair {
namespace {

using Json = nlohmann::ordered_json;

Rational read_value(const Json& node, const std::string& path) {
  if (node.is_number()) return exact_from_double(node.get<double>());
  if (node.is_string()) {
    try {
      return parse_fraction(node.get<std::string>());
    } catch (const Error& e) {
      throw Error("schema", fmt::format("{}: {}", path, e.what()));
    }
  }
  throw Error("schema", fmt::format("{}: expected a number or \"p/q\" string", path));
}

const Json& require(const Json& obj, const char* key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw Error("schema", fmt::format("{}: missing field \"{}\"", path, key));
  return *it;
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

std::string format_value(const Rational& exact) {
  if (exactly_representable(exact)) return fmt::format("{:.17g}", to_double(exact));
  return Json(to_fraction_string(exact)).dump();
}

}  // namespace

bool PopulationFile::has_predictor(std::string_view name) const {
  return std::any_of(predictors.begin(), predictors.end(),
                     [&](const Predictor& p) { return p.name() == name; });
}

const Predictor& PopulationFile::predictor(std::string_view name) const {
  for (const auto& p : predictors) {
    if (p.name() == name) return p;
  }
  throw Error("unknown-predictor", fmt::format("unknown predictor \"{}\"", name));
}

PopulationFile parse_population(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw Error("parse", fmt::format("line {}: {}", line_of(text, e.byte), e.what()));
  }
  if (!root.is_object()) throw Error("schema", "top level must be a JSON object");

  const Json& cells_node = require(root, "cells", "$");
  if (!cells_node.is_array()) throw Error("schema", "$.cells: expected an array");
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < cells_node.size(); ++i) {
    const std::string path = fmt::format("$.cells[{}]", i);
    const Json& c = cells_node[i];
    if (!c.is_object()) throw Error("schema", path + ": expected an object");
    const Json& id = require(c, "id", path);
    if (!id.is_string()) throw Error("schema", path + ".id: expected a string");
    const Json& group = require(c, "group", path);
    if (!group.is_string()) throw Error("schema", path + ".group: expected \"A\" or \"B\"");
    Group g;
    try {
      g = parse_group(group.get<std::string>());
    } catch (const Error& e) {
      throw Error("schema", fmt::format("{}.group: {}", path, e.what()));
    }
    cells.push_back(Cell::make_exact(id.get<std::string>(),
                                     read_value(require(c, "mass", path), path + ".mass"), g,
                                     read_value(require(c, "p_star", path), path + ".p_star")));
  }

  std::optional<double> grid;
  if (const auto it = root.find("grid_alpha"); it != root.end() && !it->is_null()) {
    if (!it->is_number()) throw Error("schema", "$.grid_alpha: expected a number");
    grid = it->get<double>();
    if (!(*grid > 0.0 && *grid < 1.0)) throw Error("grid", "$.grid_alpha: must lie in (0,1)");
  }

  PopulationFile file{Population(std::move(cells)), {}, grid};
  const Population& pop = file.population;

  if (const auto it = root.find("predictors"); it != root.end()) {
    if (!it->is_object()) throw Error("schema", "$.predictors: expected an object");
    for (const auto& [name, scores_node] : it->items()) {
      const std::string path = "$.predictors." + name;
      if (!scores_node.is_object()) throw Error("schema", path + ": expected an object");
      std::vector<std::optional<Rational>> seen(pop.size());
      for (const auto& [cell_id, value] : scores_node.items()) {
        const auto idx = pop.find(cell_id);
        if (!idx) throw Error("unknown-cell", fmt::format("{}: unknown cell \"{}\"", path, cell_id));
        seen[*idx] = read_value(value, path + "." + cell_id);
      }
      std::vector<double> scores;
      std::vector<Rational> exact;
      for (std::size_t i = 0; i < pop.size(); ++i) {
        if (!seen[i]) {
          throw Error("missing-score",
                      fmt::format("{}: no score for cell \"{}\"", path, pop.cell(i).id));
        }
        Rational e = *seen[i];
        double s = to_double(e);
        if (grid && s > 0.0 && s < 1.0 && on_grid(s, *grid)) {
          const double snapped = snap_to_grid(s, *grid);
          if (snapped != s) {
            s = snapped;
            e = exact_from_double(s);
          }
        }
        scores.push_back(s);
        exact.push_back(std::move(e));
      }
      Predictor z(name, std::move(scores), std::move(exact), grid);
      z.validate(pop);
      file.predictors.push_back(std::move(z));
    }
  }
  return file;
}

PopulationFile load_population(std::istream& in) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_population(text);
}

PopulationFile load_population_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io", "cannot open " + path.string());
  return load_population(in);
}

std::string serialize_population(const Population& pop, std::span<const Predictor> predictors,
                                 std::optional<double> grid_alpha) {
  std::ostringstream out;
  out << "{\n  \"cells\": [\n";
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const Cell& c = pop.cell(i);
    out << "    {\"id\": " << Json(c.id).dump() << ", \"mass\": " << format_value(c.exact_mass)
        << ", \"group\": \"" << to_string(c.group)
        << "\", \"p_star\": " << format_value(c.exact_p_star) << "}"
        << (i + 1 < pop.size() ? ",\n" : "\n");
  }
  out << "  ],\n  \"predictors\": {";
  for (std::size_t k = 0; k < predictors.size(); ++k) {
    const Predictor& z = predictors[k];
    out << (k == 0 ? "\n" : ",\n") << "    " << Json(z.name()).dump() << ": {";
    for (std::size_t i = 0; i < pop.size(); ++i) {
      out << (i == 0 ? "" : ", ") << Json(pop.cell(i).id).dump() << ": "
          << format_value(z.exact_score(i));
    }
    out << "}";
  }
  out << (predictors.empty() ? "}" : "\n  }");
  if (grid_alpha) out << ",\n  \"grid_alpha\": " << fmt::format("{:.17g}", *grid_alpha);
  out << "\n}\n";
  return out.str();
}

std::string serialize_population(const PopulationFile& file) {
  return serialize_population(file.population, file.predictors, file.grid_alpha);
}

}  // namespace infofair
