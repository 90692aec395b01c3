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

#include "infofair/samples.hpp"

#include <algorithm>
#include <iterator>
#include <sstream>

#include <fmt/format.h>

#include "infofair/error.hpp"
#include "infofair/random.hpp"

namespace infofair {

std::vector<Sample> draw_samples(const Population& pop, std::size_t m, std::uint64_t seed,
                                 Scope scope) {
  const auto& cells = pop.scope_cells(scope);
  if (cells.empty()) throw Error("empty-scope", "cannot sample from an empty scope");
  std::vector<double> cumulative;
  cumulative.reserve(cells.size());
  double running = 0.0;
  for (std::size_t i : cells) {
    running += pop.cell(i).mass;
    cumulative.push_back(running);
  }
  Rng rng(seed);
  std::vector<Sample> out;
  out.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double u = rng.uniform() * running;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    const std::size_t cell = cells[static_cast<std::size_t>(it - cumulative.begin())];
    out.push_back({cell, rng.bernoulli(pop.cell(cell).p_star) ? 1 : 0});
  }
  return out;
}

std::vector<Sample> parse_samples(const Population& pop, std::string_view text) {
  std::vector<Sample> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view() : text.substr(eol + 1);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
    if (line.empty()) continue;
    const auto comma = line.rfind(',');
    if (comma == std::string_view::npos) {
      throw Error("parse", fmt::format("samples line {}: expected \"cell_id,y\"", line_no));
    }
    const std::string_view id = line.substr(0, comma);
    const std::string_view y = line.substr(comma + 1);
    if (y != "0" && y != "1") {
      throw Error("parse", fmt::format("samples line {}: outcome must be 0 or 1", line_no));
    }
    const auto idx = pop.find(id);
    if (!idx) {
      throw Error("unknown-cell", fmt::format("samples line {}: unknown cell \"{}\"", line_no, id));
    }
    out.push_back({*idx, y == "1" ? 1 : 0});
  }
  return out;
}

std::vector<Sample> load_samples(const Population& pop, std::istream& in) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_samples(pop, text);
}

std::string format_samples(const Population& pop, const std::vector<Sample>& samples) {
  std::string out;
  for (const Sample& s : samples) {
    out += pop.cell(s.cell).id;
    out += s.y ? ",1\n" : ",0\n";
  }
  return out;
}

}  // namespace infofair
