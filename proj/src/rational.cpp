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

#include "infofair/rational.hpp"

#include <cctype>
#include <cmath>

#include "infofair/error.hpp"

namespace infofair {
namespace {

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

boost::multiprecision::cpp_int parse_integer(std::string_view s) {
  bool negative = false;
  if (s.front() == '-' || s.front() == '+') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  boost::multiprecision::cpp_int value = 0;
  for (char c : s) value = value * 10 + (c - '0');
  return negative ? -value : value;
}

}  // namespace

Rational parse_fraction(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den =
      slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den)) {
    throw Error("parse", "not a fraction: \"" + std::string(text) + "\"");
  }
  const auto d = parse_integer(den);
  if (d == 0) throw Error("parse", "zero denominator: \"" + std::string(text) + "\"");
  return Rational(parse_integer(num), d);
}

Rational exact_from_double(double value) {
  if (!std::isfinite(value)) throw Error("parse", "non-finite value");
  // cpp_rational's double constructor is exact (binary fraction).
  return Rational(value);
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

std::string to_fraction_string(const Rational& value) {
  const auto num = boost::multiprecision::numerator(value);
  const auto den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

bool exactly_representable(const Rational& value) {
  return exact_from_double(to_double(value)) == value;
}

}  // namespace infofair
