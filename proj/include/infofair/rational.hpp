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

#ifndef INFOFAIR_RATIONAL_HPP_
#define INFOFAIR_RATIONAL_HPP_

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace infofair {

using Rational = boost::multiprecision::cpp_rational;

// Parses "p/q" or an integer literal. Throws Error("parse") otherwise.
Rational parse_fraction(std::string_view text);

// The exact binary value of a finite double.
Rational exact_from_double(double value);

double to_double(const Rational& value);

// "p/q", or "p" when the denominator is one.
std::string to_fraction_string(const Rational& value);

// True when the double nearest to `value` represents it exactly.
bool exactly_representable(const Rational& value);

}  // namespace infofair

#endif  // INFOFAIR_RATIONAL_HPP_
