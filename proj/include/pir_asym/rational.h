// Copyright 2026 The pir-asym Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PIR_ASYM_RATIONAL_H_
#define PIR_ASYM_RATIONAL_H_

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace pir_asym {

// Exact rational with arbitrary-precision numerator and denominator. Every
// traffic ratio, rate and bound in the library is carried in this type.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Parses "p/q", "p" or "-p/q". Decimal points are rejected so that targets are
// never silently rounded.
absl::StatusOr<Rational> ParseRational(absl::string_view text);

// Parses a comma-separated list such as "4/7,3/7".
absl::StatusOr<std::vector<Rational>> ParseRationalList(absl::string_view text);

// Always "p/q", including integers ("1/1", "0/1").
std::string FormatRational(const Rational& value);

// Fixed-point rendering rounded half away from zero using integer arithmetic
// only, so the text is identical on every platform.
std::string FormatDecimal(const Rational& value, int digits = 6);

double ToDouble(const Rational& value);

// C(n, k); zero when k < 0, n < 0 or k > n.
int64_t Binomial(int n, int k);

}  // namespace pir_asym

#endif  // PIR_ASYM_RATIONAL_H_
