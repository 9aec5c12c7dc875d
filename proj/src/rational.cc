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

#include "pir_asym/rational.h"

#include <cstdlib>
#include <string>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "absl/strings/ascii.h"

namespace pir_asym {
namespace {

absl::StatusOr<BigInt> ParseInteger(absl::string_view text) {
  absl::string_view digits = absl::StripAsciiWhitespace(text);
  bool negative = false;
  if (absl::ConsumePrefix(&digits, "-")) {
    negative = true;
  } else {
    absl::ConsumePrefix(&digits, "+");
  }
  if (digits.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected an integer, got '", text, "'"));
  }
  BigInt value = 0;
  for (char c : digits) {
    if (!absl::ascii_isdigit(c)) {
      return absl::InvalidArgumentError(
          absl::StrCat("expected an exact fraction, got '", text, "'"));
    }
    value = value * 10 + (c - '0');
  }
  return negative ? BigInt(-value) : value;
}

}  // namespace

absl::StatusOr<Rational> ParseRational(absl::string_view text) {
  std::vector<absl::string_view> parts = absl::StrSplit(text, '/');
  if (parts.size() > 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed fraction '", text, "'"));
  }
  absl::StatusOr<BigInt> num = ParseInteger(parts[0]);
  if (!num.ok()) return num.status();
  BigInt den = 1;
  if (parts.size() == 2) {
    absl::StatusOr<BigInt> parsed = ParseInteger(parts[1]);
    if (!parsed.ok()) return parsed.status();
    den = *parsed;
  }
  if (den == 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("zero denominator in '", text, "'"));
  }
  return Rational(*num, den);
}

absl::StatusOr<std::vector<Rational>> ParseRationalList(absl::string_view text) {
  std::vector<Rational> values;
  for (absl::string_view part : absl::StrSplit(text, ',')) {
    absl::StatusOr<Rational> value = ParseRational(part);
    if (!value.ok()) return value.status();
    values.push_back(*std::move(value));
  }
  return values;
}

std::string FormatRational(const Rational& value) {
  return absl::StrCat(boost::multiprecision::numerator(value).str(), "/",
                      boost::multiprecision::denominator(value).str());
}

std::string FormatDecimal(const Rational& value, int digits) {
  BigInt scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  const bool negative = num < 0;
  if (negative) num = -num;
  // round(num * scale / den), halves away from zero.
  BigInt scaled = (2 * num * scale + den) / (2 * den);
  const BigInt whole = scaled / scale;
  std::string frac = BigInt(scaled % scale).str();
  if (static_cast<int>(frac.size()) < digits) {
    frac.insert(0, digits - frac.size(), '0');
  }
  std::string out = (negative && scaled != 0) ? "-" : "";
  absl::StrAppend(&out, whole.str());
  if (digits > 0) absl::StrAppend(&out, ".", frac);
  return out;
}

double ToDouble(const Rational& value) {
  return value.convert_to<double>();
}

int64_t Binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  int64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    // Exact at every step: result * (n - k + i) is divisible by i.
    result = result * (n - k + i) / i;
  }
  return result;
}

}  // namespace pir_asym
