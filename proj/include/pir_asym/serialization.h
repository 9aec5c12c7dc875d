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

#ifndef PIR_ASYM_SERIALIZATION_H_
#define PIR_ASYM_SERIALIZATION_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "pir_asym/bounds.h"
#include "pir_asym/protocol.h"
#include "pir_asym/scheme.h"
#include "pir_asym/stage_calculus.h"

namespace pir_asym {

// Fractions are always written as "p/q" strings; decimals ride alongside
// for readability.

std::string CornersJson(std::span<const CornerPoint> corners);
std::string CornersCsv(std::span<const CornerPoint> corners);
std::string CornersTable(std::span<const CornerPoint> corners);

std::string BoundJson(const BoundResult& bound, const TrafficVector& tau,
                      int num_messages);

// Header carries M, N, p, the component specs and the shuffle seed.
std::string PlanJson(const QueryPlan& plan, uint32_t modulus);
absl::StatusOr<QueryPlan> ParsePlanJson(absl::string_view text);

std::string DecodeMapJson(const DecodeMap& decode);

std::string HarnessReportJson(const HarnessReport& report);

struct VerifyRecord {
  std::string check;
  std::string subject;
  bool pass = false;
  // Extra key/value facts.
  std::vector<std::pair<std::string, std::string>> details;
};

std::string VerifyRecordJsonLine(const VerifyRecord& record);

}  // namespace pir_asym

#endif  // PIR_ASYM_SERIALIZATION_H_
