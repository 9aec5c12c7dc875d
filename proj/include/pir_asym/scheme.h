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

#ifndef PIR_ASYM_SCHEME_H_
#define PIR_ASYM_SCHEME_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "pir_asym/stage_calculus.h"

namespace pir_asym {

// One (message, symbol) summand. Both indices are 1-based and the symbol
// index lives in the permuted domain.
struct Term {
  int message = 0;
  int64_t symbol = 0;

  friend auto operator<=>(const Term&, const Term&) = default;
};

struct Query {
  // Sorted by message; messages are distinct.
  std::vector<Term> terms;
  int round = 0;
  // Stage number within its database, counted across the whole plan.
  int64_t stage = 0;

  friend bool operator==(const Query&, const Query&) = default;
};

struct QueryRef {
  int database = 0;      // 0-based
  int64_t position = 0;  // 0-based index into that database's query list

  friend auto operator<=>(const QueryRef&, const QueryRef&) = default;
};

struct PlanComponent {
  std::vector<int> sequence;
  int64_t repetitions = 1;

  friend bool operator==(const PlanComponent&, const PlanComponent&) = default;
};

// What the databases get to see. The desired index is deliberately absent.
struct QueryPlan {
  int num_messages = 0;
  int num_databases = 0;
  std::vector<std::vector<Query>> databases;
  std::vector<PlanComponent> components;
  std::optional<uint64_t> shuffle_seed;
  // Desired symbols retrieved; also the message length the plan needs.
  int64_t length = 0;
  // Highest symbol index touched per message (index m - 1).
  std::vector<int64_t> symbol_budget;

  std::vector<int64_t> Traffic() const;
  int64_t TotalDownloads() const;

  friend bool operator==(const QueryPlan&, const QueryPlan&) = default;
};

// A desired-carrying query minus the listed side-information queries leaves
// exactly one desired symbol.
struct DecodeEntry {
  QueryRef target;
  int64_t desired_symbol = 0;
  std::vector<QueryRef> side_info;

  friend bool operator==(const DecodeEntry&, const DecodeEntry&) = default;
};

// Client-side only.
struct DecodeMap {
  int desired = 0;
  std::vector<DecodeEntry> entries;

  friend bool operator==(const DecodeMap&, const DecodeMap&) = default;
};

struct Scheme {
  QueryPlan plan;
  DecodeMap decode;
};

struct LengthBudget {
  // L: desired symbols, equal to the required message length.
  int64_t length = 0;
  // Fresh symbols consumed from each undesired message.
  int64_t undesired_per_message = 0;
};

absl::StatusOr<LengthBudget> RequiredLength(const SchemeSpec& spec);
absl::StatusOr<LengthBudget> RequiredLength(
    const std::vector<std::pair<SchemeSpec, int64_t>>& components);

// Canonical (unshuffled) plan for one corner point.
absl::StatusOr<Scheme> Synthesize(const SchemeSpec& spec, int desired);

// Concatenates copies over disjoint per-message symbol ranges. All schemes
// must share M, N and the desired index.
absl::StatusOr<Scheme> Concatenate(
    const std::vector<std::pair<const Scheme*, int64_t>>& parts);

// Synthesizes every component and concatenates with the given repetitions.
absl::StatusOr<Scheme> SynthesizeMixture(
    const std::vector<std::pair<SchemeSpec, int64_t>>& components, int desired);

// Corner components and repetition counts whose concatenation meets `target`
// exactly at the best time-sharing rate.
absl::StatusOr<std::vector<std::pair<SchemeSpec, int64_t>>> ComponentsForTarget(
    const TrafficVector& target, int num_messages);

// Per-database Fisher-Yates reordering; decode references follow the queries.
Scheme Shuffle(const Scheme& scheme, uint64_t seed);

// Structural checks: term ranges, distinct messages, round = |terms|.
absl::Status ValidatePlan(const QueryPlan& plan);

// Letters for M <= 26, "m<index>" otherwise.
std::string MessageName(int message, int num_messages);
std::string FormatQuery(const Query& query, int num_messages);

// Text table: one column per database, rows grouped by round.
std::string RenderTable(const QueryPlan& plan);

}  // namespace pir_asym

#endif  // PIR_ASYM_SCHEME_H_
