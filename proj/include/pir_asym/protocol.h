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

#ifndef PIR_ASYM_PROTOCOL_H_
#define PIR_ASYM_PROTOCOL_H_

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "pir_asym/field.h"
#include "pir_asym/rational.h"
#include "pir_asym/scheme.h"

namespace pir_asym {

// A query as a database receives it: terms name raw store positions.
using WireQuery = std::vector<Term>;

struct AnswerString {
  int database = 0;
  std::vector<FieldSymbol> symbols;

  friend bool operator==(const AnswerString&, const AnswerString&) = default;
};

class DatabaseNode {
 public:
  DatabaseNode(int id, std::shared_ptr<const MessageStore> store);

  int id() const { return id_; }
  int64_t traffic_count() const { return traffic_count_.load(); }

  // Symbol j is the sum of the store symbols named by queries[j].
  absl::StatusOr<AnswerString> Answer(std::span<const WireQuery> queries);

 private:
  int id_;
  std::shared_ptr<const MessageStore> store_;
  PrimeField field_;
  std::atomic<int64_t> traffic_count_{0};
};

// Carries each database's queries to it and collects the answers, merged
// in database order.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual absl::StatusOr<std::vector<AnswerString>> Exchange(
      const std::vector<std::vector<WireQuery>>& queries) = 0;
  virtual std::vector<int64_t> TrafficCounts() const = 0;
};

enum class TransportKind {
  kInline,    // databases answer one after another on the caller's thread
  kThreaded,  // one actor thread per database, fed through a channel
};

absl::StatusOr<std::unique_ptr<Transport>> MakeTransport(
    TransportKind kind, std::shared_ptr<const MessageStore> store,
    int num_databases);

// Maps permuted-domain terms (m, i) to store positions (m, pi_m(i)).
absl::StatusOr<std::vector<std::vector<WireQuery>>> RealizeQueries(
    const QueryPlan& plan, std::span<const Permutation> perms);

struct RetrievalResult {
  // The whole desired message W_d, back in the original order.
  std::vector<FieldSymbol> decoded;
  int64_t total_download = 0;
  Rational achieved_rate;
  std::vector<int64_t> per_db_traffic;
};

// Checks that every decode entry cancels exactly to one desired symbol.
absl::Status ValidateDecodeMap(const QueryPlan& plan, const DecodeMap& decode);

absl::StatusOr<RetrievalResult> Retrieve(const Scheme& scheme,
                                         std::span<const Permutation> perms,
                                         const PrimeField& field,
                                         Transport& transport);

struct HarnessConfig {
  std::vector<std::pair<SchemeSpec, int64_t>> components;
  uint32_t modulus = 2;
  int trials = 1;
  uint64_t seed = 0;
  TransportKind transport = TransportKind::kInline;
};

struct HarnessReport {
  int trials = 0;
  int failures = 0;
  std::vector<Rational> tau_expected;
  std::vector<Rational> tau_measured;
  Rational rate_expected;
  Rational rate_measured;
  std::vector<int64_t> per_db_traffic;
  std::optional<uint64_t> failing_seed;
  std::string failure;
};

// Runs random trials (store, permutations, desired index, shuffle) and stops
// at the first failure, recording its trial seed.
absl::StatusOr<HarnessReport> RunHarness(const HarnessConfig& config);

}  // namespace pir_asym

#endif  // PIR_ASYM_PROTOCOL_H_
