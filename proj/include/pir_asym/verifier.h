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

#ifndef PIR_ASYM_VERIFIER_H_
#define PIR_ASYM_VERIFIER_H_

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "pir_asym/field.h"
#include "pir_asym/protocol.h"
#include "pir_asym/scheme.h"
#include "pir_asym/stage_calculus.h"

namespace pir_asym {

// A query with its symbol indices erased.
struct QueryShape {
  int round = 0;
  std::vector<int> messages;

  friend auto operator<=>(const QueryShape&, const QueryShape&) = default;
};

struct CanonicalPlanShape {
  // Per database, sorted.
  std::vector<std::vector<QueryShape>> databases;

  friend bool operator==(const CanonicalPlanShape&,
                         const CanonicalPlanShape&) = default;
};

CanonicalPlanShape CanonicalShape(const QueryPlan& plan);

struct ShapeWitness {
  int database = 0;  // 0-based
  QueryShape shape;
  int64_t count_left = 0;
  int64_t count_right = 0;
};

// First (database, round, subset) whose multiplicity differs.
std::optional<ShapeWitness> ComparePlanShapes(const CanonicalPlanShape& left,
                                              const CanonicalPlanShape& right);

// Produces the plan a client would use for a given desired index.
using PlanSource = std::function<absl::StatusOr<Scheme>(int desired)>;

PlanSource CornerSource(const SchemeSpec& spec);
PlanSource MixtureSource(std::vector<std::pair<SchemeSpec, int64_t>> components);

struct PrivacyShapeResult {
  bool pass = true;
  // Set on failure: the desired pair that disagreed.
  int desired_left = 0;
  int desired_right = 0;
  std::optional<ShapeWitness> witness;
};

absl::StatusOr<PrivacyShapeResult> CheckPrivacyShape(int num_messages,
                                                     const PlanSource& source);
absl::StatusOr<PrivacyShapeResult> CheckPrivacyShape(const SchemeSpec& spec);

struct DistributionOptions {
  int64_t samples = 10000;
  double threshold = 0.05;
  uint64_t seed = 0;
  bool shuffle = true;
};

enum class DistributionVerdict { kPass, kFail, kInconclusive };

struct DistributionResult {
  int64_t samples = 0;
  double tv_estimate = 0;
  // Expected TV between two equal distributions at this sample size, for the
  // noisiest feature. A verdict needs it below half the threshold.
  double noise_floor = 0;
  DistributionVerdict verdict = DistributionVerdict::kInconclusive;
  // Feature that attained the maximum, e.g. "db1 pos0 support desired=2".
  std::string worst_feature;
};

inline constexpr int64_t kMinDistributionSamples = 1000;

// Monte-Carlo total-variation estimate between the realized per-database
// query marginals for desired = 1 and every other desired index.
absl::StatusOr<DistributionResult> CheckQueryDistribution(
    int num_messages, const PlanSource& source,
    const DistributionOptions& options);
absl::StatusOr<DistributionResult> CheckQueryDistribution(
    const SchemeSpec& spec, const DistributionOptions& options);

std::string VerdictName(DistributionVerdict verdict);

struct CapacityMatchReport {
  int num_messages = 0;
  int num_databases = 0;
  int corners_checked = 0;
  int grid_checked = 0;
  std::vector<std::string> mismatches;

  bool pass() const { return mismatches.empty(); }
};

// Corner rates against the exact small-M capacity, then the best mixture
// against the converse on `grid_points` traffic vectors. For N = 2 the grid
// is lambda_2 = i / (grid_points - 1); otherwise seeded random rationals.
absl::StatusOr<CapacityMatchReport> CheckCapacityMatch(int num_messages,
                                                       int num_databases,
                                                       int grid_points = 50,
                                                       uint64_t seed = 0);

struct OracleResult {
  bool decodable = false;
  int64_t rank = 0;
  // Permuted-domain desired symbols 1..L when decodable.
  std::vector<FieldSymbol> desired_symbols;
  // Desired symbol indices the linear system leaves undetermined.
  std::vector<int64_t> unrecoverable;
};

inline constexpr int64_t kOracleMaxDownloads = 10000;

// Gaussian elimination over GF(p) on the full query/answer system. Uses
// nothing but the plan's terms and the answers.
absl::StatusOr<OracleResult> BruteForceOracle(const QueryPlan& plan,
                                              std::span<const AnswerString> answers,
                                              int desired,
                                              const PrimeField& field);

// Drops one query from the plan. Decode references to later positions are
// shifted; references to the dropped query are left dangling.
Scheme RemoveQuery(const Scheme& scheme, QueryRef ref);

struct Mutant {
  std::string name;
  QueryRef removed;
  Scheme scheme;
};

// Up to three deficiency mutants: a deleted multi-message side-information
// query, a deleted round-1 singleton used as side information, and a deleted
// desired-carrying query. Kinds absent from the plan are skipped.
std::vector<Mutant> PlantedMutants(const Scheme& scheme);

}  // namespace pir_asym

#endif  // PIR_ASYM_VERIFIER_H_
