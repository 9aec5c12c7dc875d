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

#ifndef PIR_ASYM_BOUNDS_H_
#define PIR_ASYM_BOUNDS_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "pir_asym/rational.h"
#include "pir_asym/stage_calculus.h"

namespace pir_asym {

struct BoundResult {
  Rational value;
  // Minimizing (n_1, ..., n_{M-1}); empty for M = 1.
  std::vector<int> argmin_sequence;
  std::optional<std::map<std::vector<int>, Rational>> all_branches;
};

enum class BranchSet {
  kMonotone,    // non-decreasing sequences only
  kExhaustive,  // all of {1..N}^{M-1}
};

struct BoundOptions {
  BranchSet branches = BranchSet::kMonotone;
  bool record_branches = false;
};

// Value of a single branch of the converse for the sequence (n_1..n_{M-1}).
Rational BranchValue(const TrafficVector& tau, const std::vector<int>& sequence);

// Minimum over branches; ties go to the lexicographically smallest sequence.
absl::StatusOr<BoundResult> UpperBound(const TrafficVector& tau,
                                       int num_messages,
                                       BoundOptions options = {});

// (N^{M-1} - 1) / (N^M - 1).
absl::StatusOr<Rational> AsymmetryThreshold(int num_messages,
                                            int num_databases);

// (1 + 1/N + ... + 1/N^{M-1})^{-1}.
Rational SymmetricCapacity(int num_messages, int num_databases);

// Exact capacity for M = 2 and M = 3.
absl::StatusOr<Rational> CapacitySmallM(const TrafficVector& tau,
                                        int num_messages);

struct SweepRow {
  TrafficVector tau;
  Rational upper_bound;
  Rational achievable;
  Rational gap;
  std::vector<int> argmin_sequence;
};

// Evaluates the bound and the best time-sharing rate on a grid over the
// ordered simplex. The grid mixes the vertices (1/k, ..., 1/k, 0, ..., 0),
// k = 1..N, with weights in steps of 1 / (grid - 1). Rows are sorted by tau.
absl::StatusOr<std::vector<SweepRow>> Sweep(int num_messages, int num_databases,
                                            int grid);

std::string SweepCsv(const std::vector<SweepRow>& rows, int num_databases);

}  // namespace pir_asym

#endif  // PIR_ASYM_BOUNDS_H_
