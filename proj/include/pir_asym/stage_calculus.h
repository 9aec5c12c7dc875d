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

#ifndef PIR_ASYM_STAGE_CALCULUS_H_
#define PIR_ASYM_STAGE_CALCULUS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "pir_asym/rational.h"

namespace pir_asym {

// Exact traffic ratios (tau_1, ..., tau_N): non-negative, non-increasing and
// summing to one. The lambda form is tau / tau_1.
class TrafficVector {
 public:
  static absl::StatusOr<TrafficVector> FromTau(std::vector<Rational> tau);
  // lambda_1 must be 1 and the rest non-increasing in [0, 1].
  static absl::StatusOr<TrafficVector> FromLambda(
      std::span<const Rational> lambda);

  int size() const { return static_cast<int>(tau_.size()); }
  const std::vector<Rational>& tau() const { return tau_; }
  const Rational& operator[](int n) const {
    return tau_[static_cast<size_t>(n)];
  }
  std::vector<Rational> lambda() const;
  // Sum of tau_n over databases n > first (1-based), i.e. the tail after
  // database `first`.
  Rational Tail(int first) const;

  friend bool operator==(const TrafficVector&, const TrafficVector&) = default;

 private:
  explicit TrafficVector(std::vector<Rational> tau) : tau_(std::move(tau)) {}
  std::vector<Rational> tau_;
};

// A corner point identified by a non-decreasing sequence n_0 <= ... <= n_{M-1}
// in {1, ..., N}. Databases n_{l-1}+1 .. n_l form group l; databases after
// n_{M-1} stay silent.
class SchemeSpec {
 public:
  static absl::StatusOr<SchemeSpec> Create(int num_databases,
                                           std::vector<int> sequence);

  int num_messages() const { return static_cast<int>(sequence_.size()); }
  int num_databases() const { return num_databases_; }
  const std::vector<int>& sequence() const { return sequence_; }

  // Group indices l with n_l - n_{l-1} > 0, ascending. Never empty.
  const std::vector<int>& groups() const { return groups_; }
  // n_l - n_{l-1}, with n_{-1} = 0.
  int group_size(int group) const;
  // First database (0-based) of `group`.
  int group_begin(int group) const;
  // Group of a 0-based database index, or -1 for a silent database.
  int group_of(int database) const;

  friend bool operator==(const SchemeSpec&, const SchemeSpec&) = default;

 private:
  SchemeSpec(int num_databases, std::vector<int> sequence);

  int num_databases_;
  std::vector<int> sequence_;
  std::vector<int> groups_;
};

struct GroupStages {
  int group = 0;
  int size = 0;
  // Stages built per group-0 database from round-1 leftovers for this group.
  int64_t xi = 0;
  // stages[k - 1] = y_l[k] for rounds k = 1..M.
  std::vector<int64_t> stages;
};

// Solution y_l[k] of the stage recurrences.
struct StageCounts {
  SchemeSpec spec;
  std::vector<GroupStages> groups;

  // y_l[k]; zero for groups not in S.
  int64_t y(int group, int round) const;
  const GroupStages* Find(int group) const;
};

struct CornerPoint {
  SchemeSpec spec;
  TrafficVector tau;
  Rational rate;
  // t_n for every database, including silent ones (0).
  std::vector<int64_t> downloads;
  // L: desired symbols retrieved by one run of the scheme.
  int64_t desired_symbols = 0;

  int64_t total_downloads() const;
};

absl::StatusOr<StageCounts> SolveStages(const SchemeSpec& spec);

// Desired symbols per stage of round k is C(M-1, k-1) out of C(M, k)
// downloads. All arithmetic is exact.
absl::StatusOr<CornerPoint> ComputeCornerPoint(const SchemeSpec& spec);

// One corner per non-decreasing sequence, lexicographic in the sequence:
// C(M+N-1, M) entries.
absl::StatusOr<std::vector<CornerPoint>> EnumerateCorners(int num_messages,
                                                          int num_databases);

// Closed forms for M = 2 and M = 3, derived independently of the recurrences.
struct ClosedFormCorner {
  std::vector<Rational> tau;
  Rational rate;
  int64_t total_downloads = 0;
  int64_t desired_symbols = 0;
};
absl::StatusOr<ClosedFormCorner> SmallMessageClosedForm(const SchemeSpec& spec);

// N = 2 tradeoff for the corner whose second database joins with s2 side
// information symbols, i.e. n = (1, ..., 1, 2, ..., 2) with s2 leading ones.
struct TradeoffPoint {
  Rational tau2;
  Rational rate;
};
absl::StatusOr<TradeoffPoint> N2Tradeoff(int num_messages, int s2);

struct MixtureComponent {
  // Index into the corner list handed to SolveMixture.
  size_t corner = 0;
  Rational weight;
};

struct Mixture {
  std::vector<MixtureComponent> components;
  Rational rate;
};

// Time-sharing weights alpha >= 0, sum alpha = 1, with sum alpha_i tau_i equal
// to `target` and the largest mixed rate sum alpha_i R_i. Among optimal
// decompositions the one with the smallest support, then lexicographically
// smallest corner indices, is returned.
absl::StatusOr<Mixture> SolveMixture(const TrafficVector& target,
                                     std::span<const CornerPoint> corners);

// Integer repetition counts nu_i, coprime, such that concatenating nu_i runs
// of each component realizes the mixture weights (alpha_i ~ nu_i * D_i).
std::vector<int64_t> RepetitionCounts(const Mixture& mixture,
                                      std::span<const CornerPoint> corners);

}  // namespace pir_asym

#endif  // PIR_ASYM_STAGE_CALCULUS_H_
