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

#include "pir_asym/bounds.h"

#include <algorithm>
#include <atomic>
#include <thread>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "pir_asym/combinatorics.h"
#include "pir_asym/status_macros.h"

namespace pir_asym {
namespace {

// Compositions of `total` into `parts` non-negative integers, lex order.
void Compositions(int total, int parts, std::vector<int>& prefix,
                  std::vector<std::vector<int>>& out) {
  if (static_cast<int>(prefix.size()) == parts - 1) {
    prefix.push_back(total);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int v = 0; v <= total; ++v) {
    prefix.push_back(v);
    Compositions(total - v, parts, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

Rational BranchValue(const TrafficVector& tau,
                     const std::vector<int>& sequence) {
  Rational numerator = 1;
  Rational denominator = 1;
  BigInt product = 1;
  for (int n : sequence) {
    product *= n;
    numerator += tau.Tail(n) / Rational(product);
    denominator += Rational(1) / Rational(product);
  }
  return numerator / denominator;
}

absl::StatusOr<BoundResult> UpperBound(const TrafficVector& tau,
                                       int num_messages, BoundOptions options) {
  if (num_messages < 1) {
    return absl::InvalidArgumentError("need M >= 1");
  }
  const int n = tau.size();
  const std::vector<std::vector<int>> branches =
      options.branches == BranchSet::kMonotone
          ? MonotoneSequences(num_messages - 1, n)
          : AllSequences(num_messages - 1, n);
  BoundResult result;
  if (options.record_branches) result.all_branches.emplace();
  bool first = true;
  // Both generators emit lexicographic order, so strict improvement keeps
  // the lexicographically smallest minimizer.
  for (const std::vector<int>& sequence : branches) {
    Rational value = BranchValue(tau, sequence);
    if (first || value < result.value) {
      result.value = value;
      result.argmin_sequence = sequence;
      first = false;
    }
    if (result.all_branches) result.all_branches->emplace(sequence, value);
  }
  return result;
}

absl::StatusOr<Rational> AsymmetryThreshold(int num_messages,
                                            int num_databases) {
  if (num_databases <= 1) {
    return absl::InvalidArgumentError("threshold needs N > 1");
  }
  if (num_messages < 1) {
    return absl::InvalidArgumentError("need M >= 1");
  }
  BigInt power = 1;
  for (int i = 0; i < num_messages - 1; ++i) power *= num_databases;
  return Rational(power - 1, power * num_databases - 1);
}

Rational SymmetricCapacity(int num_messages, int num_databases) {
  Rational sum = 0;
  Rational term = 1;
  for (int i = 0; i < num_messages; ++i) {
    sum += term;
    term /= num_databases;
  }
  return 1 / sum;
}

absl::StatusOr<Rational> CapacitySmallM(const TrafficVector& tau,
                                        int num_messages) {
  const int n = tau.size();
  std::optional<Rational> best;
  auto offer = [&](Rational value) {
    if (!best || value < *best) best = std::move(value);
  };
  if (num_messages == 2) {
    for (int n0 = 1; n0 <= n; ++n0) {
      const Rational inv(1, n0);
      offer((1 + inv * tau.Tail(n0)) / (1 + inv));
    }
  } else if (num_messages == 3) {
    for (int n0 = 1; n0 <= n; ++n0) {
      for (int n1 = n0; n1 <= n; ++n1) {
        const Rational a(1, n0);
        const Rational b(1, n0 * n1);
        offer((1 + a * tau.Tail(n0) + b * tau.Tail(n1)) / (1 + a + b));
      }
    }
  } else {
    return absl::InvalidArgumentError("exact capacity is known only for M = 2, 3");
  }
  return *best;
}

absl::StatusOr<std::vector<SweepRow>> Sweep(int num_messages, int num_databases,
                                            int grid) {
  if (grid < 2) {
    return absl::InvalidArgumentError("grid needs at least 2 points");
  }
  if (num_messages < 1 || num_databases < 1) {
    return absl::InvalidArgumentError("need M >= 1 and N >= 1");
  }
  PIR_ASYM_ASSIGN_OR_RETURN(std::vector<CornerPoint> corners,
                            EnumerateCorners(num_messages, num_databases));

  std::vector<std::vector<int>> weights;
  std::vector<int> prefix;
  Compositions(grid - 1, num_databases, prefix, weights);

  std::vector<TrafficVector> points;
  for (const std::vector<int>& w : weights) {
    std::vector<Rational> tau(static_cast<size_t>(num_databases), Rational(0));
    for (int k = 1; k <= num_databases; ++k) {
      const Rational share(w[static_cast<size_t>(k - 1)], (grid - 1) * k);
      for (int j = 0; j < k; ++j) tau[static_cast<size_t>(j)] += share;
    }
    PIR_ASYM_ASSIGN_OR_RETURN(TrafficVector traffic,
                              TrafficVector::FromTau(std::move(tau)));
    points.push_back(std::move(traffic));
  }

  std::vector<std::optional<absl::StatusOr<SweepRow>>> results(points.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < points.size(); i = next++) {
      absl::StatusOr<BoundResult> bound = UpperBound(points[i], num_messages);
      if (!bound.ok()) {
        results[i] = bound.status();
        continue;
      }
      absl::StatusOr<Mixture> mixture = SolveMixture(points[i], corners);
      if (!mixture.ok()) {
        results[i] = mixture.status();
        continue;
      }
      results[i] = SweepRow{points[i], bound->value, mixture->rate,
                            bound->value - mixture->rate,
                            bound->argmin_sequence};
    }
  };
  const unsigned threads =
      std::clamp<unsigned>(std::thread::hardware_concurrency(), 1, 8);
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  std::vector<SweepRow> rows;
  rows.reserve(results.size());
  for (auto& r : results) {
    if (!r->ok()) return r->status();
    rows.push_back(std::move(**r));
  }
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return a.tau.tau() < b.tau.tau();
  });
  return rows;
}

std::string SweepCsv(const std::vector<SweepRow>& rows, int num_databases) {
  std::string out;
  for (int n = 1; n <= num_databases; ++n) absl::StrAppend(&out, "tau_", n, ",");
  absl::StrAppend(&out, "upper_bound,achievable,gap,argmin_sequence\n");
  for (const SweepRow& row : rows) {
    for (const Rational& t : row.tau.tau()) {
      absl::StrAppend(&out, FormatDecimal(t), ",");
    }
    absl::StrAppend(&out, FormatDecimal(row.upper_bound), ",",
                    FormatDecimal(row.achievable), ",", FormatDecimal(row.gap),
                    ",", absl::StrJoin(row.argmin_sequence, ";"), "\n");
  }
  return out;
}

}  // namespace pir_asym
