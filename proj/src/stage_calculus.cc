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

#include "pir_asym/stage_calculus.h"

#include <algorithm>
#include <optional>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "pir_asym/combinatorics.h"
#include "pir_asym/status_macros.h"

namespace pir_asym {
namespace {

absl::Status CheckedMulAdd(int64_t& acc, int64_t a, int64_t b) {
  int64_t product;
  if (__builtin_mul_overflow(a, b, &product) ||
      __builtin_add_overflow(acc, product, &acc)) {
    return absl::ResourceExhaustedError("stage count overflows 64 bits");
  }
  return absl::OkStatus();
}

}  // namespace

// ---------------------------------------------------------------------------
// TrafficVector

absl::StatusOr<TrafficVector> TrafficVector::FromTau(std::vector<Rational> tau) {
  if (tau.empty()) {
    return absl::InvalidArgumentError("traffic vector is empty");
  }
  Rational sum = 0;
  for (size_t n = 0; n < tau.size(); ++n) {
    if (tau[n] < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("tau_", n + 1, " is negative"));
    }
    if (n > 0 && tau[n] > tau[n - 1]) {
      return absl::InvalidArgumentError(
          absl::StrCat("traffic ratios must be non-increasing; tau_", n + 1,
                       " > tau_", n));
    }
    sum += tau[n];
  }
  if (sum != 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("traffic ratios sum to ", FormatRational(sum),
                     ", expected 1"));
  }
  return TrafficVector(std::move(tau));
}

absl::StatusOr<TrafficVector> TrafficVector::FromLambda(
    std::span<const Rational> lambda) {
  if (lambda.empty() || lambda[0] != 1) {
    return absl::InvalidArgumentError("lambda_1 must equal 1");
  }
  Rational sum = 0;
  for (size_t n = 0; n < lambda.size(); ++n) {
    if (lambda[n] < 0 || lambda[n] > 1 || (n > 0 && lambda[n] > lambda[n - 1])) {
      return absl::InvalidArgumentError(
          "lambda must be non-increasing within [0, 1]");
    }
    sum += lambda[n];
  }
  std::vector<Rational> tau;
  tau.reserve(lambda.size());
  for (const Rational& l : lambda) tau.push_back(l / sum);
  return FromTau(std::move(tau));
}

std::vector<Rational> TrafficVector::lambda() const {
  std::vector<Rational> out;
  out.reserve(tau_.size());
  for (const Rational& t : tau_) out.push_back(t / tau_[0]);
  return out;
}

Rational TrafficVector::Tail(int first) const {
  Rational sum = 0;
  for (int n = first; n < size(); ++n) sum += tau_[static_cast<size_t>(n)];
  return sum;
}

// ---------------------------------------------------------------------------
// SchemeSpec

SchemeSpec::SchemeSpec(int num_databases, std::vector<int> sequence)
    : num_databases_(num_databases), sequence_(std::move(sequence)) {
  int previous = 0;
  for (int i = 0; i < static_cast<int>(sequence_.size()); ++i) {
    if (sequence_[static_cast<size_t>(i)] > previous) groups_.push_back(i);
    previous = sequence_[static_cast<size_t>(i)];
  }
}

absl::StatusOr<SchemeSpec> SchemeSpec::Create(int num_databases,
                                              std::vector<int> sequence) {
  if (num_databases < 1) {
    return absl::InvalidArgumentError("need at least one database");
  }
  if (sequence.empty()) {
    return absl::InvalidArgumentError("sequence must have M >= 1 entries");
  }
  for (size_t i = 0; i < sequence.size(); ++i) {
    if (sequence[i] < 1 || sequence[i] > num_databases) {
      return absl::InvalidArgumentError(
          absl::StrCat("n_", i, " = ", sequence[i], " outside 1..",
                       num_databases));
    }
    if (i > 0 && sequence[i] < sequence[i - 1]) {
      return absl::InvalidArgumentError(
          absl::StrCat("sequence (", absl::StrJoin(sequence, ","),
                       ") is not non-decreasing"));
    }
  }
  return SchemeSpec(num_databases, std::move(sequence));
}

int SchemeSpec::group_size(int group) const {
  const int previous = group == 0 ? 0 : sequence_[static_cast<size_t>(group - 1)];
  return sequence_[static_cast<size_t>(group)] - previous;
}

int SchemeSpec::group_begin(int group) const {
  return group == 0 ? 0 : sequence_[static_cast<size_t>(group - 1)];
}

int SchemeSpec::group_of(int database) const {
  for (int group : groups_) {
    if (database >= group_begin(group) &&
        database < sequence_[static_cast<size_t>(group)]) {
      return group;
    }
  }
  return -1;
}

// ---------------------------------------------------------------------------
// Stage recurrences

int64_t StageCounts::y(int group, int round) const {
  const GroupStages* g = Find(group);
  if (g == nullptr || round < 1 ||
      round > static_cast<int>(g->stages.size())) {
    return 0;
  }
  return g->stages[static_cast<size_t>(round - 1)];
}

const GroupStages* StageCounts::Find(int group) const {
  for (const GroupStages& g : groups) {
    if (g.group == group) return &g;
  }
  return nullptr;
}

absl::StatusOr<StageCounts> SolveStages(const SchemeSpec& spec) {
  const int m = spec.num_messages();
  // Group 0 contributes no binomial factor: it opens with plain downloads.
  auto product_excluding = [&](int skip) -> absl::StatusOr<int64_t> {
    int64_t product = 1;
    for (int s : spec.groups()) {
      if (s == 0 || s == skip) continue;
      int64_t next = 0;
      PIR_ASYM_RETURN_IF_ERROR(CheckedMulAdd(next, product, Binomial(m - 2, s - 1)));
      product = next;
    }
    return product;
  };

  StageCounts counts{spec, {}};
  for (int group : spec.groups()) {
    GroupStages g;
    g.group = group;
    g.size = spec.group_size(group);
    PIR_ASYM_ASSIGN_OR_RETURN(g.xi, product_excluding(group));
    g.stages.assign(static_cast<size_t>(m), 0);
    counts.groups.push_back(std::move(g));
  }
  // groups() is ascending and always starts with group 0.
  PIR_ASYM_ASSIGN_OR_RETURN(counts.groups.front().stages[0],
                            product_excluding(-1));

  const int64_t n0 = spec.sequence()[0];
  for (int k = 2; k <= m; ++k) {
    for (GroupStages& g : counts.groups) {
      if (k <= g.group) continue;
      int64_t value = 0;
      if (g.group >= 2 && k == g.group + 1) {
        PIR_ASYM_RETURN_IF_ERROR(CheckedMulAdd(value, n0, g.xi));
      }
      for (const GroupStages& h : counts.groups) {
        const int64_t peers = h.size - (h.group == g.group ? 1 : 0);
        PIR_ASYM_RETURN_IF_ERROR(
            CheckedMulAdd(value, peers, h.stages[static_cast<size_t>(k - 2)]));
      }
      g.stages[static_cast<size_t>(k - 1)] = value;
    }
  }
  return counts;
}

// ---------------------------------------------------------------------------
// Corner points

int64_t CornerPoint::total_downloads() const {
  int64_t total = 0;
  for (int64_t t : downloads) total += t;
  return total;
}

absl::StatusOr<CornerPoint> ComputeCornerPoint(const SchemeSpec& spec) {
  PIR_ASYM_ASSIGN_OR_RETURN(StageCounts counts, SolveStages(spec));
  const int m = spec.num_messages();
  std::vector<int64_t> downloads(static_cast<size_t>(spec.num_databases()), 0);
  int64_t total = 0;
  int64_t desired = 0;
  for (const GroupStages& g : counts.groups) {
    int64_t per_db_total = 0;
    int64_t per_db_desired = 0;
    for (int k = 1; k <= m; ++k) {
      const int64_t stages = g.stages[static_cast<size_t>(k - 1)];
      PIR_ASYM_RETURN_IF_ERROR(
          CheckedMulAdd(per_db_total, Binomial(m, k), stages));
      PIR_ASYM_RETURN_IF_ERROR(
          CheckedMulAdd(per_db_desired, Binomial(m - 1, k - 1), stages));
    }
    const int begin = spec.group_begin(g.group);
    for (int db = begin; db < begin + g.size; ++db) {
      downloads[static_cast<size_t>(db)] = per_db_total;
    }
    PIR_ASYM_RETURN_IF_ERROR(CheckedMulAdd(total, g.size, per_db_total));
    PIR_ASYM_RETURN_IF_ERROR(CheckedMulAdd(desired, g.size, per_db_desired));
  }
  if (total <= 0) {
    return absl::InternalError("corner point downloads nothing");
  }
  std::vector<Rational> tau;
  tau.reserve(downloads.size());
  for (int64_t t : downloads) tau.emplace_back(t, total);
  PIR_ASYM_ASSIGN_OR_RETURN(TrafficVector traffic,
                            TrafficVector::FromTau(std::move(tau)));
  return CornerPoint{spec, std::move(traffic), Rational(desired, total),
                     std::move(downloads), desired};
}

absl::StatusOr<std::vector<CornerPoint>> EnumerateCorners(int num_messages,
                                                          int num_databases) {
  if (num_messages < 1 || num_databases < 1) {
    return absl::InvalidArgumentError("need M >= 1 and N >= 1");
  }
  std::vector<CornerPoint> corners;
  for (std::vector<int>& sequence :
       MonotoneSequences(num_messages, num_databases)) {
    PIR_ASYM_ASSIGN_OR_RETURN(SchemeSpec spec,
                              SchemeSpec::Create(num_databases, std::move(sequence)));
    PIR_ASYM_ASSIGN_OR_RETURN(CornerPoint corner, ComputeCornerPoint(spec));
    corners.push_back(std::move(corner));
  }
  return corners;
}

absl::StatusOr<ClosedFormCorner> SmallMessageClosedForm(const SchemeSpec& spec) {
  const std::vector<int>& n = spec.sequence();
  std::vector<Rational> group_tau;
  ClosedFormCorner out;
  if (spec.num_messages() == 2) {
    const int64_t n0 = n[0], n1 = n[1];
    out.total_downloads = n0 * (n1 + 1);
    out.desired_symbols = n0 * n1;
    out.rate = Rational(n1, n1 + 1);
    group_tau = {Rational(n0 + 1, n0 * (n1 + 1)), Rational(1, n1 + 1)};
  } else if (spec.num_messages() == 3) {
    const int64_t n0 = n[0], n1 = n[1], n2 = n[2];
    const int64_t core = n1 * n2 + n1 + 1;
    out.total_downloads = n0 * core;
    out.desired_symbols = n0 * n1 * n2;
    out.rate = Rational(n1 * n2, core);
    group_tau = {Rational(n0 * n1 + n0 + 1, n0 * core), Rational(n1 + 1, core),
                 Rational(n1, core)};
  } else {
    return absl::InvalidArgumentError("closed forms exist only for M = 2, 3");
  }
  out.tau.assign(static_cast<size_t>(spec.num_databases()), Rational(0));
  int previous = 0;
  for (size_t l = 0; l < n.size(); ++l) {
    for (int db = previous; db < n[l]; ++db) {
      out.tau[static_cast<size_t>(db)] = group_tau[l];
    }
    previous = n[l];
  }
  return out;
}

absl::StatusOr<TradeoffPoint> N2Tradeoff(int num_messages, int s2) {
  const int m = num_messages;
  if (m < 2 || m > 60) {
    return absl::InvalidArgumentError("N = 2 tradeoff needs 2 <= M <= 60");
  }
  if (s2 < 1 || s2 > m - 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("s2 = ", s2, " outside 1..", m - 1));
  }
  BigInt db2 = 0;
  for (int i = 0; i <= (m - s2 - 1) / 2; ++i) db2 += Binomial(m, s2 + 2 * i + 1);
  BigInt total = BigInt(m) * Binomial(m - 2, s2 - 1);
  BigInt desired = Binomial(m - 2, s2 - 1);
  for (int i = 0; i <= m - s2 - 1; ++i) {
    total += Binomial(m, s2 + 1 + i);
    desired += Binomial(m - 1, s2 + i);
  }
  return TradeoffPoint{Rational(db2, total), Rational(desired, total)};
}

// ---------------------------------------------------------------------------
// Time-sharing

namespace {

// Dense exact simplex for: maximize c.x subject to A x = b, x >= 0, b >= 0.
// Bland's rule guarantees termination.
class ExactSimplex {
 public:
  ExactSimplex(std::vector<std::vector<Rational>> a, std::vector<Rational> b,
               std::vector<Rational> c)
      : rows_(a.size()), cols_(c.size()), c_(std::move(c)) {
    // Columns: [0, cols_) structural, [cols_, cols_ + rows_) artificial.
    tableau_.assign(rows_, std::vector<Rational>(cols_ + rows_ + 1));
    for (size_t i = 0; i < rows_; ++i) {
      for (size_t j = 0; j < cols_; ++j) tableau_[i][j] = a[i][j];
      tableau_[i][cols_ + i] = 1;
      tableau_[i][cols_ + rows_] = b[i];
      basis_.push_back(cols_ + i);
    }
  }

  // Returns false when infeasible.
  bool Solve() {
    // Phase 1: minimize the artificial sum, i.e. maximize its negation.
    std::vector<Rational> phase1(cols_ + rows_, Rational(0));
    for (size_t i = 0; i < rows_; ++i) phase1[cols_ + i] = -1;
    Optimize(phase1, cols_ + rows_);
    for (size_t i = 0; i < rows_; ++i) {
      if (basis_[i] >= cols_ && Rhs(i) != 0) return false;
    }
    // Drive zero-level artificials out of the basis; drop redundant rows.
    for (size_t i = 0; i < rows_;) {
      if (basis_[i] < cols_) {
        ++i;
        continue;
      }
      std::optional<size_t> entering;
      for (size_t j = 0; j < cols_; ++j) {
        if (tableau_[i][j] != 0) {
          entering = j;
          break;
        }
      }
      if (entering) {
        Pivot(i, *entering);
        ++i;
      } else {
        tableau_.erase(tableau_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
        --rows_;
      }
    }
    Optimize(c_, cols_);
    return true;
  }

  std::vector<Rational> Solution() const {
    std::vector<Rational> x(cols_, Rational(0));
    for (size_t i = 0; i < rows_; ++i) {
      if (basis_[i] < cols_) x[basis_[i]] = Rhs(i);
    }
    return x;
  }

  // Reduced costs c_j - c_B B^-1 A_j of the structural columns at the
  // current basis.
  std::vector<Rational> ReducedCosts() const { return ReducedCosts(c_, cols_); }

 private:
  const Rational& Rhs(size_t row) const { return tableau_[row].back(); }

  std::vector<Rational> ReducedCosts(const std::vector<Rational>& cost,
                                     size_t active_cols) const {
    std::vector<Rational> reduced(active_cols);
    for (size_t j = 0; j < active_cols; ++j) {
      Rational value = cost[j];
      for (size_t i = 0; i < rows_; ++i) {
        const Rational& cb = basis_[i] < cost.size() ? cost[basis_[i]] : kZero;
        if (cb != 0 && tableau_[i][j] != 0) value -= cb * tableau_[i][j];
      }
      reduced[j] = std::move(value);
    }
    return reduced;
  }

  void Optimize(const std::vector<Rational>& cost, size_t active_cols) {
    while (true) {
      const std::vector<Rational> reduced = ReducedCosts(cost, active_cols);
      std::optional<size_t> entering;
      for (size_t j = 0; j < active_cols; ++j) {
        if (reduced[j] > 0) {
          entering = j;
          break;
        }
      }
      if (!entering) return;
      std::optional<size_t> leaving;
      Rational best_ratio;
      for (size_t i = 0; i < rows_; ++i) {
        const Rational& coef = tableau_[i][*entering];
        if (coef <= 0) continue;
        Rational ratio = Rhs(i) / coef;
        if (!leaving || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[*leaving])) {
          leaving = i;
          best_ratio = std::move(ratio);
        }
      }
      // Feasible region is bounded (x lies in the simplex), so a leaving
      // row always exists.
      if (!leaving) return;
      Pivot(*leaving, *entering);
    }
  }

  void Pivot(size_t row, size_t col) {
    const Rational pivot = tableau_[row][col];
    for (Rational& v : tableau_[row]) v /= pivot;
    for (size_t i = 0; i < rows_; ++i) {
      if (i == row || tableau_[i][col] == 0) continue;
      const Rational factor = tableau_[i][col];
      for (size_t j = 0; j < tableau_[i].size(); ++j) {
        if (tableau_[row][j] != 0) tableau_[i][j] -= factor * tableau_[row][j];
      }
    }
    basis_[row] = col;
  }

  static inline const Rational kZero = Rational(0);

  size_t rows_;
  size_t cols_;
  std::vector<Rational> c_;
  std::vector<std::vector<Rational>> tableau_;
  std::vector<size_t> basis_;
};

// Solves A_S alpha = b for the columns in `support`. Returns nullopt unless
// the solution is unique, consistent and non-negative.
std::optional<std::vector<Rational>> SolveSupport(
    const std::vector<std::vector<Rational>>& a, const std::vector<Rational>& b,
    const std::vector<int>& support) {
  const size_t rows = a.size();
  const size_t cols = support.size();
  std::vector<std::vector<Rational>> m(rows, std::vector<Rational>(cols + 1));
  for (size_t i = 0; i < rows; ++i) {
    for (size_t j = 0; j < cols; ++j) {
      m[i][j] = a[i][static_cast<size_t>(support[j])];
    }
    m[i][cols] = b[i];
  }
  size_t rank = 0;
  for (size_t col = 0; col < cols; ++col) {
    size_t pivot = rank;
    while (pivot < rows && m[pivot][col] == 0) ++pivot;
    if (pivot == rows) return std::nullopt;  // dependent columns
    std::swap(m[pivot], m[rank]);
    const Rational p = m[rank][col];
    for (Rational& v : m[rank]) v /= p;
    for (size_t i = 0; i < rows; ++i) {
      if (i == rank || m[i][col] == 0) continue;
      const Rational factor = m[i][col];
      for (size_t j = col; j <= cols; ++j) m[i][j] -= factor * m[rank][j];
    }
    ++rank;
  }
  for (size_t i = rank; i < rows; ++i) {
    if (m[i][cols] != 0) return std::nullopt;
  }
  std::vector<Rational> alpha(cols);
  for (size_t j = 0; j < cols; ++j) {
    alpha[j] = m[j][cols];
    if (alpha[j] < 0) return std::nullopt;
  }
  return alpha;
}

}  // namespace

absl::StatusOr<Mixture> SolveMixture(const TrafficVector& target,
                                     std::span<const CornerPoint> corners) {
  if (corners.empty()) {
    return absl::InvalidArgumentError("no corner points to mix");
  }
  const int n = target.size();
  for (const CornerPoint& corner : corners) {
    if (corner.tau.size() != n) {
      return absl::InvalidArgumentError(
          absl::StrCat("corner has ", corner.tau.size(),
                       " databases, target has ", n));
    }
  }
  // Rows: tau_1..tau_{N-1} and the weight sum; tau_N follows from the rest.
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  for (int row = 0; row < n - 1; ++row) {
    std::vector<Rational> coefficients;
    for (const CornerPoint& corner : corners) coefficients.push_back(corner.tau[row]);
    a.push_back(std::move(coefficients));
    b.push_back(target[row]);
  }
  a.emplace_back(corners.size(), Rational(1));
  b.emplace_back(1);
  std::vector<Rational> rates;
  for (const CornerPoint& corner : corners) rates.push_back(corner.rate);

  ExactSimplex simplex(a, b, rates);
  if (!simplex.Solve()) {
    return absl::InternalError(
        "no time-sharing decomposition reaches the target traffic vector");
  }
  Rational optimum = 0;
  {
    const std::vector<Rational> x = simplex.Solution();
    for (size_t j = 0; j < x.size(); ++j) optimum += x[j] * rates[j];
  }
  // Any optimal support lies among the zero-reduced-cost columns.
  std::vector<int> candidates;
  const std::vector<Rational> reduced = simplex.ReducedCosts();
  for (size_t j = 0; j < reduced.size(); ++j) {
    if (reduced[j] == 0) candidates.push_back(static_cast<int>(j));
  }
  const int max_support = std::min<int>(n, static_cast<int>(candidates.size()));
  for (int size = 1; size <= max_support; ++size) {
    for (const std::vector<int>& support : Subsets(candidates, size)) {
      std::optional<std::vector<Rational>> alpha = SolveSupport(a, b, support);
      if (!alpha) continue;
      Mixture mixture;
      for (size_t j = 0; j < support.size(); ++j) {
        mixture.rate += (*alpha)[j] * rates[static_cast<size_t>(support[j])];
        mixture.components.push_back(
            {static_cast<size_t>(support[j]), std::move((*alpha)[j])});
      }
      if (mixture.rate != optimum) {
        return absl::InternalError("support enumeration disagrees with simplex");
      }
      return mixture;
    }
  }
  return absl::InternalError("optimal face has no basic decomposition");
}

std::vector<int64_t> RepetitionCounts(const Mixture& mixture,
                                      std::span<const CornerPoint> corners) {
  std::vector<Rational> raw;
  BigInt lcm = 1;
  for (const MixtureComponent& c : mixture.components) {
    raw.push_back(c.weight / corners[c.corner].total_downloads());
    lcm = boost::multiprecision::lcm(lcm, boost::multiprecision::denominator(raw.back()));
  }
  std::vector<BigInt> scaled;
  BigInt gcd = 0;
  for (const Rational& r : raw) {
    scaled.push_back(boost::multiprecision::numerator(r) *
                     (lcm / boost::multiprecision::denominator(r)));
    gcd = boost::multiprecision::gcd(gcd, scaled.back());
  }
  std::vector<int64_t> counts;
  for (const BigInt& s : scaled) {
    counts.push_back(gcd == 0 ? 0 : static_cast<int64_t>(s / gcd));
  }
  return counts;
}

}  // namespace pir_asym
