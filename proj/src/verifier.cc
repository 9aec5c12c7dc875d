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

#include "pir_asym/verifier.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "pir_asym/bounds.h"
#include "pir_asym/status_macros.h"

namespace pir_asym {

CanonicalPlanShape CanonicalShape(const QueryPlan& plan) {
  CanonicalPlanShape shape;
  for (const std::vector<Query>& queries : plan.databases) {
    std::vector<QueryShape> db;
    db.reserve(queries.size());
    for (const Query& query : queries) {
      QueryShape q{query.round, {}};
      for (const Term& term : query.terms) q.messages.push_back(term.message);
      std::sort(q.messages.begin(), q.messages.end());
      db.push_back(std::move(q));
    }
    std::sort(db.begin(), db.end());
    shape.databases.push_back(std::move(db));
  }
  return shape;
}

std::optional<ShapeWitness> ComparePlanShapes(const CanonicalPlanShape& left,
                                              const CanonicalPlanShape& right) {
  const size_t n = std::max(left.databases.size(), right.databases.size());
  for (size_t db = 0; db < n; ++db) {
    std::map<QueryShape, std::pair<int64_t, int64_t>> counts;
    if (db < left.databases.size()) {
      for (const QueryShape& q : left.databases[db]) ++counts[q].first;
    }
    if (db < right.databases.size()) {
      for (const QueryShape& q : right.databases[db]) ++counts[q].second;
    }
    for (const auto& [shape, pair] : counts) {
      if (pair.first != pair.second) {
        return ShapeWitness{static_cast<int>(db), shape, pair.first, pair.second};
      }
    }
  }
  return std::nullopt;
}

PlanSource CornerSource(const SchemeSpec& spec) {
  return [spec](int desired) { return Synthesize(spec, desired); };
}

PlanSource MixtureSource(std::vector<std::pair<SchemeSpec, int64_t>> components) {
  return [components = std::move(components)](int desired) {
    return SynthesizeMixture(components, desired);
  };
}

absl::StatusOr<PrivacyShapeResult> CheckPrivacyShape(int num_messages,
                                                     const PlanSource& source) {
  PIR_ASYM_ASSIGN_OR_RETURN(Scheme reference, source(1));
  const CanonicalPlanShape base = CanonicalShape(reference.plan);
  PrivacyShapeResult result;
  for (int desired = 2; desired <= num_messages; ++desired) {
    PIR_ASYM_ASSIGN_OR_RETURN(Scheme other, source(desired));
    std::optional<ShapeWitness> witness =
        ComparePlanShapes(base, CanonicalShape(other.plan));
    if (witness) {
      result.pass = false;
      result.desired_left = 1;
      result.desired_right = desired;
      result.witness = std::move(witness);
      return result;
    }
  }
  return result;
}

absl::StatusOr<PrivacyShapeResult> CheckPrivacyShape(const SchemeSpec& spec) {
  return CheckPrivacyShape(spec.num_messages(), CornerSource(spec));
}

std::string VerdictName(DistributionVerdict verdict) {
  switch (verdict) {
    case DistributionVerdict::kPass:
      return "pass";
    case DistributionVerdict::kFail:
      return "fail";
    case DistributionVerdict::kInconclusive:
      return "inconclusive";
  }
  return "unknown";
}

namespace {

// Histograms of every per-position marginal feature of one database view.
// Feature 0 at a position is the message-support bitmask; feature m is the
// store index of message m (0 when m is absent).
class MarginalHistogram {
 public:
  MarginalHistogram(const std::vector<int64_t>& traffic, int num_messages,
                    int64_t length)
      : m_(num_messages),
        bins_(std::max<int64_t>(int64_t{1} << num_messages, length + 1)) {
    for (int64_t t : traffic) {
      offsets_.push_back(positions_);
      positions_ += t;
    }
    counts_.assign(static_cast<size_t>(positions_ * (m_ + 1) * bins_), 0);
  }

  void Add(const std::vector<std::vector<WireQuery>>& wire) {
    for (size_t db = 0; db < wire.size(); ++db) {
      for (size_t p = 0; p < wire[db].size(); ++p) {
        const int64_t position = offsets_[db] + static_cast<int64_t>(p);
        int64_t support = 0;
        std::vector<int64_t> index(static_cast<size_t>(m_) + 1, 0);
        for (const Term& term : wire[db][p]) {
          support |= int64_t{1} << (term.message - 1);
          index[static_cast<size_t>(term.message)] = term.symbol;
        }
        ++At(position, 0, support);
        for (int msg = 1; msg <= m_; ++msg) {
          ++At(position, msg, index[static_cast<size_t>(msg)]);
        }
      }
    }
  }

  // Largest per-feature TV distance; `where` names the feature. Also
  // raises `noise_floor` to the null-hypothesis expectation of the TV
  // estimate, computed from the pooled frequencies.
  double MaxTv(const MarginalHistogram& other, int64_t samples,
               std::string& where, double& noise_floor) const {
    double best = -1;
    const double n = static_cast<double>(samples);
    for (int64_t position = 0; position < positions_; ++position) {
      for (int feature = 0; feature <= m_; ++feature) {
        int64_t diff = 0;
        double floor = 0;
        for (int64_t v = 0; v < bins_; ++v) {
          const int64_t a = Get(position, feature, v);
          const int64_t b = other.Get(position, feature, v);
          diff += std::llabs(a - b);
          const double pooled = static_cast<double>(a + b) / (2 * n);
          floor += std::sqrt(4 * pooled * (1 - pooled) / (M_PI * n));
        }
        noise_floor = std::max(noise_floor, 0.5 * floor);
        const double tv = 0.5 * static_cast<double>(diff) /
                          static_cast<double>(samples);
        if (tv > best) {
          best = tv;
          size_t db = 0;
          while (db + 1 < offsets_.size() && offsets_[db + 1] <= position) ++db;
          where = absl::StrCat("db", db + 1, " pos", position - offsets_[db], " ",
                               feature == 0 ? std::string("support")
                                            : absl::StrCat("index of m", feature));
        }
      }
    }
    return std::max(best, 0.0);
  }

 private:
  int64_t& At(int64_t position, int feature, int64_t value) {
    return counts_[static_cast<size_t>((position * (m_ + 1) + feature) * bins_ +
                                       value)];
  }
  int64_t Get(int64_t position, int feature, int64_t value) const {
    return counts_[static_cast<size_t>((position * (m_ + 1) + feature) * bins_ +
                                       value)];
  }

  int m_;
  int64_t bins_;
  int64_t positions_ = 0;
  std::vector<int64_t> offsets_;
  std::vector<int64_t> counts_;
};

}  // namespace

absl::StatusOr<DistributionResult> CheckQueryDistribution(
    int num_messages, const PlanSource& source,
    const DistributionOptions& options) {
  if (options.samples < 1) {
    return absl::InvalidArgumentError("need at least one sample");
  }
  if (num_messages > 20) {
    return absl::InvalidArgumentError("distribution check supports M <= 20");
  }
  std::vector<Scheme> schemes;
  for (int desired = 1; desired <= num_messages; ++desired) {
    PIR_ASYM_ASSIGN_OR_RETURN(Scheme scheme, source(desired));
    schemes.push_back(std::move(scheme));
  }
  DistributionResult result;
  result.samples = options.samples;
  const std::vector<int64_t> traffic = schemes.front().plan.Traffic();
  const int64_t length = schemes.front().plan.length;
  for (const Scheme& s : schemes) {
    if (s.plan.Traffic() != traffic || s.plan.length != length) {
      result.tv_estimate = 1;
      result.verdict = DistributionVerdict::kFail;
      result.worst_feature = "per-database query counts";
      return result;
    }
  }
  std::vector<MarginalHistogram> histograms;
  for (size_t j = 0; j < schemes.size(); ++j) {
    MarginalHistogram histogram(traffic, num_messages, length);
    const uint64_t stream = DeriveSeed(options.seed, j + 1);
    for (int64_t s = 0; s < options.samples; ++s) {
      const uint64_t sample_seed = DeriveSeed(stream, static_cast<uint64_t>(s));
      const std::vector<Permutation> perms =
          RandomPermutations(num_messages, length, DeriveSeed(sample_seed, 0));
      const Scheme realized = options.shuffle
                                  ? Shuffle(schemes[j], DeriveSeed(sample_seed, 1))
                                  : schemes[j];
      PIR_ASYM_ASSIGN_OR_RETURN(auto wire, RealizeQueries(realized.plan, perms));
      histogram.Add(wire);
    }
    histograms.push_back(std::move(histogram));
  }
  for (size_t j = 1; j < histograms.size(); ++j) {
    std::string where;
    const double tv = histograms[0].MaxTv(histograms[j], options.samples, where,
                                          result.noise_floor);
    if (tv > result.tv_estimate || result.worst_feature.empty()) {
      result.tv_estimate = tv;
      result.worst_feature = absl::StrCat(where, " desired=1 vs ", j + 1);
    }
  }
  if (options.samples < kMinDistributionSamples ||
      result.noise_floor >= options.threshold / 2) {
    result.verdict = DistributionVerdict::kInconclusive;
  } else {
    result.verdict = result.tv_estimate < options.threshold
                         ? DistributionVerdict::kPass
                         : DistributionVerdict::kFail;
  }
  return result;
}

absl::StatusOr<DistributionResult> CheckQueryDistribution(
    const SchemeSpec& spec, const DistributionOptions& options) {
  return CheckQueryDistribution(spec.num_messages(), CornerSource(spec), options);
}

absl::StatusOr<CapacityMatchReport> CheckCapacityMatch(int num_messages,
                                                       int num_databases,
                                                       int grid_points,
                                                       uint64_t seed) {
  if (num_messages != 2 && num_messages != 3) {
    return absl::InvalidArgumentError("capacity match needs M in {2, 3}");
  }
  if (num_databases < 1 || num_databases > 6) {
    return absl::InvalidArgumentError("capacity match needs 1 <= N <= 6");
  }
  if (grid_points < 2) {
    return absl::InvalidArgumentError("grid needs at least 2 points");
  }
  CapacityMatchReport report{num_messages, num_databases, 0, 0, {}};
  PIR_ASYM_ASSIGN_OR_RETURN(std::vector<CornerPoint> corners,
                            EnumerateCorners(num_messages, num_databases));

  auto check = [&](const TrafficVector& tau, const std::string& label,
                   std::optional<Rational> corner_rate) -> absl::Status {
    PIR_ASYM_ASSIGN_OR_RETURN(Rational capacity, CapacitySmallM(tau, num_messages));
    PIR_ASYM_ASSIGN_OR_RETURN(BoundResult bound, UpperBound(tau, num_messages));
    PIR_ASYM_ASSIGN_OR_RETURN(Mixture mixture, SolveMixture(tau, corners));
    std::vector<std::string> parts;
    if (corner_rate && *corner_rate != capacity) {
      parts.push_back(absl::StrCat("corner ", FormatRational(*corner_rate)));
    }
    if (bound.value != capacity) {
      parts.push_back(absl::StrCat("bound ", FormatRational(bound.value)));
    }
    if (mixture.rate != capacity) {
      parts.push_back(absl::StrCat("mixture ", FormatRational(mixture.rate)));
    }
    if (!parts.empty()) {
      report.mismatches.push_back(absl::StrCat(
          label, ": capacity ", FormatRational(capacity), " vs ",
          absl::StrJoin(parts, ", ")));
    }
    return absl::OkStatus();
  };

  for (const CornerPoint& corner : corners) {
    PIR_ASYM_RETURN_IF_ERROR(check(
        corner.tau,
        absl::StrCat("corner (", absl::StrJoin(corner.spec.sequence(), ","), ")"),
        corner.rate));
    ++report.corners_checked;
  }

  Prng prng(seed);
  for (int i = 0; i < grid_points; ++i) {
    std::vector<Rational> lambda{Rational(1)};
    if (num_databases == 2) {
      lambda.emplace_back(i, grid_points - 1);
    } else {
      constexpr int kDenominator = 60;
      std::vector<int64_t> numerators;
      for (int db = 1; db < num_databases; ++db) {
        numerators.push_back(static_cast<int64_t>(prng.Uniform(kDenominator + 1)));
      }
      std::sort(numerators.rbegin(), numerators.rend());
      for (int64_t v : numerators) lambda.emplace_back(v, kDenominator);
    }
    PIR_ASYM_ASSIGN_OR_RETURN(TrafficVector tau, TrafficVector::FromLambda(lambda));
    PIR_ASYM_RETURN_IF_ERROR(check(
        tau,
        absl::StrCat("tau (", absl::StrJoin(tau.tau(), ",",
                                           [](std::string* out, const Rational& r) {
                                             out->append(FormatRational(r));
                                           }),
                     ")"),
        std::nullopt));
    ++report.grid_checked;
  }
  return report;
}

absl::StatusOr<OracleResult> BruteForceOracle(const QueryPlan& plan,
                                              std::span<const AnswerString> answers,
                                              int desired,
                                              const PrimeField& field) {
  if (desired < 1 || desired > plan.num_messages) {
    return absl::InvalidArgumentError("desired message out of range");
  }
  if (answers.size() != plan.databases.size()) {
    return absl::InvalidArgumentError("one answer string per database expected");
  }
  const int64_t rows = plan.TotalDownloads();
  if (rows > kOracleMaxDownloads) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "oracle is limited to ", kOracleMaxDownloads, " downloads, plan has ",
        rows));
  }
  std::map<std::pair<int, int64_t>, size_t> column;
  for (const std::vector<Query>& queries : plan.databases) {
    for (const Query& query : queries) {
      for (const Term& term : query.terms) {
        column.emplace(std::make_pair(term.message, term.symbol), 0);
      }
    }
  }
  size_t next = 0;
  for (auto& [key, index] : column) index = next++;
  const size_t cols = column.size();
  if (static_cast<double>(rows) * static_cast<double>(cols + 1) > 5e7) {
    return absl::ResourceExhaustedError("oracle system too large");
  }

  std::vector<std::vector<uint32_t>> a;
  for (size_t db = 0; db < plan.databases.size(); ++db) {
    if (answers[db].symbols.size() != plan.databases[db].size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("answer length mismatch at database ", db + 1));
    }
    for (size_t q = 0; q < plan.databases[db].size(); ++q) {
      std::vector<uint32_t> row(cols + 1, 0);
      for (const Term& term : plan.databases[db][q].terms) {
        uint32_t& cell = row[column.at({term.message, term.symbol})];
        cell = field.Add(FieldSymbol{cell}, FieldSymbol{1}).value;
      }
      row[cols] = answers[db].symbols[q].value;
      a.push_back(std::move(row));
    }
  }

  // Reduced row echelon form.
  std::vector<std::optional<size_t>> pivot_row(cols);
  size_t rank = 0;
  for (size_t c = 0; c < cols && rank < a.size(); ++c) {
    size_t p = rank;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[rank]);
    const FieldSymbol inv = field.Inverse(FieldSymbol{a[rank][c]});
    for (uint32_t& v : a[rank]) v = field.Mul(FieldSymbol{v}, inv).value;
    for (size_t r = 0; r < a.size(); ++r) {
      if (r == rank || a[r][c] == 0) continue;
      const FieldSymbol factor{a[r][c]};
      for (size_t j = c; j <= cols; ++j) {
        if (a[rank][j] == 0) continue;
        a[r][j] = field.Sub(FieldSymbol{a[r][j]},
                            field.Mul(factor, FieldSymbol{a[rank][j]}))
                      .value;
      }
    }
    pivot_row[c] = rank++;
  }

  OracleResult result;
  result.rank = static_cast<int64_t>(rank);
  result.desired_symbols.resize(static_cast<size_t>(plan.length));
  for (int64_t s = 1; s <= plan.length; ++s) {
    auto it = column.find({desired, s});
    bool ok = false;
    if (it != column.end() && pivot_row[it->second]) {
      const std::vector<uint32_t>& row = a[*pivot_row[it->second]];
      ok = true;
      for (size_t j = 0; j < cols; ++j) {
        if (j != it->second && row[j] != 0) {
          ok = false;
          break;
        }
      }
      if (ok) result.desired_symbols[static_cast<size_t>(s - 1)] = FieldSymbol{row[cols]};
    }
    if (!ok) result.unrecoverable.push_back(s);
  }
  result.decodable = result.unrecoverable.empty();
  if (!result.decodable) result.desired_symbols.clear();
  return result;
}

Scheme RemoveQuery(const Scheme& scheme, QueryRef ref) {
  Scheme out = scheme;
  std::vector<Query>& list = out.plan.databases[static_cast<size_t>(ref.database)];
  list.erase(list.begin() + ref.position);
  auto fix = [&](QueryRef& r) {
    if (r.database != ref.database) return;
    if (r.position == ref.position) {
      r.position = -1;
    } else if (r.position > ref.position) {
      --r.position;
    }
  };
  for (DecodeEntry& entry : out.decode.entries) {
    fix(entry.target);
    for (QueryRef& r : entry.side_info) fix(r);
  }
  return out;
}

std::vector<Mutant> PlantedMutants(const Scheme& scheme) {
  std::optional<QueryRef> side_sum, singleton, carrier;
  auto round_of = [&](const QueryRef& r) {
    return scheme.plan.databases[static_cast<size_t>(r.database)]
                                [static_cast<size_t>(r.position)].round;
  };
  for (const DecodeEntry& entry : scheme.decode.entries) {
    for (const QueryRef& r : entry.side_info) {
      if (!side_sum && round_of(r) >= 2) side_sum = r;
      if (!singleton && round_of(r) == 1) singleton = r;
    }
    if (!carrier && !entry.side_info.empty()) carrier = entry.target;
  }
  if (!carrier && !scheme.decode.entries.empty()) {
    carrier = scheme.decode.entries.front().target;
  }
  std::vector<Mutant> mutants;
  auto add = [&](std::string name, const std::optional<QueryRef>& r) {
    if (r) mutants.push_back({std::move(name), *r, RemoveQuery(scheme, *r)});
  };
  add("deleted side-information sum", side_sum);
  add("deleted round-1 side-information singleton", singleton);
  add("deleted desired-carrying query", carrier);
  return mutants;
}

}  // namespace pir_asym
