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

#include "pir_asym/scheme.h"

#include <algorithm>
#include <map>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "pir_asym/combinatorics.h"
#include "pir_asym/field.h"
#include "pir_asym/status_macros.h"

namespace pir_asym {

std::vector<int64_t> QueryPlan::Traffic() const {
  std::vector<int64_t> traffic;
  traffic.reserve(databases.size());
  for (const std::vector<Query>& queries : databases) {
    traffic.push_back(static_cast<int64_t>(queries.size()));
  }
  return traffic;
}

int64_t QueryPlan::TotalDownloads() const {
  int64_t total = 0;
  for (const std::vector<Query>& queries : databases) {
    total += static_cast<int64_t>(queries.size());
  }
  return total;
}

absl::StatusOr<LengthBudget> RequiredLength(const SchemeSpec& spec) {
  PIR_ASYM_ASSIGN_OR_RETURN(StageCounts counts, SolveStages(spec));
  const int m = spec.num_messages();
  LengthBudget budget;
  for (const GroupStages& g : counts.groups) {
    for (int k = 1; k <= m; ++k) {
      const int64_t stages = g.stages[static_cast<size_t>(k - 1)] * g.size;
      budget.length += stages * Binomial(m - 1, k - 1);
      budget.undesired_per_message += stages * Binomial(m - 2, k - 1);
    }
  }
  return budget;
}

absl::StatusOr<LengthBudget> RequiredLength(
    const std::vector<std::pair<SchemeSpec, int64_t>>& components) {
  LengthBudget total;
  for (const auto& [spec, repetitions] : components) {
    PIR_ASYM_ASSIGN_OR_RETURN(LengthBudget one, RequiredLength(spec));
    total.length += repetitions * one.length;
    total.undesired_per_message += repetitions * one.undesired_per_message;
  }
  return total;
}

namespace {

class Synthesizer {
 public:
  Synthesizer(const SchemeSpec& spec, const StageCounts& counts, int desired)
      : spec_(spec), counts_(counts), desired_(desired) {
    const int m = spec.num_messages();
    const int n = spec.num_databases();
    for (int msg = 1; msg <= m; ++msg) {
      if (msg != desired) undesired_.push_back(msg);
    }
    next_symbol_.assign(static_cast<size_t>(m) + 1, 0);
    plan_.num_messages = m;
    plan_.num_databases = n;
    plan_.databases.resize(static_cast<size_t>(n));
    plan_.components.push_back({spec.sequence(), 1});
    stage_count_.assign(static_cast<size_t>(n), 0);
    batches_.assign(static_cast<size_t>(m) + 1,
                    std::vector<std::vector<Batch>>(static_cast<size_t>(n)));
    singletons_.assign(static_cast<size_t>(n),
                       std::vector<std::vector<QueryRef>>(static_cast<size_t>(m) + 1));
  }

  absl::StatusOr<Scheme> Run() {
    const int m = spec_.num_messages();
    const int n = spec_.num_databases();
    for (int k = 1; k <= m; ++k) {
      for (int db = 0; db < n; ++db) {
        const int group = spec_.group_of(db);
        if (group < 0 || k <= group) continue;
        const int64_t before = stage_count_[static_cast<size_t>(db)];
        if (k == 1) {
          for (int64_t s = 0; s < counts_.y(0, 1); ++s) EmitStage(db, 1, {{}});
        } else {
          if (group >= 2 && k == group + 1) EmitExtras(db, group);
          for (int other = 0; other < n; ++other) {
            if (other == db) continue;
            for (const Batch& batch : batches_[static_cast<size_t>(k - 1)]
                                              [static_cast<size_t>(other)]) {
              std::vector<std::vector<QueryRef>> side;
              for (const QueryRef& ref : batch) side.push_back({ref});
              EmitStage(db, k, side);
            }
          }
        }
        const int64_t built = stage_count_[static_cast<size_t>(db)] - before;
        if (built != counts_.y(group, k)) {
          return absl::InternalError(absl::StrCat(
              "database ", db + 1, " built ", built, " stages in round ", k,
              ", expected ", counts_.y(group, k)));
        }
      }
    }
    plan_.length = next_symbol_[static_cast<size_t>(desired_)];
    for (int msg = 1; msg <= m; ++msg) {
      plan_.symbol_budget.push_back(next_symbol_[static_cast<size_t>(msg)]);
    }
    return Scheme{std::move(plan_), std::move(decode_)};
  }

 private:
  using Batch = std::vector<QueryRef>;

  QueryRef Push(int db, Query query) {
    std::sort(query.terms.begin(), query.terms.end());
    std::vector<Query>& list = plan_.databases[static_cast<size_t>(db)];
    list.push_back(std::move(query));
    return QueryRef{db, static_cast<int64_t>(list.size()) - 1};
  }

  const Query& At(const QueryRef& ref) const {
    return plan_.databases[static_cast<size_t>(ref.database)]
                          [static_cast<size_t>(ref.position)];
  }

  // side[i] lists the queries whose sum cancels the i-th (k-1)-subset of
  // undesired messages, in lexicographic subset order.
  void EmitStage(int db, int k, const std::vector<std::vector<QueryRef>>& side) {
    const int64_t stage = stage_count_[static_cast<size_t>(db)]++;
    for (const std::vector<QueryRef>& refs : side) {
      Query query{{}, k, stage};
      const int64_t symbol = ++next_symbol_[static_cast<size_t>(desired_)];
      query.terms.push_back({desired_, symbol});
      for (const QueryRef& ref : refs) {
        const std::vector<Term>& terms = At(ref).terms;
        query.terms.insert(query.terms.end(), terms.begin(), terms.end());
      }
      const QueryRef target = Push(db, std::move(query));
      decode_.entries.push_back({target, symbol, refs});
    }
    Batch batch;
    for (const std::vector<int>& subset : Subsets(undesired_, k)) {
      Query query{{}, k, stage};
      for (int msg : subset) {
        query.terms.push_back({msg, ++next_symbol_[static_cast<size_t>(msg)]});
      }
      const QueryRef ref = Push(db, std::move(query));
      batch.push_back(ref);
      if (k == 1) {
        singletons_[static_cast<size_t>(db)][static_cast<size_t>(subset[0])]
            .push_back(ref);
      }
    }
    batches_[static_cast<size_t>(k)][static_cast<size_t>(db)].push_back(
        std::move(batch));
  }

  // One-time stages of a group-l database (l >= 2) in round l + 1, packing
  // round-1 undesired singletons of every group-0 database into l-sums.
  void EmitExtras(int db, int group) {
    const GroupStages* g = counts_.Find(group);
    const std::vector<std::vector<int>> subsets = Subsets(undesired_, group);
    for (int source = 0; source < spec_.sequence()[0]; ++source) {
      std::map<int, size_t> cursor;
      for (int64_t e = 0; e < g->xi; ++e) {
        std::vector<std::vector<QueryRef>> side;
        for (const std::vector<int>& subset : subsets) {
          std::vector<QueryRef> refs;
          for (int msg : subset) {
            refs.push_back(singletons_[static_cast<size_t>(source)]
                                      [static_cast<size_t>(msg)][cursor[msg]++]);
          }
          side.push_back(std::move(refs));
        }
        EmitStage(db, group + 1, side);
      }
    }
  }

  const SchemeSpec& spec_;
  const StageCounts& counts_;
  const int desired_;
  std::vector<int> undesired_;
  std::vector<int64_t> next_symbol_;
  std::vector<int64_t> stage_count_;
  // batches_[k][db]: undesired k-sums of each round-k stage at db.
  std::vector<std::vector<std::vector<Batch>>> batches_;
  // singletons_[db][m]: round-1 singletons of undesired message m.
  std::vector<std::vector<std::vector<QueryRef>>> singletons_;
  QueryPlan plan_;
  DecodeMap decode_;
};

}  // namespace

absl::StatusOr<Scheme> Synthesize(const SchemeSpec& spec, int desired) {
  if (desired < 1 || desired > spec.num_messages()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "desired message ", desired, " outside 1..", spec.num_messages()));
  }
  PIR_ASYM_ASSIGN_OR_RETURN(StageCounts counts, SolveStages(spec));
  Synthesizer synthesizer(spec, counts, desired);
  PIR_ASYM_ASSIGN_OR_RETURN(Scheme scheme, synthesizer.Run());
  scheme.decode.desired = desired;
  return scheme;
}

absl::StatusOr<Scheme> Concatenate(
    const std::vector<std::pair<const Scheme*, int64_t>>& parts) {
  if (parts.empty()) {
    return absl::InvalidArgumentError("nothing to concatenate");
  }
  const Scheme& first = *parts.front().first;
  const int m = first.plan.num_messages;
  const int n = first.plan.num_databases;
  Scheme out;
  out.plan.num_messages = m;
  out.plan.num_databases = n;
  out.plan.databases.resize(static_cast<size_t>(n));
  out.plan.symbol_budget.assign(static_cast<size_t>(m), 0);
  out.decode.desired = first.decode.desired;
  std::vector<int64_t> stage_offset(static_cast<size_t>(n), 0);

  for (const auto& [scheme, repetitions] : parts) {
    const QueryPlan& plan = scheme->plan;
    if (plan.num_messages != m || plan.num_databases != n) {
      return absl::InvalidArgumentError("concatenated plans disagree on M or N");
    }
    if (scheme->decode.desired != out.decode.desired) {
      return absl::InvalidArgumentError(
          "concatenated plans disagree on the desired message");
    }
    if (repetitions < 0) {
      return absl::InvalidArgumentError("repetitions must be non-negative");
    }
    if (repetitions > 0) {
      for (const PlanComponent& c : plan.components) {
        if (!out.plan.components.empty() &&
            out.plan.components.back().sequence == c.sequence) {
          out.plan.components.back().repetitions += c.repetitions * repetitions;
        } else {
          out.plan.components.push_back({c.sequence, c.repetitions * repetitions});
        }
      }
    }
    for (int64_t r = 0; r < repetitions; ++r) {
      std::vector<int64_t> position_offset;
      std::vector<int64_t> next_stage_offset = stage_offset;
      for (int db = 0; db < n; ++db) {
        std::vector<Query>& dst = out.plan.databases[static_cast<size_t>(db)];
        position_offset.push_back(static_cast<int64_t>(dst.size()));
        for (Query query : plan.databases[static_cast<size_t>(db)]) {
          for (Term& term : query.terms) {
            term.symbol +=
                out.plan.symbol_budget[static_cast<size_t>(term.message - 1)];
          }
          query.stage += stage_offset[static_cast<size_t>(db)];
          next_stage_offset[static_cast<size_t>(db)] =
              std::max(next_stage_offset[static_cast<size_t>(db)], query.stage + 1);
          dst.push_back(std::move(query));
        }
      }
      auto shift = [&](QueryRef ref) {
        ref.position += position_offset[static_cast<size_t>(ref.database)];
        return ref;
      };
      const int64_t desired_offset =
          out.plan.symbol_budget[static_cast<size_t>(out.decode.desired - 1)];
      for (const DecodeEntry& entry : scheme->decode.entries) {
        DecodeEntry shifted{shift(entry.target),
                            entry.desired_symbol + desired_offset, {}};
        for (const QueryRef& ref : entry.side_info) {
          shifted.side_info.push_back(shift(ref));
        }
        out.decode.entries.push_back(std::move(shifted));
      }
      for (int msg = 0; msg < m; ++msg) {
        out.plan.symbol_budget[static_cast<size_t>(msg)] +=
            plan.symbol_budget[static_cast<size_t>(msg)];
      }
      out.plan.length += plan.length;
      stage_offset = std::move(next_stage_offset);
    }
  }
  return out;
}

absl::StatusOr<Scheme> SynthesizeMixture(
    const std::vector<std::pair<SchemeSpec, int64_t>>& components,
    int desired) {
  std::vector<Scheme> schemes;
  schemes.reserve(components.size());
  for (const auto& [spec, repetitions] : components) {
    PIR_ASYM_ASSIGN_OR_RETURN(Scheme scheme, Synthesize(spec, desired));
    schemes.push_back(std::move(scheme));
  }
  std::vector<std::pair<const Scheme*, int64_t>> parts;
  for (size_t i = 0; i < schemes.size(); ++i) {
    parts.emplace_back(&schemes[i], components[i].second);
  }
  return Concatenate(parts);
}

absl::StatusOr<std::vector<std::pair<SchemeSpec, int64_t>>> ComponentsForTarget(
    const TrafficVector& target, int num_messages) {
  PIR_ASYM_ASSIGN_OR_RETURN(std::vector<CornerPoint> corners,
                            EnumerateCorners(num_messages, target.size()));
  PIR_ASYM_ASSIGN_OR_RETURN(Mixture mixture, SolveMixture(target, corners));
  const std::vector<int64_t> counts = RepetitionCounts(mixture, corners);
  std::vector<std::pair<SchemeSpec, int64_t>> components;
  for (size_t i = 0; i < counts.size(); ++i) {
    components.emplace_back(corners[mixture.components[i].corner].spec,
                            counts[i]);
  }
  return components;
}

Scheme Shuffle(const Scheme& scheme, uint64_t seed) {
  Scheme out;
  out.plan = scheme.plan;
  out.plan.shuffle_seed = seed;
  out.decode = scheme.decode;
  std::vector<std::vector<int64_t>> new_position;
  for (size_t db = 0; db < scheme.plan.databases.size(); ++db) {
    const std::vector<Query>& src = scheme.plan.databases[db];
    std::vector<int64_t> order(src.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int64_t>(i);
    Prng prng(DeriveSeed(seed, db));
    prng.Shuffle(std::span<int64_t>(order));
    std::vector<int64_t> inverse(order.size());
    std::vector<Query>& dst = out.plan.databases[db];
    for (size_t i = 0; i < order.size(); ++i) {
      dst[i] = src[static_cast<size_t>(order[i])];
      inverse[static_cast<size_t>(order[i])] = static_cast<int64_t>(i);
    }
    new_position.push_back(std::move(inverse));
  }
  auto remap = [&](QueryRef& ref) {
    ref.position = new_position[static_cast<size_t>(ref.database)]
                               [static_cast<size_t>(ref.position)];
  };
  for (DecodeEntry& entry : out.decode.entries) {
    remap(entry.target);
    for (QueryRef& ref : entry.side_info) remap(ref);
  }
  return out;
}

absl::Status ValidatePlan(const QueryPlan& plan) {
  if (static_cast<int>(plan.databases.size()) != plan.num_databases) {
    return absl::InvalidArgumentError("plan database count mismatch");
  }
  if (static_cast<int>(plan.symbol_budget.size()) != plan.num_messages) {
    return absl::InvalidArgumentError("plan symbol budget has wrong size");
  }
  for (size_t db = 0; db < plan.databases.size(); ++db) {
    for (size_t q = 0; q < plan.databases[db].size(); ++q) {
      const Query& query = plan.databases[db][q];
      const std::string where = absl::StrCat("database ", db + 1, " query ", q);
      if (query.terms.empty()) {
        return absl::InvalidArgumentError(absl::StrCat(where, " is empty"));
      }
      if (query.round != static_cast<int>(query.terms.size())) {
        return absl::InvalidArgumentError(
            absl::StrCat(where, " round does not match its term count"));
      }
      for (size_t t = 0; t < query.terms.size(); ++t) {
        const Term& term = query.terms[t];
        if (term.message < 1 || term.message > plan.num_messages) {
          return absl::InvalidArgumentError(
              absl::StrCat(where, " names message ", term.message));
        }
        if (term.symbol < 1 || term.symbol > plan.length) {
          return absl::OutOfRangeError(absl::StrCat(
              where, " symbol ", term.symbol, " outside 1..", plan.length));
        }
        if (t > 0 && query.terms[t - 1].message >= term.message) {
          return absl::InvalidArgumentError(
              absl::StrCat(where, " repeats or misorders messages"));
        }
      }
    }
  }
  return absl::OkStatus();
}

std::string MessageName(int message, int num_messages) {
  if (num_messages <= 26) return std::string(1, static_cast<char>('a' + message - 1));
  return absl::StrCat("m", message);
}

std::string FormatQuery(const Query& query, int num_messages) {
  return absl::StrJoin(query.terms, "+", [&](std::string* out, const Term& t) {
    absl::StrAppend(out, MessageName(t.message, num_messages), t.symbol);
  });
}

std::string RenderTable(const QueryPlan& plan) {
  const size_t n = plan.databases.size();
  // cells[k][db] lists the round-k queries at db in plan order.
  std::vector<std::vector<std::vector<std::string>>> cells(
      static_cast<size_t>(plan.num_messages) + 1,
      std::vector<std::vector<std::string>>(n));
  size_t width = 5;
  for (size_t db = 0; db < n; ++db) {
    for (const Query& query : plan.databases[db]) {
      std::string text = FormatQuery(query, plan.num_messages);
      width = std::max(width, text.size());
      cells[static_cast<size_t>(query.round)][db].push_back(std::move(text));
    }
  }
  auto pad = [&](std::string text) {
    text.resize(width + 2, ' ');
    return text;
  };
  std::string out = pad("round");
  for (size_t db = 0; db < n; ++db) out += pad(absl::StrCat("DB", db + 1));
  out += "\n";
  for (size_t k = 1; k < cells.size(); ++k) {
    size_t rows = 0;
    for (const auto& column : cells[k]) rows = std::max(rows, column.size());
    for (size_t r = 0; r < rows; ++r) {
      std::string line = pad(r == 0 ? absl::StrCat(k) : "");
      for (size_t db = 0; db < n; ++db) {
        line += pad(r < cells[k][db].size() ? cells[k][db][r] : "");
      }
      while (!line.empty() && line.back() == ' ') line.pop_back();
      out += line + "\n";
    }
  }
  return out;
}

}  // namespace pir_asym
