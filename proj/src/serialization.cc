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

#include "pir_asym/serialization.h"

#include <algorithm>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "json.hpp"
#include "pir_asym/status_macros.h"

namespace pir_asym {
namespace {

using nlohmann::json;

json Fractions(const std::vector<Rational>& values) {
  json out = json::array();
  for (const Rational& v : values) out.push_back(FormatRational(v));
  return out;
}

json Decimals(const std::vector<Rational>& values) {
  json out = json::array();
  for (const Rational& v : values) out.push_back(FormatDecimal(v));
  return out;
}

std::string JoinFractions(const std::vector<Rational>& values) {
  return absl::StrJoin(values, ",", [](std::string* out, const Rational& r) {
    out->append(FormatRational(r));
  });
}

}  // namespace

std::string CornersJson(std::span<const CornerPoint> corners) {
  json out = json::array();
  for (const CornerPoint& c : corners) {
    out.push_back({{"spec", c.spec.sequence()},
                   {"tau", Fractions(c.tau.tau())},
                   {"tau_decimal", Decimals(c.tau.tau())},
                   {"rate", FormatRational(c.rate)},
                   {"rate_decimal", FormatDecimal(c.rate)},
                   {"downloads", c.downloads},
                   {"total_downloads", c.total_downloads()},
                   {"L", c.desired_symbols}});
  }
  return out.dump(2) + "\n";
}

std::string CornersCsv(std::span<const CornerPoint> corners) {
  std::string out = "spec,tau,rate,rate_decimal,downloads,L\n";
  for (const CornerPoint& c : corners) {
    absl::StrAppend(&out, absl::StrJoin(c.spec.sequence(), ";"), ",",
                    absl::StrJoin(c.tau.tau(), ";",
                                  [](std::string* s, const Rational& r) {
                                    s->append(FormatRational(r));
                                  }),
                    ",", FormatRational(c.rate), ",", FormatDecimal(c.rate), ",",
                    absl::StrJoin(c.downloads, ";"), ",", c.desired_symbols,
                    "\n");
  }
  return out;
}

std::string CornersTable(std::span<const CornerPoint> corners) {
  std::vector<std::vector<std::string>> rows = {
      {"spec", "tau", "rate", "", "t", "L"}};
  for (const CornerPoint& c : corners) {
    rows.push_back({absl::StrCat("(", absl::StrJoin(c.spec.sequence(), ","), ")"),
                    absl::StrCat("(", JoinFractions(c.tau.tau()), ")"),
                    FormatRational(c.rate), FormatDecimal(c.rate),
                    absl::StrCat("(", absl::StrJoin(c.downloads, ","), ")"),
                    absl::StrCat(c.desired_symbols)});
  }
  std::vector<size_t> width(rows.front().size(), 0);
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (size_t i = 0; i < row.size(); ++i) {
      std::string cell = row[i];
      cell.resize(width[i] + 2, ' ');
      line += cell;
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

std::string BoundJson(const BoundResult& bound, const TrafficVector& tau,
                      int num_messages) {
  json out = {{"M", num_messages},
              {"N", tau.size()},
              {"tau", Fractions(tau.tau())},
              {"upper_bound", FormatRational(bound.value)},
              {"upper_bound_decimal", FormatDecimal(bound.value)},
              {"argmin_sequence", bound.argmin_sequence}};
  if (bound.all_branches) {
    json branches = json::array();
    for (const auto& [sequence, value] : *bound.all_branches) {
      branches.push_back({{"sequence", sequence}, {"value", FormatRational(value)}});
    }
    out["branches"] = std::move(branches);
  }
  return out.dump(2) + "\n";
}

std::string PlanJson(const QueryPlan& plan, uint32_t modulus) {
  json components = json::array();
  for (const PlanComponent& c : plan.components) {
    components.push_back({{"sequence", c.sequence}, {"repetitions", c.repetitions}});
  }
  json databases = json::array();
  for (const std::vector<Query>& queries : plan.databases) {
    json list = json::array();
    for (const Query& query : queries) {
      json terms = json::array();
      for (const Term& t : query.terms) terms.push_back({{"m", t.message}, {"i", t.symbol}});
      list.push_back(std::move(terms));
    }
    databases.push_back(std::move(list));
  }
  json out = {{"M", plan.num_messages},
              {"N", plan.num_databases},
              {"p", modulus},
              {"spec", std::move(components)},
              {"seed", plan.shuffle_seed ? json(*plan.shuffle_seed) : json(nullptr)},
              {"L", plan.length},
              {"symbol_budget", plan.symbol_budget},
              {"databases", std::move(databases)}};
  return out.dump(2) + "\n";
}

absl::StatusOr<QueryPlan> ParsePlanJson(absl::string_view text) {
  const json in = json::parse(text.begin(), text.end(), nullptr, false);
  if (in.is_discarded() || !in.is_object()) {
    return absl::InvalidArgumentError("plan is not a JSON object");
  }
  try {
    QueryPlan plan;
    plan.num_messages = in.at("M").get<int>();
    plan.num_databases = in.at("N").get<int>();
    plan.length = in.at("L").get<int64_t>();
    plan.symbol_budget = in.at("symbol_budget").get<std::vector<int64_t>>();
    if (!in.at("seed").is_null()) plan.shuffle_seed = in.at("seed").get<uint64_t>();
    for (const json& c : in.at("spec")) {
      plan.components.push_back({c.at("sequence").get<std::vector<int>>(),
                                 c.at("repetitions").get<int64_t>()});
    }
    for (const json& list : in.at("databases")) {
      std::vector<Query> queries;
      for (const json& terms : list) {
        Query query;
        for (const json& t : terms) {
          query.terms.push_back({t.at("m").get<int>(), t.at("i").get<int64_t>()});
        }
        query.round = static_cast<int>(query.terms.size());
        queries.push_back(std::move(query));
      }
      plan.databases.push_back(std::move(queries));
    }
    PIR_ASYM_RETURN_IF_ERROR(ValidatePlan(plan));
    return plan;
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("malformed plan: ", e.what()));
  }
}

std::string DecodeMapJson(const DecodeMap& decode) {
  auto ref = [](const QueryRef& r) {
    return json{{"db", r.database + 1}, {"pos", r.position}};
  };
  json entries = json::array();
  for (const DecodeEntry& e : decode.entries) {
    json side = json::array();
    for (const QueryRef& r : e.side_info) side.push_back(ref(r));
    entries.push_back({{"target", ref(e.target)},
                       {"desired_symbol", e.desired_symbol},
                       {"side_info", std::move(side)}});
  }
  return json{{"desired", decode.desired}, {"entries", std::move(entries)}}.dump(2) +
         "\n";
}

std::string HarnessReportJson(const HarnessReport& report) {
  json out = {{"trials", report.trials},
              {"failures", report.failures},
              {"tau_measured", Fractions(report.tau_measured)},
              {"tau_expected", Fractions(report.tau_expected)},
              {"rate_measured", FormatRational(report.rate_measured)},
              {"rate_measured_decimal", FormatDecimal(report.rate_measured)},
              {"rate_expected", FormatRational(report.rate_expected)},
              {"per_db_traffic", report.per_db_traffic}};
  if (report.failing_seed) {
    out["failing_seed"] = *report.failing_seed;
    out["failure"] = report.failure;
  }
  return out.dump(2) + "\n";
}

std::string VerifyRecordJsonLine(const VerifyRecord& record) {
  json out = {{"check", record.check},
              {"subject", record.subject},
              {"pass", record.pass}};
  for (const auto& [key, value] : record.details) out[key] = value;
  return out.dump() + "\n";
}

}  // namespace pir_asym
