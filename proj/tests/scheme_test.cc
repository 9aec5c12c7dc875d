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

#include <map>
#include <set>
#include <string>
#include <vector>

#include "generators.h"
#include "gtest/gtest.h"
#include "pir_asym/combinatorics.h"
#include "pir_asym/scheme.h"
#include "pir_asym/serialization.h"
#include "pir_asym/stage_calculus.h"

namespace pir_asym {
namespace {

using Table = std::vector<std::vector<std::string>>;

SchemeSpec Spec(int n, std::vector<int> seq) {
  return SchemeSpec::Create(n, std::move(seq)).value();
}

Table Render(const QueryPlan& plan) {
  Table out(static_cast<size_t>(plan.num_databases));
  for (int db = 0; db < plan.num_databases; ++db) {
    for (const Query& q : plan.databases[static_cast<size_t>(db)]) {
      out[static_cast<size_t>(db)].push_back(FormatQuery(q, plan.num_messages));
    }
  }
  return out;
}

Table Golden(int n, std::vector<int> seq) {
  return Render(Synthesize(Spec(n, std::move(seq)), 1).value().plan);
}

TEST(GoldenTableTest, ThreeMessagesTwoDatabases) {
  EXPECT_EQ(Golden(2, {1, 1, 1}), (Table{{"a1", "b1", "c1"}, {}}));
  EXPECT_EQ(Golden(2, {2, 2, 2}),
            (Table{{"a1", "b1", "c1", "a3+b2", "a4+c2", "b3+c3", "a7+b4+c4"},
                   {"a2", "b2", "c2", "a5+b1", "a6+c1", "b4+c4", "a8+b3+c3"}}));
  EXPECT_EQ(Golden(2, {1, 2, 2}),
            (Table{{"a1", "b1", "c1", "a4+b2+c2"}, {"a2+b1", "a3+c1", "b2+c2"}}));
  EXPECT_EQ(Golden(2, {1, 1, 2}), (Table{{"a1", "b1", "c1"}, {"a2+b1+c1"}}));
}

TEST(GoldenTableTest, TimeSharedHalfway) {
  const std::vector<std::pair<SchemeSpec, int64_t>> parts = {
      {Spec(2, {1, 2, 2}), 1}, {Spec(2, {1, 1, 2}), 2}};
  const Scheme s = SynthesizeMixture(parts, 1).value();
  EXPECT_EQ(Render(s.plan),
            (Table{{"a1", "b1", "c1", "a4+b2+c2", "a5", "b3", "c3", "a7", "b4", "c4"},
                   {"a2+b1", "a3+c1", "b2+c2", "a6+b3+c3", "a8+b4+c4"}}));
  EXPECT_EQ(s.plan.Traffic(), (std::vector<int64_t>{10, 5}));
  EXPECT_EQ(s.plan.length, 8);
  EXPECT_EQ(s.decode.entries.size(), 8u);
}

TEST(GoldenTableTest, FourMessagesTwoDatabases) {
  EXPECT_EQ(Golden(2, {1, 2, 2, 2}),
            (Table{{"a1", "b1", "c1", "d1", "a5+b2+c2", "a6+b3+d2", "a7+c3+d3", "b4+c4+d4"},
                   {"a2+b1", "a3+c1", "a4+d1", "b2+c2", "b3+d2", "c3+d3", "a8+b4+c4+d4"}}));
  EXPECT_EQ(Golden(2, {1, 1, 2, 2}),
            (Table{{"a1", "b1", "c1", "d1", "a2", "b2", "c2", "d2", "a6+b3+c3+d3"},
                   {"a3+b1+c1", "a4+b2+d1", "a5+c2+d2", "b3+c3+d3"}}));
  EXPECT_EQ(Golden(2, {1, 1, 1, 2}), (Table{{"a1", "b1", "c1", "d1"}, {"a2+b1+c1+d1"}}));
}

TEST(GoldenTableTest, ThreeMessagesThreeDatabases) {
  EXPECT_EQ(Golden(3, {2, 3, 3}),
            (Table{{"a1", "b1", "c1", "a3+b2", "a4+c2", "b3+c3", "a11+b4+c4", "a12+b5+c5",
                    "a13+b6+c6"},
                   {"a2", "b2", "c2", "a5+b1", "a6+c1", "b4+c4", "a14+b3+c3", "a15+b5+c5",
                    "a16+b6+c6"},
                   {"a7+b1", "a8+c1", "b5+c5", "a9+b2", "a10+c2", "b6+c6", "a17+b3+c3",
                    "a18+b4+c4"}}));
  EXPECT_EQ(Golden(3, {2, 2, 3}),
            (Table{{"a1", "b1", "c1", "a3+b2", "a4+c2", "b3+c3", "a7+b4+c4"},
                   {"a2", "b2", "c2", "a5+b1", "a6+c1", "b4+c4", "a8+b3+c3"},
                   {"a9+b1+c1", "a10+b2+c2", "a11+b3+c3", "a12+b4+c4"}}));
  EXPECT_EQ(Golden(3, {1, 3, 3}),
            (Table{{"a1", "b1", "c1", "a6+b2+c2", "a7+b3+c3"},
                   {"a2+b1", "a3+c1", "b2+c2", "a8+b3+c3"},
                   {"a4+b1", "a5+c1", "b3+c3", "a9+b2+c2"}}));
  EXPECT_EQ(Golden(3, {1, 2, 3}),
            (Table{{"a1", "b1", "c1", "a4+b2+c2"},
                   {"a2+b1", "a3+c1", "b2+c2"},
                   {"a5+b1+c1", "a6+b2+c2"}}));
  EXPECT_EQ(Golden(3, {1, 1, 3}), (Table{{"a1", "b1", "c1"}, {"a2+b1+c1"}, {"a3+b1+c1"}}));
}

TEST(GoldenTableTest, RenderTableGroupsRowsByRound) {
  const std::string table = RenderTable(Synthesize(Spec(2, {1, 2, 2}), 1).value().plan);
  EXPECT_NE(table.find("a4+b2+c2"), std::string::npos);
  EXPECT_LT(table.find("\n1 "), table.find("\n2 "));
  EXPECT_LT(table.find("\n2 "), table.find("\n3 "));
}

// Walks every (spec, desired) pair for small M and N.
template <typename Fn>
void ForSmallSchemes(Fn fn) {
  for (int m = 1; m <= 4; ++m) {
    for (int n = 1; n <= 3; ++n) {
      for (const auto& seq : MonotoneSequences(m, n)) {
        const SchemeSpec spec = Spec(n, seq);
        for (int d = 1; d <= m; ++d) {
          const Scheme s = Synthesize(spec, d).value();
          SCOPED_TRACE(::testing::Message() << "M=" << m << " N=" << n << " desired=" << d);
          fn(spec, s);
        }
      }
    }
  }
}

TEST(SynthesisPropertyTest, StageCountsMatchSolver) {
  ForSmallSchemes([](const SchemeSpec& spec, const Scheme& s) {
    const StageCounts counts = SolveStages(spec).value();
    const int m = spec.num_messages();
    for (int db = 0; db < spec.num_databases(); ++db) {
      std::map<int, std::set<int64_t>> stages_by_round;
      std::map<int, int64_t> queries_by_round;
      for (const Query& q : s.plan.databases[static_cast<size_t>(db)]) {
        stages_by_round[q.round].insert(q.stage);
        ++queries_by_round[q.round];
      }
      const int group = spec.group_of(db);
      for (int k = 1; k <= m; ++k) {
        const int64_t want = group < 0 ? 0 : counts.y(group, k);
        EXPECT_EQ(static_cast<int64_t>(stages_by_round[k].size()), want) << "db=" << db << " k=" << k;
        EXPECT_EQ(queries_by_round[k], want * Binomial(m, k));
      }
    }
    const CornerPoint corner = ComputeCornerPoint(spec).value();
    EXPECT_EQ(s.plan.Traffic(), corner.downloads);
    EXPECT_EQ(s.plan.length, corner.desired_symbols);
  });
}

TEST(SynthesisPropertyTest, EveryStageHoldsEachSubsetOnce) {
  ForSmallSchemes([](const SchemeSpec& spec, const Scheme& s) {
    const int m = spec.num_messages();
    for (const auto& queries : s.plan.databases) {
      std::map<int64_t, std::multiset<std::vector<int>>> subsets;
      std::map<int64_t, int> round;
      for (const Query& q : queries) {
        std::vector<int> msgs;
        for (const Term& t : q.terms) msgs.push_back(t.message);
        EXPECT_EQ(static_cast<int>(msgs.size()), q.round);
        EXPECT_TRUE(std::set<int>(msgs.begin(), msgs.end()).size() == msgs.size());
        subsets[q.stage].insert(msgs);
        if (round.count(q.stage)) {
          EXPECT_EQ(round[q.stage], q.round);
        }
        round[q.stage] = q.round;
      }
      for (const auto& [stage, got] : subsets) {
        std::vector<int> all(static_cast<size_t>(m));
        for (int i = 0; i < m; ++i) all[static_cast<size_t>(i)] = i + 1;
        const auto want = Subsets(all, round[stage]);
        EXPECT_EQ(got, std::multiset<std::vector<int>>(want.begin(), want.end()));
      }
    }
  });
}

std::vector<std::vector<int>> Shape(const std::vector<Query>& queries) {
  std::vector<std::vector<int>> out;
  for (const Query& q : queries) {
    std::vector<int> msgs{q.round};
    for (const Term& t : q.terms) msgs.push_back(t.message);
    out.push_back(msgs);
  }
  return out;
}

TEST(SynthesisPropertyTest, DatabasesInAGroupShareTheirShape) {
  ForSmallSchemes([](const SchemeSpec& spec, const Scheme& s) {
    for (int group : spec.groups()) {
      const int first = spec.group_begin(group);
      for (int j = 1; j < spec.group_size(group); ++j) {
        EXPECT_EQ(Shape(s.plan.databases[static_cast<size_t>(first)]),
                  Shape(s.plan.databases[static_cast<size_t>(first + j)]));
      }
    }
  });
}

TEST(SynthesisPropertyTest, SymbolsAreFreshWithinEachDatabase) {
  ForSmallSchemes([](const SchemeSpec&, const Scheme& s) {
    std::set<int64_t> desired_symbols;
    for (const auto& queries : s.plan.databases) {
      std::set<Term> seen;
      for (const Query& q : queries) {
        for (const Term& t : q.terms) {
          EXPECT_TRUE(seen.insert(t).second);
          EXPECT_GE(t.symbol, 1);
          EXPECT_LE(t.symbol, s.plan.symbol_budget[static_cast<size_t>(t.message - 1)]);
          if (t.message == s.decode.desired) {
            EXPECT_TRUE(desired_symbols.insert(t.symbol).second);
          }
        }
      }
    }
    EXPECT_EQ(static_cast<int64_t>(desired_symbols.size()), s.plan.length);
    if (!desired_symbols.empty()) {
      EXPECT_EQ(*desired_symbols.rbegin(), s.plan.length);
    }
  });
}

TEST(SynthesisPropertyTest, PlansValidateAndDecodeMapsCoverEverySymbol) {
  ForSmallSchemes([](const SchemeSpec& spec, const Scheme& s) {
    EXPECT_TRUE(ValidatePlan(s.plan).ok());
    EXPECT_EQ(static_cast<int64_t>(s.decode.entries.size()), s.plan.length);
    std::set<int64_t> symbols;
    for (const DecodeEntry& e : s.decode.entries) {
      symbols.insert(e.desired_symbol);
      const Query& target = s.plan.databases[static_cast<size_t>(e.target.database)]
                                            [static_cast<size_t>(e.target.position)];
      std::multiset<Term> undesired;
      for (const Term& t : target.terms) {
        if (t.message != s.decode.desired) undesired.insert(t);
      }
      std::multiset<Term> cancelled;
      for (const QueryRef& r : e.side_info) {
        const Query& q = s.plan.databases[static_cast<size_t>(r.database)]
                                         [static_cast<size_t>(r.position)];
        EXPECT_LT(q.round, target.round);
        cancelled.insert(q.terms.begin(), q.terms.end());
      }
      EXPECT_EQ(undesired, cancelled);
    }
    EXPECT_EQ(static_cast<int64_t>(symbols.size()), s.plan.length);
    const LengthBudget budget = RequiredLength(spec).value();
    EXPECT_EQ(budget.length, s.plan.length);
    for (int msg = 1; msg <= spec.num_messages(); ++msg) {
      if (msg == s.decode.desired) continue;
      EXPECT_EQ(s.plan.symbol_budget[static_cast<size_t>(msg - 1)], budget.undesired_per_message);
    }
  });
}

TEST(SynthesisTest, RejectsBadDesiredIndex) {
  EXPECT_FALSE(Synthesize(Spec(2, {1, 2, 2}), 0).ok());
  EXPECT_FALSE(Synthesize(Spec(2, {1, 2, 2}), 4).ok());
}

TEST(RequiredLengthTest, Examples) {
  EXPECT_EQ(RequiredLength(Spec(2, {1, 2, 2})).value().length, 4);
  EXPECT_EQ(RequiredLength(Spec(2, {1, 1, 2})).value().length, 2);
  for (int a = 1; a <= 5; ++a) {
    for (int b = a; b <= 5; ++b) EXPECT_EQ(RequiredLength(Spec(5, {a, b})).value().length, a * b);
  }
  const std::vector<std::pair<SchemeSpec, int64_t>> mix = {{Spec(2, {1, 2, 2}), 1},
                                                           {Spec(2, {1, 1, 2}), 2}};
  EXPECT_EQ(RequiredLength(mix).value().length, 8);
}

TEST(ConcatenateTest, IdentityDoublingAndMismatch) {
  const Scheme s = Synthesize(Spec(2, {1, 2, 2}), 2).value();
  const Scheme one = Concatenate({{&s, 1}}).value();
  EXPECT_EQ(one.plan, s.plan);
  EXPECT_EQ(one.decode, s.decode);

  const Scheme two = Concatenate({{&s, 2}}).value();
  EXPECT_EQ(two.plan.Traffic(), (std::vector<int64_t>{8, 6}));
  EXPECT_EQ(two.plan.length, 8);
  EXPECT_TRUE(ValidatePlan(two.plan).ok());
  EXPECT_EQ(two.decode.entries.size(), 8u);

  const Scheme other = Synthesize(Spec(3, {1, 2, 2}), 2).value();
  EXPECT_FALSE(Concatenate({{&s, 1}, {&other, 1}}).ok());
  const Scheme other_desired = Synthesize(Spec(2, {1, 2, 2}), 1).value();
  EXPECT_FALSE(Concatenate({{&s, 1}, {&other_desired, 1}}).ok());
  EXPECT_FALSE(Concatenate({}).ok());
}

TEST(ComponentsForTargetTest, HalfwayUsesTwoToOne) {
  const std::vector<Rational> lambda{Rational(1), Rational(1, 2)};
  const auto target = TrafficVector::FromLambda(lambda).value();
  const auto parts = ComponentsForTarget(target, 3).value();
  ASSERT_EQ(parts.size(), 2u);
  int64_t total_reps = 0;
  for (const auto& [spec, reps] : parts) {
    if (spec.sequence() == std::vector<int>{1, 1, 2}) {
      EXPECT_EQ(reps, 2);
    }
    if (spec.sequence() == std::vector<int>{1, 2, 2}) {
      EXPECT_EQ(reps, 1);
    }
    total_reps += reps;
  }
  EXPECT_EQ(total_reps, 3);
  const Scheme s = SynthesizeMixture(parts, 1).value();
  EXPECT_EQ(s.plan.Traffic(), (std::vector<int64_t>{10, 5}));
}

TEST(ComponentsForTargetTest, RandomTargetsReproduceTau) {
  testing::Gen gen(99);
  for (int iter = 0; iter < 40; ++iter) {
    const int m = gen.Int(1, 3);
    const int n = gen.Int(1, 3);
    const TrafficVector target = gen.Tau(n, 6);
    const auto parts = ComponentsForTarget(target, m).value();
    const Scheme s = SynthesizeMixture(parts, gen.Int(1, m)).value();
    const std::vector<int64_t> t = s.plan.Traffic();
    const int64_t total = s.plan.TotalDownloads();
    for (int j = 0; j < n; ++j) EXPECT_EQ(Rational(t[static_cast<size_t>(j)], total), target[j]);
    EXPECT_TRUE(ValidatePlan(s.plan).ok());
  }
}

TEST(ShuffleTest, PreservesMultisetAndRecordsSeed) {
  const Scheme s = Synthesize(Spec(3, {2, 3, 3}), 1).value();
  const Scheme a = Shuffle(s, 5);
  const Scheme b = Shuffle(s, 5);
  EXPECT_EQ(a.plan, b.plan);
  EXPECT_EQ(a.plan.shuffle_seed, 5u);
  EXPECT_TRUE(ValidatePlan(a.plan).ok());
  bool moved = false;
  for (int db = 0; db < 3; ++db) {
    auto x = Render(s.plan)[static_cast<size_t>(db)];
    auto y = Render(a.plan)[static_cast<size_t>(db)];
    if (x != y) moved = true;
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    EXPECT_EQ(x, y);
  }
  EXPECT_TRUE(moved);
  for (const DecodeEntry& e : a.decode.entries) {
    const Query& q = a.plan.databases[static_cast<size_t>(e.target.database)]
                                     [static_cast<size_t>(e.target.position)];
    bool has_symbol = false;
    for (const Term& t : q.terms) {
      has_symbol |= t.message == 1 && t.symbol == e.desired_symbol;
    }
    EXPECT_TRUE(has_symbol);
  }
}

TEST(PlanJsonTest, RoundTripsUnshuffledAndShuffledPlans) {
  for (const auto& seq : std::vector<std::vector<int>>{{1, 2, 2}, {1, 2, 3}, {2, 3, 3}}) {
    const Scheme s = Synthesize(Spec(3, seq), 2).value();
    for (const QueryPlan& plan : {s.plan, Shuffle(s, 17).plan}) {
      QueryPlan parsed = ParsePlanJson(PlanJson(plan, 2)).value();
      QueryPlan expected = plan;
      for (auto& queries : expected.databases) {
        for (Query& q : queries) q.stage = 0;
      }
      EXPECT_EQ(parsed, expected);
    }
  }
  EXPECT_FALSE(ParsePlanJson("{").ok());
  EXPECT_FALSE(ParsePlanJson("{}").ok());
}

TEST(MessageNameTest, LettersThenIndices) {
  EXPECT_EQ(MessageName(1, 3), "a");
  EXPECT_EQ(MessageName(3, 3), "c");
  EXPECT_EQ(FormatQuery({{{1, 4}, {2, 2}, {3, 2}}, 3, 0}, 3), "a4+b2+c2");
}

}  // namespace
}  // namespace pir_asym
