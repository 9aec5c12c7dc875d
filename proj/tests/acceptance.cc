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

// Acceptance runner. Prints one PASS/FAIL line per criterion and exits
// nonzero when any selected criterion fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "pir_asym/bounds.h"
#include "pir_asym/combinatorics.h"
#include "pir_asym/protocol.h"
#include "pir_asym/rational.h"
#include "pir_asym/scheme.h"
#include "pir_asym/stage_calculus.h"
#include "pir_asym/verifier.h"

namespace pir_asym {
namespace {

// Pinned tolerances and limits.
constexpr double kCornerSecondsEach = 1.0;
constexpr double kCapacitySeconds = 30.0;
constexpr double kProtocolSeconds = 120.0;
constexpr int kProtocolTrials = 100;
constexpr int kCapacityGrid = 50;
constexpr int64_t kTvSamples = 10000;
constexpr double kTvThreshold = 0.05;
constexpr double kTradeoffTolerance = 0.03;
constexpr int kTradeoffMessages = 20;

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> failures;

  void Check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (failures.size() < 5) failures.push_back(what);
    }
  }
};

struct Criterion {
  std::string id;
  std::string title;
  std::function<Outcome()> run;
};

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

Rational R(int64_t p, int64_t q = 1) { return Rational(p, q); }

std::string Fmt(const std::vector<Rational>& v) {
  return absl::StrJoin(v, ",", [](std::string* out, const Rational& r) {
    absl::StrAppend(out, FormatRational(r));
  });
}

std::string Seq(const std::vector<int>& v) { return absl::StrJoin(v, ","); }

SchemeSpec Spec(int n, std::vector<int> seq) {
  return SchemeSpec::Create(n, std::move(seq)).value();
}

// ---------------------------------------------------------------------------

struct GoldenCorner {
  int n;
  std::vector<int> seq;
  std::vector<Rational> tau;
  Rational rate;
};

Outcome CornerGoldens() {
  const std::vector<GoldenCorner> goldens = {
      {2, {1, 1, 1}, {R(1), R(0)}, R(1, 3)},
      {2, {1, 1, 2}, {R(3, 4), R(1, 4)}, R(1, 2)},
      {2, {1, 2, 2}, {R(4, 7), R(3, 7)}, R(4, 7)},
      {2, {2, 2, 2}, {R(1, 2), R(1, 2)}, R(4, 7)},
      {2, {1, 1, 1, 1}, {R(1), R(0)}, R(1, 4)},
      {2, {1, 1, 1, 2}, {R(4, 5), R(1, 5)}, R(2, 5)},
      {2, {1, 1, 2, 2}, {R(9, 13), R(4, 13)}, R(6, 13)},
      {2, {1, 2, 2, 2}, {R(8, 15), R(7, 15)}, R(8, 15)},
      {2, {2, 2, 2, 2}, {R(1, 2), R(1, 2)}, R(8, 15)},
      {3, {1, 1, 1}, {R(1), R(0), R(0)}, R(1, 3)},
      {3, {1, 1, 2}, {R(3, 4), R(1, 4), R(0)}, R(1, 2)},
      {3, {1, 2, 2}, {R(4, 7), R(3, 7), R(0)}, R(4, 7)},
      {3, {2, 2, 2}, {R(1, 2), R(1, 2), R(0)}, R(4, 7)},
      {3, {1, 1, 3}, {R(3, 5), R(1, 5), R(1, 5)}, R(3, 5)},
      {3, {1, 2, 3}, {R(4, 9), R(1, 3), R(2, 9)}, R(2, 3)},
      {3, {1, 3, 3}, {R(5, 13), R(4, 13), R(4, 13)}, R(9, 13)},
      {3, {2, 2, 3}, {R(7, 18), R(7, 18), R(2, 9)}, R(2, 3)},
      {3, {2, 3, 3}, {R(9, 26), R(9, 26), R(4, 13)}, R(9, 13)},
      {3, {3, 3, 3}, {R(1, 3), R(1, 3), R(1, 3)}, R(9, 13)},
  };
  Outcome out;
  double slowest = 0;
  for (const GoldenCorner& g : goldens) {
    const auto start = Clock::now();
    const auto corner = ComputeCornerPoint(Spec(g.n, g.seq));
    const double secs = Seconds(start);
    slowest = std::max(slowest, secs);
    const std::string name = absl::StrCat("N=", g.n, " n=(", Seq(g.seq), ")");
    if (!corner.ok()) {
      out.Check(false, absl::StrCat(name, ": ", corner.status().ToString()));
      continue;
    }
    out.Check(corner->tau.tau() == g.tau && corner->rate == g.rate,
              absl::StrCat(name, ": got tau=(", Fmt(corner->tau.tau()), ") R=",
                           FormatRational(corner->rate)));
    out.Check(secs < kCornerSecondsEach, absl::StrCat(name, " took ", secs, "s"));
  }
  const auto all = EnumerateCorners(3, 3);
  out.Check(all.ok() && all->size() == 10, "M=3,N=3 does not have ten corners");
  out.detail = absl::StrCat(goldens.size(), " corners exact, slowest ",
                            FormatDecimal(Rational(static_cast<int64_t>(slowest * 1e6), 1000000)), "s");
  return out;
}

Outcome CapacityReproduction() {
  Outcome out;
  const auto start = Clock::now();
  int corners = 0;
  int grid = 0;
  for (int m = 2; m <= 3; ++m) {
    for (int n = 2; n <= 5; ++n) {
      const auto report = CheckCapacityMatch(m, n, kCapacityGrid, 20261015);
      if (!report.ok()) {
        out.Check(false, report.status().ToString());
        continue;
      }
      corners += report->corners_checked;
      grid += report->grid_checked;
      out.Check(report->grid_checked == kCapacityGrid,
                absl::StrCat("M=", m, " N=", n, " checked ", report->grid_checked, " grid points"));
      for (const std::string& mismatch : report->mismatches) {
        out.Check(false, absl::StrCat("M=", m, " N=", n, ": ", mismatch));
      }
    }
  }
  const double secs = Seconds(start);
  out.Check(secs < kCapacitySeconds, absl::StrCat("took ", secs, "s"));
  out.detail = absl::StrCat(corners, " corners and ", grid, " grid points exact in ",
                            static_cast<int>(secs * 1000), "ms");
  return out;
}

Outcome PiecewiseCurves() {
  Outcome out;
  for (int k = 0; k <= 120; ++k) {
    const Rational l(k, 120);
    const Rational want = l <= R(1, 3)   ? (1 + 3 * l) / (3 * (1 + l))
                          : l <= R(3, 4) ? 2 * (1 + 2 * l) / (5 * (1 + l))
                                         : R(4, 7);
    const std::vector<Rational> lambda{R(1), l};
    const auto got = UpperBound(TrafficVector::FromLambda(lambda).value(), 3);
    out.Check(got.ok() && got->value == want,
              absl::StrCat("M=3 lambda2=", FormatRational(l)));
  }
  for (int k = 0; k <= 240; ++k) {
    const Rational t(k, 480);
    const Rational want = t <= R(1, 5)    ? R(1, 4) + 3 * t / 4
                          : t <= R(3, 8)  ? R(2, 7) + 4 * t / 7
                          : t <= R(7, 15) ? R(4, 11) + 4 * t / 11
                                          : R(8, 15);
    const auto got = UpperBound(TrafficVector::FromTau({1 - t, t}).value(), 4);
    out.Check(got.ok() && got->value == want, absl::StrCat("M=4 tau2=", FormatRational(t)));
  }
  // Time sharing at 3/8 runs along the segment between the 4/13 and 7/15
  // corners.
  const Rational t = R(3, 8);
  const Rational interp = R(6, 13) + (t - R(4, 13)) * (R(8, 15) - R(6, 13)) / (R(7, 15) - R(4, 13));
  const auto target = TrafficVector::FromTau({1 - t, t}).value();
  const auto corners = EnumerateCorners(4, 2).value();
  const auto mix = SolveMixture(target, corners);
  const auto bound = UpperBound(target, 4);
  out.Check(mix.ok() && mix->rate == interp, "time-sharing rate at 3/8 is off the corner segment");
  out.Check(bound.ok() && bound->value == R(1, 2), "bound at 3/8 is not 1/2");
  Rational gap = 0;
  if (mix.ok() && bound.ok()) gap = bound->value - mix->rate;
  out.Check(gap > 0, "no gap at 3/8");
  out.detail = absl::StrCat("M=3 three branches, M=4 four branches; gap at 3/8 = 1/2 - ",
                            mix.ok() ? FormatRational(mix->rate) : "?", " = ",
                            FormatRational(gap));
  return out;
}

Outcome Threshold() {
  Outcome out;
  int checked = 0;
  for (int m = 2; m <= 6; ++m) {
    for (int n = 2; n <= 6; ++n) {
      const Rational star = AsymmetryThreshold(m, n).value();
      const Rational symmetric = SymmetricCapacity(m, n);
      // First N-1 databases share the rest evenly; the last carries t.
      auto family = [&](const Rational& last) {
        std::vector<Rational> tau(static_cast<size_t>(n), (1 - last) / (n - 1));
        tau.back() = last;
        return TrafficVector::FromTau(tau).value();
      };
      const std::string where = absl::StrCat("M=", m, " N=", n);
      for (int64_t denom : {1000, 1000000}) {
        const Rational below = star - star / denom;
        out.Check(UpperBound(family(below), m).value().value < symmetric,
                  absl::StrCat(where, " not below symmetric at tau*(1-1/", denom, ")"));
        ++checked;
      }
      for (const Rational& at : {star, (star + R(1, n)) / 2, R(1, n)}) {
        out.Check(UpperBound(family(at), m).value().value == symmetric,
                  absl::StrCat(where, " differs from symmetric at tau_N=", FormatRational(at)));
        ++checked;
      }
    }
  }
  out.detail = absl::StrCat(checked, " points over M,N in 2..6");
  return out;
}

Outcome EndToEnd() {
  Outcome out;
  const auto start = Clock::now();
  int specs = 0;
  int64_t trials = 0;
  for (int m = 1; m <= 4; ++m) {
    for (int n = 1; n <= 3; ++n) {
      for (const auto& seq : MonotoneSequences(m, n)) {
        const SchemeSpec spec = Spec(n, seq);
        const CornerPoint corner = ComputeCornerPoint(spec).value();
        HarnessConfig config;
        config.components = {{spec, 1}};
        config.trials = kProtocolTrials;
        config.seed = DeriveSeed(12345, static_cast<uint64_t>(specs));
        const std::string where = absl::StrCat("M=", m, " N=", n, " n=(", Seq(seq), ")");
        const auto report = RunHarness(config);
        ++specs;
        if (!report.ok()) {
          out.Check(false, absl::StrCat(where, ": ", report.status().ToString()));
          continue;
        }
        trials += report->trials;
        out.Check(report->failures == 0,
                  absl::StrCat(where, " failed at seed ", report->failing_seed.value_or(0), ": ",
                               report->failure));
        out.Check(report->per_db_traffic == corner.downloads, absl::StrCat(where, " traffic"));
        out.Check(report->tau_measured == corner.tau.tau(), absl::StrCat(where, " tau"));
        out.Check(report->rate_measured == corner.rate, absl::StrCat(where, " rate"));
      }
    }
  }
  const double secs = Seconds(start);
  out.Check(secs < kProtocolSeconds, absl::StrCat("took ", secs, "s"));
  out.detail = absl::StrCat(specs, " specs, ", trials, " trials, all decoded in ",
                            static_cast<int>(secs * 1000), "ms");
  return out;
}

Outcome Privacy() {
  Outcome out;
  int shapes = 0;
  for (int m = 1; m <= 4; ++m) {
    for (int n = 1; n <= 3; ++n) {
      for (const auto& seq : MonotoneSequences(m, n)) {
        const auto r = CheckPrivacyShape(Spec(n, seq));
        out.Check(r.ok() && r->pass, absl::StrCat("shape M=", m, " N=", n, " n=(", Seq(seq), ")"));
        ++shapes;
      }
    }
  }
  double worst = 0;
  int sampled = 0;
  for (int m = 2; m <= 3; ++m) {
    for (const auto& seq : MonotoneSequences(m, 2)) {
      DistributionOptions options;
      options.samples = kTvSamples;
      options.threshold = kTvThreshold;
      options.seed = DeriveSeed(777, static_cast<uint64_t>(sampled));
      const auto r = CheckQueryDistribution(Spec(2, seq), options);
      ++sampled;
      const std::string where = absl::StrCat("tv M=", m, " n=(", Seq(seq), ")");
      if (!r.ok()) {
        out.Check(false, absl::StrCat(where, ": ", r.status().ToString()));
        continue;
      }
      worst = std::max(worst, r->tv_estimate);
      out.Check(r->verdict == DistributionVerdict::kPass && r->tv_estimate < kTvThreshold,
                absl::StrCat(where, " ", VerdictName(r->verdict), " tv=", r->tv_estimate));
    }
  }
  // Planted violations.
  const SchemeSpec spec = Spec(2, {1, 2, 2});
  const PlanSource base = CornerSource(spec);
  const PlanSource missing = [&](int desired) -> absl::StatusOr<Scheme> {
    auto s = base(desired);
    if (!s.ok() || desired != 1) return s;
    return RemoveQuery(*s, {1, 2});
  };
  const auto shape_mutant = CheckPrivacyShape(3, missing);
  out.Check(shape_mutant.ok() && !shape_mutant->pass && shape_mutant->witness.has_value(),
            "shape check missed the removed combination");
  DistributionOptions unshuffled;
  unshuffled.samples = kTvSamples;
  unshuffled.shuffle = false;
  const auto tv_mutant = CheckQueryDistribution(Spec(2, {1, 2}), unshuffled);
  out.Check(tv_mutant.ok() && tv_mutant->verdict == DistributionVerdict::kFail,
            "distribution check missed the unshuffled plan");
  const auto tv_shape_mutant = CheckQueryDistribution(3, missing, unshuffled);
  out.Check(tv_shape_mutant.ok() && tv_shape_mutant->verdict == DistributionVerdict::kFail,
            "distribution check missed the removed combination");
  out.detail = absl::StrCat(shapes, " shapes equal, ", sampled, " corners with max tv ", worst,
                            " at ", kTvSamples, " samples, mutants caught");
  return out;
}

std::vector<Scheme> GoldenPlans() {
  std::vector<Scheme> plans;
  for (const auto& seq : MonotoneSequences(3, 2)) plans.push_back(Synthesize(Spec(2, seq), 1).value());
  plans.push_back(
      SynthesizeMixture({{Spec(2, {1, 2, 2}), 1}, {Spec(2, {1, 1, 2}), 2}}, 1).value());
  for (const auto& seq : MonotoneSequences(4, 2)) plans.push_back(Synthesize(Spec(2, seq), 1).value());
  for (const auto& seq : MonotoneSequences(3, 3)) plans.push_back(Synthesize(Spec(3, seq), 1).value());
  return plans;
}

Outcome OracleEquivalence() {
  Outcome out;
  const PrimeField field = PrimeField::Create(2).value();
  int plans = 0;
  int mutants = 0;
  uint64_t seed = 1;
  for (const Scheme& s : GoldenPlans()) {
    ++plans;
    const auto store = std::make_shared<const MessageStore>(
        MakeStore(s.plan.num_messages, s.plan.length, 2, seed).value());
    const auto perms = RandomPermutations(s.plan.num_messages, s.plan.length, seed + 1);
    seed += 2;
    const auto permuted = Permute(s.decode.desired, *store, perms).value();
    auto transport = MakeTransport(TransportKind::kInline, store, s.plan.num_databases).value();
    const auto answers = transport->Exchange(RealizeQueries(s.plan, perms).value()).value();
    const auto oracle = BruteForceOracle(s.plan, answers, s.decode.desired, field);
    auto t2 = MakeTransport(TransportKind::kInline, store, s.plan.num_databases).value();
    const auto retrieved = Retrieve(s, perms, field, *t2);
    const std::string where = absl::StrCat("plan #", plans);
    out.Check(oracle.ok() && oracle->decodable && retrieved.ok(), where + " not decoded by both");
    if (oracle.ok() && retrieved.ok()) {
      out.Check(oracle->desired_symbols == permuted, where + " oracle values");
      out.Check(retrieved->decoded == std::vector<FieldSymbol>(store->Message(s.decode.desired).begin(),
                                                               store->Message(s.decode.desired).end()),
                where + " retrieve values");
    }
  }
  const Scheme t3 = Synthesize(Spec(2, {1, 2, 2}), 1).value();
  for (const Mutant& mutant : PlantedMutants(t3)) {
    ++mutants;
    const auto store = std::make_shared<const MessageStore>(MakeStore(3, t3.plan.length, 2, 5).value());
    const auto perms = RandomPermutations(3, t3.plan.length, 6);
    auto transport = MakeTransport(TransportKind::kInline, store, 2).value();
    const auto answers = transport->Exchange(RealizeQueries(mutant.scheme.plan, perms).value()).value();
    const auto oracle = BruteForceOracle(mutant.scheme.plan, answers, 1, field);
    out.Check(oracle.ok() && !oracle->decodable && !oracle->unrecoverable.empty(),
              mutant.name + " accepted by oracle");
    auto t2 = MakeTransport(TransportKind::kInline, store, 2).value();
    out.Check(!Retrieve(mutant.scheme, perms, field, *t2).ok(), mutant.name + " accepted by retrieve");
  }
  out.Check(mutants == 3, absl::StrCat("expected 3 mutants, built ", mutants));
  out.detail = absl::StrCat(plans, " golden plans agree, ", mutants, " mutants rejected");
  return out;
}

Outcome Recurrence() {
  Outcome out;
  int specs = 0;
  for (int m = 1; m <= 5; ++m) {
    for (int n = 1; n <= 5; ++n) {
      for (const auto& seq : MonotoneSequences(m, n)) {
        ++specs;
        const SchemeSpec spec = Spec(n, seq);
        const auto c = SolveStages(spec);
        if (!c.ok()) {
          out.Check(false, c.status().ToString());
          continue;
        }
        int64_t product = 1;
        for (int s : spec.groups()) {
          if (s >= 1) product *= Binomial(m - 2, s - 1);
        }
        const std::string where = absl::StrCat("M=", m, " N=", n, " n=(", Seq(seq), ")");
        out.Check(c->y(0, 1) == product, where + " initial stages");
        for (const GroupStages& g : c->groups) {
          for (int k = 1; k <= g.group && k <= m; ++k) {
            out.Check(c->y(g.group, k) == 0, where + " silent round not empty");
          }
          for (int k = std::max(2, g.group + 1); k <= m; ++k) {
            int64_t rhs = (g.group >= 2 && k == g.group + 1) ? seq[0] * g.xi : 0;
            for (const GroupStages& h : c->groups) {
              rhs += (h.size - (h.group == g.group ? 1 : 0)) * c->y(h.group, k - 1);
            }
            out.Check(c->y(g.group, k) == rhs, absl::StrCat(where, " l=", g.group, " k=", k));
          }
        }
      }
    }
  }
  out.detail = absl::StrCat(specs, " specs re-substituted");
  return out;
}

Outcome TwoDatabaseClosedForm() {
  Outcome out;
  int points = 0;
  for (int m = 2; m <= 8; ++m) {
    for (int s2 = 1; s2 <= m - 1; ++s2) {
      std::vector<int> seq(static_cast<size_t>(m), 2);
      for (int i = 0; i < s2; ++i) seq[static_cast<size_t>(i)] = 1;
      const auto corner = ComputeCornerPoint(Spec(2, seq));
      const auto closed = N2Tradeoff(m, s2);
      ++points;
      out.Check(corner.ok() && closed.ok() && corner->tau[1] == closed->tau2 &&
                    corner->rate == closed->rate,
                absl::StrCat("M=", m, " s2=", s2));
    }
  }
  out.detail = absl::StrCat(points, " (M, s2) points exact for M <= 8");
  return out;
}

Outcome TradeoffNearDiagonal() {
  Outcome out;
  double worst = 0;
  int worst_s2 = 0;
  int over = 0;
  for (int s2 = 1; s2 <= kTradeoffMessages - 1; ++s2) {
    const auto p = N2Tradeoff(kTradeoffMessages, s2);
    if (!p.ok()) {
      out.Check(false, p.status().ToString());
      continue;
    }
    const double diff = std::abs(ToDouble(p->rate) - ToDouble(p->tau2));
    if (diff >= kTradeoffTolerance) ++over;
    if (diff > worst) {
      worst = diff;
      worst_s2 = s2;
    }
    out.Check(diff < kTradeoffTolerance, absl::StrCat("s2=", s2, " |R - tau2| = ", diff));
  }
  out.detail = absl::StrCat("M=", kTradeoffMessages, ": max |R - tau2| = ", worst, " at s2=",
                            worst_s2, ", ", over, " of ", kTradeoffMessages - 1,
                            " points at or above ", kTradeoffTolerance);
  return out;
}

std::vector<Criterion> Criteria() {
  return {
      {"1", "corner-point golden values", CornerGoldens},
      {"2", "capacity for M in {2,3}, N in 2..5", CapacityReproduction},
      {"3", "piecewise bound curves and M=4 gap", PiecewiseCurves},
      {"4", "asymmetry threshold", Threshold},
      {"5", "end-to-end retrieval", EndToEnd},
      {"6", "privacy shape and query distribution", Privacy},
      {"7", "oracle equivalence", OracleEquivalence},
      {"8a", "stage recurrence re-substitution", Recurrence},
      {"8b", "two-database closed form", TwoDatabaseClosedForm},
      {"8c", "rate tracks tau_2 at M=20", TradeoffNearDiagonal},
  };
}

}  // namespace
}  // namespace pir_asym

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks for pir-asym"};
  std::vector<std::string> selected;
  app.add_option("--criterion", selected, "Run only these criteria (1..7, 8 or 8a/8b/8c)");
  CLI11_PARSE(app, argc, argv);

  bool all_pass = true;
  int ran = 0;
  for (const pir_asym::Criterion& c : pir_asym::Criteria()) {
    bool wanted = selected.empty();
    for (const std::string& s : selected) wanted |= s == c.id || (s == "8" && c.id[0] == '8');
    if (!wanted) continue;
    ++ran;
    const pir_asym::Outcome o = c.run();
    all_pass &= o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.title << ": " << o.detail
              << "\n";
    for (const std::string& f : o.failures) std::cout << "    " << f << "\n";
  }
  if (ran == 0) {
    std::cerr << "no criterion matched\n";
    return 2;
  }
  return all_pass ? 0 : 1;
}
