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

// pir-asym: corner points, converse bounds, plan synthesis, simulation and
// verification for PIR under asymmetric traffic ratios.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "pir_asym/bounds.h"
#include "pir_asym/field.h"
#include "pir_asym/protocol.h"
#include "pir_asym/rational.h"
#include "pir_asym/scheme.h"
#include "pir_asym/serialization.h"
#include "pir_asym/stage_calculus.h"
#include "pir_asym/status_macros.h"
#include "pir_asym/verifier.h"

namespace pir_asym {
namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct Options {
  int m = 0;
  int n = 0;
  uint32_t p = 2;
  std::string spec;
  std::string tau;
  std::string lambda;
  std::optional<uint64_t> seed;
  int trials = 100;
  int grid = 101;
  std::string out;
  std::string format;
  int desired = 1;
  int64_t samples = 10000;
  bool exhaustive = false;
  bool threaded = false;
  std::string decode_out;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

uint64_t ResolveSeed(const Options& opt) {
  if (opt.seed) return *opt.seed;
  if (const char* env = std::getenv("PIR_ASYM_SEED")) {
    uint64_t value = 0;
    if (absl::SimpleAtoi(env, &value)) return value;
    throw UsageError(absl::StrCat("PIR_ASYM_SEED=", env, " is not an integer"));
  }
  return 0;
}

// Bad input surfaces as a usage error; anything else is a runtime failure.
template <typename T>
T OrUsage(absl::StatusOr<T> value) {
  if (value.ok()) return *std::move(value);
  if (absl::IsInvalidArgument(value.status()) ||
      absl::IsOutOfRange(value.status())) {
    throw UsageError(std::string(value.status().message()));
  }
  throw std::runtime_error(value.status().ToString());
}

absl::Status Emit(const Options& opt, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text;
    return absl::OkStatus();
  }
  std::ofstream file(opt.out, std::ios::binary);
  file << text;
  if (!file) return absl::UnavailableError(absl::StrCat("cannot write ", opt.out));
  return absl::OkStatus();
}

void RequireFormat(const Options& opt, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed) {
    if (opt.format == f) return;
  }
  throw UsageError(absl::StrCat("--format must be one of ",
                                absl::StrJoin(allowed, ", ")));
}

TrafficVector ParseTarget(const Options& opt) {
  if (!opt.tau.empty() && !opt.lambda.empty()) {
    throw UsageError("give either --tau or --lambda, not both");
  }
  if (!opt.tau.empty()) {
    return OrUsage(TrafficVector::FromTau(OrUsage(ParseRationalList(opt.tau))));
  }
  if (!opt.lambda.empty()) {
    const std::vector<Rational> lambda = OrUsage(ParseRationalList(opt.lambda));
    return OrUsage(TrafficVector::FromLambda(lambda));
  }
  throw UsageError("a traffic target needs --tau or --lambda");
}

SchemeSpec ParseSpec(const Options& opt) {
  std::vector<int> sequence;
  for (absl::string_view part : absl::StrSplit(opt.spec, ',')) {
    int v = 0;
    if (!absl::SimpleAtoi(part, &v)) {
      throw UsageError(absl::StrCat("bad --spec entry '", part, "'"));
    }
    sequence.push_back(v);
  }
  if (opt.m != 0 && opt.m != static_cast<int>(sequence.size())) {
    throw UsageError("--m disagrees with the length of --spec");
  }
  const int n = opt.n != 0 ? opt.n : (sequence.empty() ? 0 : sequence.back());
  return OrUsage(SchemeSpec::Create(n, std::move(sequence)));
}

// A corner spec or, from a traffic target, its time-sharing components.
std::vector<std::pair<SchemeSpec, int64_t>> ParseComponents(const Options& opt) {
  if (!opt.spec.empty()) {
    if (!opt.tau.empty() || !opt.lambda.empty()) {
      throw UsageError("give either --spec or a traffic target, not both");
    }
    return {{ParseSpec(opt), 1}};
  }
  if (opt.m < 1) throw UsageError("--m is required with a traffic target");
  const TrafficVector target = ParseTarget(opt);
  if (opt.n != 0 && opt.n != target.size()) {
    throw UsageError("--n disagrees with the traffic target length");
  }
  return OrUsage(ComponentsForTarget(target, opt.m));
}

std::string RatesLine(const Rational& r) {
  return absl::StrCat(FormatRational(r), " (", FormatDecimal(r), ")");
}

int CmdCorners(Options opt) {
  if (opt.format.empty()) opt.format = "table";
  RequireFormat(opt, {"table", "json", "csv"});
  if (opt.m < 1 || opt.n < 1) throw UsageError("corners needs --m and --n");
  const std::vector<CornerPoint> corners = OrUsage(EnumerateCorners(opt.m, opt.n));
  std::string text = opt.format == "json" ? CornersJson(corners)
                     : opt.format == "csv" ? CornersCsv(corners)
                                           : CornersTable(corners);
  absl::Status s = Emit(opt, text);
  if (!s.ok()) {
    std::cerr << s << "\n";
    return kExitFailure;
  }
  return 0;
}

int CmdBound(Options opt) {
  if (opt.format.empty()) opt.format = "table";
  RequireFormat(opt, {"table", "json"});
  if (opt.m < 1) throw UsageError("bound needs --m");
  const TrafficVector tau = ParseTarget(opt);
  BoundOptions options;
  options.branches = opt.exhaustive ? BranchSet::kExhaustive : BranchSet::kMonotone;
  const BoundResult bound = OrUsage(UpperBound(tau, opt.m, options));
  std::string text;
  if (opt.format == "json") {
    text = BoundJson(bound, tau, opt.m);
  } else {
    text = absl::StrCat("upper bound: ", RatesLine(bound.value), "\nargmin (n_1..n_",
                        opt.m - 1, "): (", absl::StrJoin(bound.argmin_sequence, ","),
                        ")\n");
    if (opt.m == 2 || opt.m == 3) {
      absl::StrAppend(&text, "capacity: ",
                      RatesLine(OrUsage(CapacitySmallM(tau, opt.m))), "\n");
    }
  }
  absl::Status s = Emit(opt, text);
  if (!s.ok()) {
    std::cerr << s << "\n";
    return kExitFailure;
  }
  return 0;
}

int CmdSynth(Options opt) {
  if (opt.format.empty()) opt.format = "table";
  RequireFormat(opt, {"table", "json"});
  const auto components = ParseComponents(opt);
  const int m = components.front().first.num_messages();
  if (opt.desired < 1 || opt.desired > m) {
    throw UsageError(absl::StrCat("--desired must lie in 1..", m));
  }
  Scheme scheme = OrUsage(SynthesizeMixture(components, opt.desired));
  if (opt.seed || std::getenv("PIR_ASYM_SEED") != nullptr) {
    scheme = Shuffle(scheme, ResolveSeed(opt));
  }
  std::string text;
  if (opt.format == "json") {
    text = PlanJson(scheme.plan, opt.p);
  } else {
    const std::vector<int64_t> traffic = scheme.plan.Traffic();
    text = absl::StrCat(RenderTable(scheme.plan), "\nL = ", scheme.plan.length,
                        ", t = (", absl::StrJoin(traffic, ","), "), R = ",
                        RatesLine(Rational(scheme.plan.length,
                                           scheme.plan.TotalDownloads())),
                        "\n");
  }
  absl::Status s = Emit(opt, text);
  if (s.ok() && !opt.decode_out.empty()) {
    std::ofstream file(opt.decode_out, std::ios::binary);
    file << DecodeMapJson(scheme.decode);
    if (!file) s = absl::UnavailableError(absl::StrCat("cannot write ", opt.decode_out));
  }
  if (!s.ok()) {
    std::cerr << s << "\n";
    return kExitFailure;
  }
  return 0;
}

int CmdRun(Options opt) {
  if (opt.trials < 1) throw UsageError("--trials must be at least 1");
  if (!IsPrime(opt.p) || opt.p > 256) {
    throw UsageError("--p must be a prime no larger than 256");
  }
  HarnessConfig config;
  config.components = ParseComponents(opt);
  config.modulus = opt.p;
  config.trials = opt.trials;
  config.seed = ResolveSeed(opt);
  config.transport = opt.threaded ? TransportKind::kThreaded : TransportKind::kInline;
  absl::StatusOr<HarnessReport> report = RunHarness(config);
  if (!report.ok()) {
    std::cerr << report.status() << "\n";
    return kExitFailure;
  }
  absl::Status s = Emit(opt, HarnessReportJson(*report));
  if (!s.ok()) {
    std::cerr << s << "\n";
    return kExitFailure;
  }
  return report->failures == 0 ? 0 : kExitFailure;
}

int CmdVerify(Options opt) {
  if (opt.m < 1 || opt.n < 1) throw UsageError("verify needs --m and --n");
  if (opt.samples < 1) throw UsageError("--samples must be positive");
  const uint64_t seed = ResolveSeed(opt);
  const std::vector<CornerPoint> corners = OrUsage(EnumerateCorners(opt.m, opt.n));
  const PrimeField field = OrUsage(PrimeField::Create(opt.p));
  std::string text;
  bool all_pass = true;
  auto emit = [&](VerifyRecord record) {
    all_pass = all_pass && record.pass;
    text += VerifyRecordJsonLine(record);
  };
  auto name = [](const SchemeSpec& spec) {
    return absl::StrCat("(", absl::StrJoin(spec.sequence(), ","), ")");
  };
  for (size_t c = 0; c < corners.size(); ++c) {
    const SchemeSpec& spec = corners[c].spec;
    const PrivacyShapeResult shape = OrUsage(CheckPrivacyShape(spec));
    VerifyRecord shape_record{"privacy_shape", name(spec), shape.pass, {}};
    if (shape.witness) {
      shape_record.details.push_back(
          {"witness", absl::StrCat("db", shape.witness->database + 1, " round ",
                                   shape.witness->shape.round, " subset {",
                                   absl::StrJoin(shape.witness->shape.messages, ","),
                                   "}")});
    }
    emit(std::move(shape_record));

    DistributionOptions dist;
    dist.samples = opt.samples;
    dist.seed = DeriveSeed(seed, c);
    const DistributionResult d = OrUsage(CheckQueryDistribution(spec, dist));
    emit({"query_distribution", name(spec),
          d.verdict != DistributionVerdict::kFail,
          {{"verdict", VerdictName(d.verdict)},
           {"tv_estimate", absl::StrCat(d.tv_estimate)},
           {"noise_floor", absl::StrCat(d.noise_floor)},
           {"samples", absl::StrCat(d.samples)},
           {"worst_feature", d.worst_feature}}});

    const uint64_t trial_seed = DeriveSeed(seed, 1000 + c);
    const Scheme scheme =
        Shuffle(OrUsage(Synthesize(spec, 1)), DeriveSeed(trial_seed, 0));
    auto store = std::make_shared<const MessageStore>(OrUsage(
        MakeStore(opt.m, scheme.plan.length, opt.p, DeriveSeed(trial_seed, 1))));
    const std::vector<Permutation> perms =
        RandomPermutations(opt.m, scheme.plan.length, DeriveSeed(trial_seed, 2));
    auto transport = OrUsage(MakeTransport(TransportKind::kInline, store, opt.n));
    const RetrievalResult retrieved =
        OrUsage(Retrieve(scheme, perms, field, *transport));
    const auto wire = OrUsage(RealizeQueries(scheme.plan, perms));
    auto oracle_transport = OrUsage(MakeTransport(TransportKind::kInline, store, opt.n));
    const std::vector<AnswerString> answers = OrUsage(oracle_transport->Exchange(wire));
    const OracleResult oracle =
        OrUsage(BruteForceOracle(scheme.plan, answers, 1, field));
    const std::vector<FieldSymbol> oracle_decoded =
        oracle.decodable ? OrUsage(Unpermute(oracle.desired_symbols, perms[0]))
                         : std::vector<FieldSymbol>{};
    emit({"oracle_agreement", name(spec),
          oracle.decodable && oracle_decoded == retrieved.decoded,
          {{"oracle_rank", absl::StrCat(oracle.rank)},
           {"unrecoverable", absl::StrCat(oracle.unrecoverable.size())}}});

    const BoundResult bound = OrUsage(UpperBound(corners[c].tau, opt.m));
    emit({"bound_sandwich", name(spec), corners[c].rate <= bound.value,
          {{"rate", FormatRational(corners[c].rate)},
           {"upper_bound", FormatRational(bound.value)}}});
  }
  if ((opt.m == 2 || opt.m == 3) && opt.n <= 6) {
    const CapacityMatchReport report =
        OrUsage(CheckCapacityMatch(opt.m, opt.n, 50, seed));
    VerifyRecord record{"capacity_match", absl::StrCat("M=", opt.m, " N=", opt.n),
                        report.pass(),
                        {{"corners", absl::StrCat(report.corners_checked)},
                         {"grid", absl::StrCat(report.grid_checked)}}};
    if (!report.pass()) record.details.push_back({"first_mismatch", report.mismatches[0]});
    emit(std::move(record));
  }
  absl::Status s = Emit(opt, text);
  if (!s.ok()) {
    std::cerr << s << "\n";
    return kExitFailure;
  }
  return all_pass ? 0 : kExitFailure;
}

int CmdSweep(Options opt) {
  if (opt.format.empty()) opt.format = "csv";
  RequireFormat(opt, {"csv"});
  if (opt.m < 1 || opt.n < 1) throw UsageError("sweep needs --m and --n");
  if (opt.grid < 2) throw UsageError("--grid must be at least 2");
  const std::vector<SweepRow> rows = OrUsage(Sweep(opt.m, opt.n, opt.grid));
  absl::Status s = Emit(opt, SweepCsv(rows, opt.n));
  if (!s.ok()) {
    std::cerr << s << "\n";
    return kExitFailure;
  }
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"PIR under asymmetric traffic constraints"};
  app.require_subcommand(1);
  Options opt;
  uint64_t seed_value = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", opt.out, "Write output to this file");
    cmd->add_option("--format", opt.format, "json, csv or table");
  };
  auto add_target = [&](CLI::App* cmd) {
    cmd->add_option("--spec", opt.spec, "Corner sequence, e.g. 1,2,2");
    cmd->add_option("--tau", opt.tau, "Traffic ratios as fractions, e.g. 4/7,3/7");
    cmd->add_option("--lambda", opt.lambda, "Ratios relative to database 1, e.g. 1,3/4");
  };
  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed_value, "Seed (falls back to PIR_ASYM_SEED)");
  };

  CLI::App* corners = app.add_subcommand("corners", "List all corner points");
  corners->add_option("--m", opt.m, "Messages")->required();
  corners->add_option("--n", opt.n, "Databases")->required();
  add_common(corners);

  CLI::App* bound = app.add_subcommand("bound", "Evaluate the converse bound");
  bound->add_option("--m", opt.m, "Messages")->required();
  bound->add_option("--tau", opt.tau, "Traffic ratios as fractions");
  bound->add_option("--lambda", opt.lambda, "Ratios relative to database 1");
  bound->add_flag("--exhaustive", opt.exhaustive, "Minimize over all sequences");
  add_common(bound);

  CLI::App* synth = app.add_subcommand("synth", "Synthesize a query plan");
  synth->add_option("--m", opt.m, "Messages");
  synth->add_option("--n", opt.n, "Databases");
  synth->add_option("--p", opt.p, "Field size recorded in the plan header");
  synth->add_option("--desired", opt.desired, "Desired message (1-based)");
  synth->add_option("--decode-out", opt.decode_out, "Write the decode map here");
  add_target(synth);
  add_seed(synth);
  add_common(synth);

  CLI::App* run = app.add_subcommand("run", "Simulate retrieval end to end");
  run->add_option("--m", opt.m, "Messages");
  run->add_option("--n", opt.n, "Databases");
  run->add_option("--p", opt.p, "Prime field size");
  run->add_option("--trials", opt.trials, "Random trials");
  run->add_flag("--threaded", opt.threaded, "One thread per database");
  add_target(run);
  add_seed(run);
  run->add_option("--out", opt.out, "Write the report to this file");

  CLI::App* verify = app.add_subcommand("verify", "Run privacy and decodability checks");
  verify->add_option("--m", opt.m, "Messages")->required();
  verify->add_option("--n", opt.n, "Databases")->required();
  verify->add_option("--p", opt.p, "Prime field size");
  verify->add_option("--samples", opt.samples, "Samples for the distribution check");
  add_seed(verify);
  verify->add_option("--out", opt.out, "Write JSON lines to this file");

  CLI::App* sweep = app.add_subcommand("sweep", "Bound and achievable rate on a grid");
  sweep->add_option("--m", opt.m, "Messages")->required();
  sweep->add_option("--n", opt.n, "Databases")->required();
  sweep->add_option("--grid", opt.grid, "Points per simplex direction");
  add_common(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  for (CLI::App* cmd : {synth, run, verify}) {
    if (cmd->parsed() && cmd->count("--seed") > 0) opt.seed = seed_value;
  }

  try {
    if (corners->parsed()) return CmdCorners(opt);
    if (bound->parsed()) return CmdBound(opt);
    if (synth->parsed()) return CmdSynth(opt);
    if (run->parsed()) return CmdRun(opt);
    if (verify->parsed()) return CmdVerify(opt);
    if (sweep->parsed()) return CmdSweep(opt);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace
}  // namespace pir_asym

int main(int argc, char** argv) { return pir_asym::Main(argc, argv); }
