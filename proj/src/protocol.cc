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

#include "pir_asym/protocol.h"

#include <algorithm>
#include <condition_variable>
#include <deque>
#include <future>
#include <map>
#include <mutex>
#include <thread>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "pir_asym/status_macros.h"

namespace pir_asym {

DatabaseNode::DatabaseNode(int id, std::shared_ptr<const MessageStore> store)
    : id_(id),
      store_(std::move(store)),
      field_(PrimeField::Create(store_->modulus()).value()) {}

absl::StatusOr<AnswerString> DatabaseNode::Answer(
    std::span<const WireQuery> queries) {
  AnswerString answer{id_, {}};
  answer.symbols.reserve(queries.size());
  for (const WireQuery& query : queries) {
    FieldSymbol sum{0};
    for (const Term& term : query) {
      if (term.message < 1 || term.message > store_->num_messages() ||
          term.symbol < 1 || term.symbol > store_->length()) {
        return absl::OutOfRangeError(absl::StrCat(
            "database ", id_ + 1, " asked for (", term.message, ", ",
            term.symbol, ") outside the store"));
      }
      sum = field_.Add(sum, store_->Symbol(term.message, term.symbol));
    }
    answer.symbols.push_back(sum);
  }
  traffic_count_ += static_cast<int64_t>(answer.symbols.size());
  return answer;
}

namespace {

class InlineTransport : public Transport {
 public:
  InlineTransport(std::shared_ptr<const MessageStore> store, int num_databases) {
    for (int db = 0; db < num_databases; ++db) {
      nodes_.push_back(std::make_unique<DatabaseNode>(db, store));
    }
  }

  absl::StatusOr<std::vector<AnswerString>> Exchange(
      const std::vector<std::vector<WireQuery>>& queries) override {
    if (queries.size() != nodes_.size()) {
      return absl::InvalidArgumentError("one query list per database expected");
    }
    std::vector<AnswerString> answers;
    for (size_t db = 0; db < nodes_.size(); ++db) {
      PIR_ASYM_ASSIGN_OR_RETURN(AnswerString answer,
                                nodes_[db]->Answer(queries[db]));
      answers.push_back(std::move(answer));
    }
    return answers;
  }

  std::vector<int64_t> TrafficCounts() const override {
    std::vector<int64_t> counts;
    for (const auto& node : nodes_) counts.push_back(node->traffic_count());
    return counts;
  }

 private:
  std::vector<std::unique_ptr<DatabaseNode>> nodes_;
};

template <typename T>
class Channel {
 public:
  void Send(T value) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      queue_.push_back(std::move(value));
    }
    cv_.notify_one();
  }

  void Close() {
    {
      std::lock_guard<std::mutex> lock(mu_);
      closed_ = true;
    }
    cv_.notify_all();
  }

  // Empty once the channel is closed and drained.
  std::optional<T> Receive() {
    std::unique_lock<std::mutex> lock(mu_);
    cv_.wait(lock, [&] { return closed_ || !queue_.empty(); });
    if (queue_.empty()) return std::nullopt;
    T value = std::move(queue_.front());
    queue_.pop_front();
    return value;
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<T> queue_;
  bool closed_ = false;
};

// A database that only ever sees its own inbox.
class DatabaseActor {
 public:
  struct Request {
    std::vector<WireQuery> queries;
    std::promise<absl::StatusOr<AnswerString>> reply;
  };

  DatabaseActor(int id, std::shared_ptr<const MessageStore> store)
      : node_(id, std::move(store)), thread_([this] { Loop(); }) {}

  ~DatabaseActor() {
    inbox_.Close();
    thread_.join();
  }

  std::future<absl::StatusOr<AnswerString>> Ask(std::vector<WireQuery> queries) {
    Request request{std::move(queries), {}};
    auto future = request.reply.get_future();
    inbox_.Send(std::move(request));
    return future;
  }

  int64_t traffic_count() const { return node_.traffic_count(); }

 private:
  void Loop() {
    while (std::optional<Request> request = inbox_.Receive()) {
      request->reply.set_value(node_.Answer(request->queries));
    }
  }

  DatabaseNode node_;
  Channel<Request> inbox_;
  std::thread thread_;
};

class ThreadedTransport : public Transport {
 public:
  ThreadedTransport(std::shared_ptr<const MessageStore> store,
                    int num_databases) {
    for (int db = 0; db < num_databases; ++db) {
      actors_.push_back(std::make_unique<DatabaseActor>(db, store));
    }
  }

  absl::StatusOr<std::vector<AnswerString>> Exchange(
      const std::vector<std::vector<WireQuery>>& queries) override {
    if (queries.size() != actors_.size()) {
      return absl::InvalidArgumentError("one query list per database expected");
    }
    std::vector<std::future<absl::StatusOr<AnswerString>>> pending;
    for (size_t db = 0; db < actors_.size(); ++db) {
      pending.push_back(actors_[db]->Ask(queries[db]));
    }
    std::vector<AnswerString> answers;
    absl::Status first_error;
    for (auto& future : pending) {
      absl::StatusOr<AnswerString> answer = future.get();
      if (!answer.ok()) {
        if (first_error.ok()) first_error = answer.status();
        continue;
      }
      answers.push_back(*std::move(answer));
    }
    if (!first_error.ok()) return first_error;
    return answers;
  }

  std::vector<int64_t> TrafficCounts() const override {
    std::vector<int64_t> counts;
    for (const auto& actor : actors_) counts.push_back(actor->traffic_count());
    return counts;
  }

 private:
  std::vector<std::unique_ptr<DatabaseActor>> actors_;
};

}  // namespace

absl::StatusOr<std::unique_ptr<Transport>> MakeTransport(
    TransportKind kind, std::shared_ptr<const MessageStore> store,
    int num_databases) {
  if (store == nullptr || num_databases < 1) {
    return absl::InvalidArgumentError("transport needs a store and N >= 1");
  }
  if (kind == TransportKind::kThreaded) {
    return std::make_unique<ThreadedTransport>(std::move(store), num_databases);
  }
  return std::make_unique<InlineTransport>(std::move(store), num_databases);
}

absl::StatusOr<std::vector<std::vector<WireQuery>>> RealizeQueries(
    const QueryPlan& plan, std::span<const Permutation> perms) {
  if (static_cast<int>(perms.size()) != plan.num_messages) {
    return absl::InvalidArgumentError(absl::StrCat(
        "need ", plan.num_messages, " permutations, got ", perms.size()));
  }
  std::vector<std::vector<WireQuery>> wire(plan.databases.size());
  for (size_t db = 0; db < plan.databases.size(); ++db) {
    for (const Query& query : plan.databases[db]) {
      WireQuery realized;
      for (const Term& term : query.terms) {
        const Permutation& perm = perms[static_cast<size_t>(term.message - 1)];
        if (term.symbol < 1 || term.symbol > perm.size()) {
          return absl::OutOfRangeError(absl::StrCat(
              "symbol ", term.symbol, " of message ", term.message,
              " exceeds permutation length ", perm.size()));
        }
        realized.push_back({term.message, perm(term.symbol)});
      }
      wire[db].push_back(std::move(realized));
    }
  }
  return wire;
}

absl::Status ValidateDecodeMap(const QueryPlan& plan, const DecodeMap& decode) {
  const int d = decode.desired;
  if (d < 1 || d > plan.num_messages) {
    return absl::InvalidArgumentError("decode map names no valid message");
  }
  auto lookup = [&](const QueryRef& ref) -> absl::StatusOr<const Query*> {
    if (ref.database < 0 || ref.database >= plan.num_databases ||
        ref.position < 0 ||
        ref.position >= static_cast<int64_t>(
                            plan.databases[static_cast<size_t>(ref.database)].size())) {
      return absl::FailedPreconditionError(absl::StrCat(
          "decode map references unqueried value at database ",
          ref.database + 1, " position ", ref.position));
    }
    return &plan.databases[static_cast<size_t>(ref.database)]
                          [static_cast<size_t>(ref.position)];
  };
  std::vector<bool> covered(static_cast<size_t>(plan.length) + 1, false);
  for (const DecodeEntry& entry : decode.entries) {
    if (entry.desired_symbol < 1 || entry.desired_symbol > plan.length ||
        covered[static_cast<size_t>(entry.desired_symbol)]) {
      return absl::FailedPreconditionError(absl::StrCat(
          "desired symbol ", entry.desired_symbol, " is missing or repeated"));
    }
    covered[static_cast<size_t>(entry.desired_symbol)] = true;
    PIR_ASYM_ASSIGN_OR_RETURN(const Query* target, lookup(entry.target));
    std::vector<Term> remainder;
    bool found = false;
    for (const Term& t : target->terms) {
      if (t.message == d && t.symbol == entry.desired_symbol) {
        found = true;
      } else {
        remainder.push_back(t);
      }
    }
    if (!found) {
      return absl::FailedPreconditionError(absl::StrCat(
          "decode target for desired symbol ", entry.desired_symbol,
          " does not carry it"));
    }
    std::vector<Term> cancelled;
    for (const QueryRef& ref : entry.side_info) {
      PIR_ASYM_ASSIGN_OR_RETURN(const Query* side, lookup(ref));
      cancelled.insert(cancelled.end(), side->terms.begin(), side->terms.end());
    }
    std::sort(remainder.begin(), remainder.end());
    std::sort(cancelled.begin(), cancelled.end());
    if (remainder != cancelled) {
      return absl::FailedPreconditionError(absl::StrCat(
          "side information does not cancel the interference on desired symbol ",
          entry.desired_symbol));
    }
    for (const Term& t : cancelled) {
      if (t.message == d) {
        return absl::FailedPreconditionError(
            "side information contains desired symbols");
      }
    }
  }
  for (int64_t s = 1; s <= plan.length; ++s) {
    if (!covered[static_cast<size_t>(s)]) {
      return absl::FailedPreconditionError(
          absl::StrCat("no decode entry for desired symbol ", s));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<RetrievalResult> Retrieve(const Scheme& scheme,
                                         std::span<const Permutation> perms,
                                         const PrimeField& field,
                                         Transport& transport) {
  const QueryPlan& plan = scheme.plan;
  PIR_ASYM_RETURN_IF_ERROR(ValidatePlan(plan));
  PIR_ASYM_RETURN_IF_ERROR(ValidateDecodeMap(plan, scheme.decode));
  PIR_ASYM_ASSIGN_OR_RETURN(auto wire, RealizeQueries(plan, perms));
  PIR_ASYM_ASSIGN_OR_RETURN(std::vector<AnswerString> answers,
                            transport.Exchange(wire));

  RetrievalResult result;
  for (size_t db = 0; db < answers.size(); ++db) {
    if (answers[db].symbols.size() != plan.databases[db].size()) {
      return absl::DataLossError(
          absl::StrCat("database ", db + 1, " answered ",
                       answers[db].symbols.size(), " of ",
                       plan.databases[db].size(), " queries"));
    }
    result.per_db_traffic.push_back(
        static_cast<int64_t>(answers[db].symbols.size()));
    result.total_download += result.per_db_traffic.back();
  }
  auto value = [&](const QueryRef& ref) {
    return answers[static_cast<size_t>(ref.database)]
        .symbols[static_cast<size_t>(ref.position)];
  };
  std::vector<FieldSymbol> permuted(static_cast<size_t>(plan.length));
  for (const DecodeEntry& entry : scheme.decode.entries) {
    FieldSymbol symbol = value(entry.target);
    for (const QueryRef& ref : entry.side_info) {
      symbol = field.Sub(symbol, value(ref));
    }
    permuted[static_cast<size_t>(entry.desired_symbol - 1)] = symbol;
  }
  PIR_ASYM_ASSIGN_OR_RETURN(
      result.decoded,
      Unpermute(permuted, perms[static_cast<size_t>(scheme.decode.desired - 1)]));
  if (result.total_download == 0) {
    return absl::InternalError("plan downloads nothing");
  }
  result.achieved_rate = Rational(plan.length, result.total_download);
  return result;
}

absl::StatusOr<HarnessReport> RunHarness(const HarnessConfig& config) {
  if (config.trials < 1) {
    return absl::InvalidArgumentError("trials must be at least 1");
  }
  if (config.components.empty()) {
    return absl::InvalidArgumentError("harness needs at least one component");
  }
  PIR_ASYM_ASSIGN_OR_RETURN(PrimeField field, PrimeField::Create(config.modulus));
  const int m = config.components.front().first.num_messages();
  const int n = config.components.front().first.num_databases();

  std::vector<int64_t> expected_traffic(static_cast<size_t>(n), 0);
  int64_t expected_length = 0;
  for (const auto& [spec, repetitions] : config.components) {
    if (spec.num_messages() != m || spec.num_databases() != n) {
      return absl::InvalidArgumentError("components disagree on M or N");
    }
    PIR_ASYM_ASSIGN_OR_RETURN(CornerPoint corner, ComputeCornerPoint(spec));
    for (int db = 0; db < n; ++db) {
      expected_traffic[static_cast<size_t>(db)] +=
          repetitions * corner.downloads[static_cast<size_t>(db)];
    }
    expected_length += repetitions * corner.desired_symbols;
  }
  int64_t expected_total = 0;
  for (int64_t t : expected_traffic) expected_total += t;
  if (expected_total == 0) {
    return absl::InvalidArgumentError("components download nothing");
  }

  HarnessReport report;
  for (int64_t t : expected_traffic) {
    report.tau_expected.emplace_back(t, expected_total);
  }
  report.rate_expected = Rational(expected_length, expected_total);

  std::map<int, Scheme> by_desired;
  auto fail = [&](uint64_t seed, std::string why) {
    ++report.failures;
    report.failing_seed = seed;
    report.failure = std::move(why);
    return report;
  };
  for (int trial = 0; trial < config.trials; ++trial) {
    const uint64_t trial_seed = DeriveSeed(config.seed, static_cast<uint64_t>(trial));
    ++report.trials;
    Prng prng(DeriveSeed(trial_seed, 0));
    const int desired = 1 + static_cast<int>(prng.Uniform(static_cast<uint64_t>(m)));
    auto it = by_desired.find(desired);
    if (it == by_desired.end()) {
      PIR_ASYM_ASSIGN_OR_RETURN(Scheme scheme,
                                SynthesizeMixture(config.components, desired));
      it = by_desired.emplace(desired, std::move(scheme)).first;
    }
    const Scheme shuffled = Shuffle(it->second, DeriveSeed(trial_seed, 1));
    const int64_t length = shuffled.plan.length;
    PIR_ASYM_ASSIGN_OR_RETURN(
        MessageStore store,
        MakeStore(m, length, config.modulus, DeriveSeed(trial_seed, 2)));
    auto shared_store = std::make_shared<const MessageStore>(std::move(store));
    const std::vector<Permutation> perms =
        RandomPermutations(m, length, DeriveSeed(trial_seed, 3));
    PIR_ASYM_ASSIGN_OR_RETURN(std::unique_ptr<Transport> transport,
                              MakeTransport(config.transport, shared_store, n));

    absl::StatusOr<RetrievalResult> result =
        Retrieve(shuffled, perms, field, *transport);
    if (!result.ok()) return fail(trial_seed, result.status().ToString());
    const std::span<const FieldSymbol> truth = shared_store->Message(desired);
    if (!std::equal(truth.begin(), truth.end(), result->decoded.begin(),
                    result->decoded.end())) {
      return fail(trial_seed, absl::StrCat("decoded W_", desired, " is wrong"));
    }
    if (result->per_db_traffic != expected_traffic ||
        transport->TrafficCounts() != expected_traffic) {
      return fail(trial_seed,
                  absl::StrCat("traffic ", absl::StrJoin(result->per_db_traffic, ","),
                               " differs from expected ",
                               absl::StrJoin(expected_traffic, ",")));
    }
    if (result->achieved_rate != report.rate_expected) {
      return fail(trial_seed, "achieved rate differs from the stage calculus");
    }
    report.per_db_traffic = result->per_db_traffic;
    report.tau_measured.clear();
    for (int64_t t : result->per_db_traffic) {
      report.tau_measured.emplace_back(t, result->total_download);
    }
    report.rate_measured = result->achieved_rate;
  }
  return report;
}

}  // namespace pir_asym
