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

#ifndef PIR_ASYM_FIELD_H_
#define PIR_ASYM_FIELD_H_

#include <compare>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace pir_asym {

// One element of GF(p).
struct FieldSymbol {
  uint32_t value = 0;
  friend auto operator<=>(const FieldSymbol&, const FieldSymbol&) = default;
};

// Arithmetic in GF(p) for a prime p < 2^31.
class PrimeField {
 public:
  static absl::StatusOr<PrimeField> Create(uint32_t modulus);

  uint32_t modulus() const { return modulus_; }

  FieldSymbol Add(FieldSymbol a, FieldSymbol b) const;
  FieldSymbol Sub(FieldSymbol a, FieldSymbol b) const;
  FieldSymbol Neg(FieldSymbol a) const;
  FieldSymbol Mul(FieldSymbol a, FieldSymbol b) const;
  // Requires a != 0.
  FieldSymbol Inverse(FieldSymbol a) const;

 private:
  explicit PrimeField(uint32_t modulus) : modulus_(modulus) {}
  uint32_t modulus_;
};

bool IsPrime(uint32_t value);

// Deterministic generator used for stores, permutations and shuffles. Built on
// mt19937_64 with its own bounded sampling so results are identical across
// standard library implementations.
class Prng {
 public:
  explicit Prng(uint64_t seed) : engine_(seed) {}

  uint64_t Next() { return engine_(); }
  // Uniform in [0, bound); bound must be positive.
  uint64_t Uniform(uint64_t bound);

  template <typename T>
  void Shuffle(std::span<T> values) {
    for (size_t i = values.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(Uniform(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer over (seed, stream); used to derive independent
// per-trial and per-database seeds.
uint64_t DeriveSeed(uint64_t seed, uint64_t stream);

// M messages of L symbols each, identical at every database. Message and
// symbol indices are 1-based.
class MessageStore {
 public:
  static absl::StatusOr<MessageStore> FromSymbols(
      int num_messages, int64_t length, uint32_t modulus,
      std::vector<FieldSymbol> row_major);

  int num_messages() const { return num_messages_; }
  int64_t length() const { return length_; }
  uint32_t modulus() const { return modulus_; }

  FieldSymbol Symbol(int message, int64_t index) const {
    return symbols_[static_cast<size_t>((message - 1) * length_ + index - 1)];
  }
  std::span<const FieldSymbol> Message(int message) const {
    return std::span<const FieldSymbol>(symbols_).subspan(
        static_cast<size_t>((message - 1) * length_),
        static_cast<size_t>(length_));
  }
  std::span<const FieldSymbol> symbols() const { return symbols_; }

  friend bool operator==(const MessageStore&, const MessageStore&) = default;

 private:
  MessageStore(int num_messages, int64_t length, uint32_t modulus,
               std::vector<FieldSymbol> symbols)
      : num_messages_(num_messages),
        length_(length),
        modulus_(modulus),
        symbols_(std::move(symbols)) {}

  int num_messages_;
  int64_t length_;
  uint32_t modulus_;
  std::vector<FieldSymbol> symbols_;
};

// M x L symbols drawn uniformly from GF(p), reproducible from `seed`.
absl::StatusOr<MessageStore> MakeStore(int num_messages, int64_t length,
                                       uint32_t modulus, uint64_t seed);

// Flat binary form: M, L, p as little-endian uint32, then one byte per symbol
// in row-major order. Only defined for p <= 256.
absl::StatusOr<std::string> EncodeStore(const MessageStore& store);
absl::StatusOr<MessageStore> DecodeStore(absl::string_view bytes);
absl::Status WriteStoreFile(const MessageStore& store, const std::string& path);
absl::StatusOr<MessageStore> ReadStoreFile(const std::string& path);

// Bijection on {1, ..., L}. maps(i) is the store position read for permuted
// position i, i.e. x(i) = W(maps(i)).
class Permutation {
 public:
  static Permutation Identity(int64_t length);
  static Permutation Random(int64_t length, uint64_t seed);
  static absl::StatusOr<Permutation> FromMapping(std::vector<int64_t> mapping);

  int64_t size() const { return static_cast<int64_t>(mapping_.size()); }
  int64_t operator()(int64_t index) const {
    return mapping_[static_cast<size_t>(index - 1)];
  }
  Permutation Inverse() const;
  std::span<const int64_t> mapping() const { return mapping_; }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  explicit Permutation(std::vector<int64_t> mapping)
      : mapping_(std::move(mapping)) {}
  std::vector<int64_t> mapping_;
};

// One independent permutation per message, derived from `seed`.
std::vector<Permutation> RandomPermutations(int num_messages, int64_t length,
                                            uint64_t seed);

// x_m(i) = W_m(pi_m(i)) for i = 1..L.
absl::StatusOr<std::vector<FieldSymbol>> Permute(
    int message, const MessageStore& store,
    std::span<const Permutation> perms);

// Recovers W from x = W o pi.
absl::StatusOr<std::vector<FieldSymbol>> Unpermute(
    std::span<const FieldSymbol> permuted, const Permutation& perm);

}  // namespace pir_asym

#endif  // PIR_ASYM_FIELD_H_
