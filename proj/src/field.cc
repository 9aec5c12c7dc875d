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

#include "pir_asym/field.h"

#include <fstream>
#include <iterator>
#include <limits>
#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace pir_asym {

absl::StatusOr<PrimeField> PrimeField::Create(uint32_t modulus) {
  if (modulus >= (1u << 31) || !IsPrime(modulus)) {
    return absl::InvalidArgumentError(
        absl::StrCat("field modulus ", modulus, " is not a prime below 2^31"));
  }
  return PrimeField(modulus);
}

FieldSymbol PrimeField::Add(FieldSymbol a, FieldSymbol b) const {
  const uint32_t sum = a.value + b.value;
  return {sum >= modulus_ ? sum - modulus_ : sum};
}

FieldSymbol PrimeField::Sub(FieldSymbol a, FieldSymbol b) const {
  return {a.value >= b.value ? a.value - b.value
                             : a.value + modulus_ - b.value};
}

FieldSymbol PrimeField::Neg(FieldSymbol a) const {
  return {a.value == 0 ? 0 : modulus_ - a.value};
}

FieldSymbol PrimeField::Mul(FieldSymbol a, FieldSymbol b) const {
  return {static_cast<uint32_t>(static_cast<uint64_t>(a.value) * b.value %
                                modulus_)};
}

FieldSymbol PrimeField::Inverse(FieldSymbol a) const {
  // Fermat: a^(p-2).
  uint64_t result = 1;
  uint64_t base = a.value;
  uint32_t exponent = modulus_ - 2;
  while (exponent > 0) {
    if (exponent & 1) result = result * base % modulus_;
    base = base * base % modulus_;
    exponent >>= 1;
  }
  return {static_cast<uint32_t>(result)};
}

bool IsPrime(uint32_t value) {
  if (value < 2) return false;
  for (uint64_t d = 2; d * d <= value; ++d) {
    if (value % d == 0) return false;
  }
  return true;
}

uint64_t Prng::Uniform(uint64_t bound) {
  // Rejection sampling on the top of the range keeps the draw unbiased.
  const uint64_t limit =
      std::numeric_limits<uint64_t>::max() -
      std::numeric_limits<uint64_t>::max() % bound;
  uint64_t draw;
  do {
    draw = engine_();
  } while (draw >= limit);
  return draw % bound;
}

uint64_t DeriveSeed(uint64_t seed, uint64_t stream) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

absl::StatusOr<MessageStore> MessageStore::FromSymbols(
    int num_messages, int64_t length, uint32_t modulus,
    std::vector<FieldSymbol> row_major) {
  if (num_messages < 1 || length < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("store needs M >= 1 and L >= 1, got M=", num_messages,
                     " L=", length));
  }
  if (!IsPrime(modulus)) {
    return absl::InvalidArgumentError(
        absl::StrCat("field modulus ", modulus, " is not prime"));
  }
  if (static_cast<int64_t>(row_major.size()) != num_messages * length) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected ", num_messages * length, " symbols, got ",
                     row_major.size()));
  }
  for (FieldSymbol s : row_major) {
    if (s.value >= modulus) {
      return absl::InvalidArgumentError(
          absl::StrCat("symbol ", s.value, " outside GF(", modulus, ")"));
    }
  }
  return MessageStore(num_messages, length, modulus, std::move(row_major));
}

absl::StatusOr<MessageStore> MakeStore(int num_messages, int64_t length,
                                       uint32_t modulus, uint64_t seed) {
  if (num_messages < 1 || length < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("store needs M >= 1 and L >= 1, got M=", num_messages,
                     " L=", length));
  }
  if (!IsPrime(modulus)) {
    return absl::InvalidArgumentError(
        absl::StrCat("field modulus ", modulus, " is not prime"));
  }
  Prng prng(seed);
  std::vector<FieldSymbol> symbols(
      static_cast<size_t>(num_messages * length));
  for (FieldSymbol& s : symbols) {
    s.value = static_cast<uint32_t>(prng.Uniform(modulus));
  }
  return MessageStore::FromSymbols(num_messages, length, modulus,
                                   std::move(symbols));
}

namespace {

void PutU32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

uint32_t GetU32(absl::string_view bytes, size_t offset) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<uint32_t>(static_cast<unsigned char>(bytes[offset + i]))
         << (8 * i);
  }
  return v;
}

}  // namespace

absl::StatusOr<std::string> EncodeStore(const MessageStore& store) {
  if (store.modulus() > 256) {
    return absl::InvalidArgumentError(
        "binary store format holds one byte per symbol (p <= 256)");
  }
  if (store.length() > std::numeric_limits<uint32_t>::max()) {
    return absl::InvalidArgumentError("message length exceeds 32 bits");
  }
  std::string out;
  out.reserve(12 + store.symbols().size());
  PutU32(out, static_cast<uint32_t>(store.num_messages()));
  PutU32(out, static_cast<uint32_t>(store.length()));
  PutU32(out, store.modulus());
  for (FieldSymbol s : store.symbols()) {
    out.push_back(static_cast<char>(s.value));
  }
  return out;
}

absl::StatusOr<MessageStore> DecodeStore(absl::string_view bytes) {
  if (bytes.size() < 12) {
    return absl::InvalidArgumentError("store file shorter than its header");
  }
  const uint32_t m = GetU32(bytes, 0);
  const uint32_t l = GetU32(bytes, 4);
  const uint32_t p = GetU32(bytes, 8);
  if (p > 256) {
    return absl::InvalidArgumentError(
        absl::StrCat("binary store declares p=", p, " > 256"));
  }
  const uint64_t expected = static_cast<uint64_t>(m) * l;
  if (bytes.size() - 12 != expected) {
    return absl::InvalidArgumentError(
        absl::StrCat("store body has ", bytes.size() - 12, " bytes, expected ",
                     expected));
  }
  std::vector<FieldSymbol> symbols;
  symbols.reserve(expected);
  for (size_t i = 12; i < bytes.size(); ++i) {
    symbols.push_back({static_cast<unsigned char>(bytes[i])});
  }
  return MessageStore::FromSymbols(static_cast<int>(m), l, p,
                                   std::move(symbols));
}

absl::Status WriteStoreFile(const MessageStore& store,
                            const std::string& path) {
  absl::StatusOr<std::string> bytes = EncodeStore(store);
  if (!bytes.ok()) return bytes.status();
  std::ofstream out(path, std::ios::binary);
  if (!out) return absl::UnavailableError(absl::StrCat("cannot open ", path));
  out.write(bytes->data(), static_cast<std::streamsize>(bytes->size()));
  if (!out) return absl::DataLossError(absl::StrCat("short write to ", path));
  return absl::OkStatus();
}

absl::StatusOr<MessageStore> ReadStoreFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return DecodeStore(bytes);
}

Permutation Permutation::Identity(int64_t length) {
  std::vector<int64_t> mapping(static_cast<size_t>(length));
  std::iota(mapping.begin(), mapping.end(), 1);
  return Permutation(std::move(mapping));
}

Permutation Permutation::Random(int64_t length, uint64_t seed) {
  std::vector<int64_t> mapping(static_cast<size_t>(length));
  std::iota(mapping.begin(), mapping.end(), 1);
  Prng prng(seed);
  prng.Shuffle(std::span<int64_t>(mapping));
  return Permutation(std::move(mapping));
}

absl::StatusOr<Permutation> Permutation::FromMapping(
    std::vector<int64_t> mapping) {
  std::vector<bool> seen(mapping.size(), false);
  for (int64_t v : mapping) {
    if (v < 1 || v > static_cast<int64_t>(mapping.size()) ||
        seen[static_cast<size_t>(v - 1)]) {
      return absl::InvalidArgumentError("mapping is not a bijection on 1..L");
    }
    seen[static_cast<size_t>(v - 1)] = true;
  }
  return Permutation(std::move(mapping));
}

Permutation Permutation::Inverse() const {
  std::vector<int64_t> inverse(mapping_.size());
  for (size_t i = 0; i < mapping_.size(); ++i) {
    inverse[static_cast<size_t>(mapping_[i] - 1)] = static_cast<int64_t>(i + 1);
  }
  return Permutation(std::move(inverse));
}

std::vector<Permutation> RandomPermutations(int num_messages, int64_t length,
                                            uint64_t seed) {
  std::vector<Permutation> perms;
  perms.reserve(static_cast<size_t>(num_messages));
  for (int m = 1; m <= num_messages; ++m) {
    perms.push_back(Permutation::Random(length, DeriveSeed(seed, m)));
  }
  return perms;
}

absl::StatusOr<std::vector<FieldSymbol>> Permute(
    int message, const MessageStore& store,
    std::span<const Permutation> perms) {
  if (message < 1 || message > store.num_messages()) {
    return absl::OutOfRangeError(
        absl::StrCat("message index ", message, " outside 1..",
                     store.num_messages()));
  }
  if (static_cast<int>(perms.size()) != store.num_messages()) {
    return absl::InvalidArgumentError(
        absl::StrCat("need one permutation per message, got ", perms.size()));
  }
  const Permutation& perm = perms[static_cast<size_t>(message - 1)];
  if (perm.size() != store.length()) {
    return absl::InvalidArgumentError(
        absl::StrCat("permutation length ", perm.size(),
                     " differs from message length ", store.length()));
  }
  std::vector<FieldSymbol> permuted(static_cast<size_t>(store.length()));
  for (int64_t i = 1; i <= store.length(); ++i) {
    permuted[static_cast<size_t>(i - 1)] = store.Symbol(message, perm(i));
  }
  return permuted;
}

absl::StatusOr<std::vector<FieldSymbol>> Unpermute(
    std::span<const FieldSymbol> permuted, const Permutation& perm) {
  if (static_cast<int64_t>(permuted.size()) != perm.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("permutation length ", perm.size(),
                     " differs from message length ", permuted.size()));
  }
  std::vector<FieldSymbol> original(permuted.size());
  for (int64_t i = 1; i <= perm.size(); ++i) {
    original[static_cast<size_t>(perm(i) - 1)] =
        permuted[static_cast<size_t>(i - 1)];
  }
  return original;
}

}  // namespace pir_asym
