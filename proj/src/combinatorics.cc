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

#include "pir_asym/combinatorics.h"

namespace pir_asym {
namespace {

void ExtendMonotone(int length, int max_value, std::vector<int>& prefix,
                    std::vector<std::vector<int>>& out) {
  if (static_cast<int>(prefix.size()) == length) {
    out.push_back(prefix);
    return;
  }
  const int start = prefix.empty() ? 1 : prefix.back();
  for (int v = start; v <= max_value; ++v) {
    prefix.push_back(v);
    ExtendMonotone(length, max_value, prefix, out);
    prefix.pop_back();
  }
}

void ExtendSubsets(const std::vector<int>& items, int k, size_t start,
                   std::vector<int>& prefix,
                   std::vector<std::vector<int>>& out) {
  if (static_cast<int>(prefix.size()) == k) {
    out.push_back(prefix);
    return;
  }
  for (size_t i = start; i < items.size(); ++i) {
    prefix.push_back(items[i]);
    ExtendSubsets(items, k, i + 1, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<std::vector<int>> MonotoneSequences(int length, int max_value) {
  std::vector<std::vector<int>> out;
  if (length < 0 || max_value < 1) return out;
  std::vector<int> prefix;
  ExtendMonotone(length, max_value, prefix, out);
  return out;
}

std::vector<std::vector<int>> AllSequences(int length, int max_value) {
  std::vector<std::vector<int>> out;
  if (length < 0 || max_value < 1) return out;
  std::vector<int> current(static_cast<size_t>(length), 1);
  while (true) {
    out.push_back(current);
    int pos = length - 1;
    while (pos >= 0 && current[static_cast<size_t>(pos)] == max_value) {
      current[static_cast<size_t>(pos)] = 1;
      --pos;
    }
    if (pos < 0) break;
    ++current[static_cast<size_t>(pos)];
  }
  return out;
}

std::vector<std::vector<int>> Subsets(const std::vector<int>& items, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > static_cast<int>(items.size())) return out;
  std::vector<int> prefix;
  ExtendSubsets(items, k, 0, prefix, out);
  return out;
}

}  // namespace pir_asym
