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

#ifndef PIR_ASYM_COMBINATORICS_H_
#define PIR_ASYM_COMBINATORICS_H_

#include <vector>

namespace pir_asym {

// All non-decreasing sequences of `length` values in {1, ..., max_value}, in
// lexicographic order. There are C(length + max_value - 1, length) of them.
std::vector<std::vector<int>> MonotoneSequences(int length, int max_value);

// All sequences in {1, ..., max_value}^length, lexicographic.
std::vector<std::vector<int>> AllSequences(int length, int max_value);

// All size-k subsets of `items` (kept in the given order), lexicographic by
// position.
std::vector<std::vector<int>> Subsets(const std::vector<int>& items, int k);

}  // namespace pir_asym

#endif  // PIR_ASYM_COMBINATORICS_H_
