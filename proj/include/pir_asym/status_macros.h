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

#ifndef PIR_ASYM_STATUS_MACROS_H_
#define PIR_ASYM_STATUS_MACROS_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define PIR_ASYM_STATUS_CONCAT_INNER_(a, b) a##b
#define PIR_ASYM_STATUS_CONCAT_(a, b) PIR_ASYM_STATUS_CONCAT_INNER_(a, b)

// Evaluates `expr` and returns its status from the enclosing function if it
// is not OK.
#define PIR_ASYM_RETURN_IF_ERROR(expr)            \
  do {                                            \
    const absl::Status _pir_asym_status = (expr); \
    if (!_pir_asym_status.ok()) {                 \
      return _pir_asym_status;                    \
    }                                             \
  } while (0)

// Evaluates `rexpr` (an absl::StatusOr<T>), returning its status on error and
// otherwise moving the value into `lhs`.
#define PIR_ASYM_ASSIGN_OR_RETURN(lhs, rexpr)                                \
  PIR_ASYM_ASSIGN_OR_RETURN_IMPL_(                                           \
      PIR_ASYM_STATUS_CONCAT_(_pir_asym_statusor_, __LINE__), lhs, rexpr)

#define PIR_ASYM_ASSIGN_OR_RETURN_IMPL_(statusor, lhs, rexpr) \
  auto statusor = (rexpr);                                    \
  if (!statusor.ok()) {                                       \
    return statusor.status();                                 \
  }                                                           \
  lhs = std::move(statusor).value()

#endif  // PIR_ASYM_STATUS_MACROS_H_
