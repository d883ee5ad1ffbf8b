// Copyright 2026 The Policy Engine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Error taxonomy. Every failure is reported as an absl::Status; the status
// code identifies the error kind and the message starts with its name.
//
//   VariantMismatch     kInvalidArgument
//   ParseError          kInvalidArgument
//   ConfigError         kInvalidArgument
//   ValidationError     kFailedPrecondition
//   IncomparableKeys    kFailedPrecondition
//   DeltaOverflow       kOutOfRange
//   BudgetFnDomain      kOutOfRange
//   UnknownTimeStep     kOutOfRange
//   UnsupportedVariant  kUnimplemented
//   NoConversionPath    kNotFound
//   MissingCost         kNotFound
//   IOError             kUnavailable

#ifndef POLICY_ENGINE_ERRORS_H_
#define POLICY_ENGINE_ERRORS_H_

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"

namespace policy_engine {

inline absl::Status VariantMismatchError(absl::string_view detail) {
  return absl::InvalidArgumentError(absl::StrCat("VariantMismatch: ", detail));
}
inline absl::Status ParseError(absl::string_view detail) {
  return absl::InvalidArgumentError(absl::StrCat("ParseError: ", detail));
}
inline absl::Status ConfigError(absl::string_view detail) {
  return absl::InvalidArgumentError(absl::StrCat("ConfigError: ", detail));
}
inline absl::Status ValidationError(absl::string_view detail) {
  return absl::FailedPreconditionError(
      absl::StrCat("ValidationError: ", detail));
}
inline absl::Status IncomparableKeysError(absl::string_view detail) {
  return absl::FailedPreconditionError(
      absl::StrCat("IncomparableKeys: ", detail));
}
inline absl::Status DeltaOverflowError(absl::string_view detail) {
  return absl::OutOfRangeError(absl::StrCat("DeltaOverflow: ", detail));
}
inline absl::Status BudgetFnDomainError(absl::string_view detail) {
  return absl::OutOfRangeError(absl::StrCat("BudgetFnDomain: ", detail));
}
inline absl::Status UnknownTimeStepError(absl::string_view detail) {
  return absl::OutOfRangeError(absl::StrCat("UnknownTimeStep: ", detail));
}
inline absl::Status UnsupportedVariantError(absl::string_view detail) {
  return absl::UnimplementedError(absl::StrCat("UnsupportedVariant: ", detail));
}
inline absl::Status NoConversionPathError(absl::string_view detail) {
  return absl::NotFoundError(absl::StrCat("NoConversionPath: ", detail));
}
inline absl::Status MissingCostError(absl::string_view detail) {
  return absl::NotFoundError(absl::StrCat("MissingCost: ", detail));
}
inline absl::Status IoError(absl::string_view detail) {
  return absl::UnavailableError(absl::StrCat("IOError: ", detail));
}

}  // namespace policy_engine

#endif  // POLICY_ENGINE_ERRORS_H_
