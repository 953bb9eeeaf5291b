// Copyright 2026 The rpm-dilation Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RPM_ERROR_HPP_
#define RPM_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace rpm {

enum class ErrorKind {
  NotSquare,
  NotHermitian,
  NegativeEigenvalue,
  InvalidGenerator,
  InvalidStep,
  NormExceedsOne,
  DimensionMismatch,
  ZeroState,
  BadDecomposition,
  MismatchedDilation,
  BadDensityMatrix,
  NotConverged,
  IoFailure,
  ParseError,
  ValidationError,
};

constexpr std::string_view kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NegativeEigenvalue: return "NegativeEigenvalue";
    case ErrorKind::InvalidGenerator: return "InvalidGenerator";
    case ErrorKind::InvalidStep: return "InvalidStep";
    case ErrorKind::NormExceedsOne: return "NormExceedsOne";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ZeroState: return "ZeroState";
    case ErrorKind::BadDecomposition: return "BadDecomposition";
    case ErrorKind::MismatchedDilation: return "MismatchedDilation";
    case ErrorKind::BadDensityMatrix: return "BadDensityMatrix";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::IoFailure: return "IoFailure";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

/// Single exception type for the library; `kind()` names the failure
/// category so callers (and the CLI) can branch or report on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace rpm

#endif  // RPM_ERROR_HPP_
