// Copyright 2026 The MagniLift Authors
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

#ifndef MAGNILIFT_ERROR_HPP_
#define MAGNILIFT_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace magnilift {

enum class ErrorKind {
  kInvalidArgument,
  kDimensionMismatch,
  kMissingEntry,
  kNotPsd,
  kRankExceedsDim,
  kPreconditionViolated,
  kDegenerate,
  kRankDeficient,
  kInconsistentSamples,
  kWindowMismatch,
  kUnboundedAmbiguity,
  kTooManyBranches,
  kTooLarge,
  kParse,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kMissingEntry: return "MissingEntry";
    case ErrorKind::kNotPsd: return "NotPSD";
    case ErrorKind::kRankExceedsDim: return "RankExceedsDim";
    case ErrorKind::kPreconditionViolated: return "PreconditionViolated";
    case ErrorKind::kDegenerate: return "Degenerate";
    case ErrorKind::kRankDeficient: return "RankDeficient";
    case ErrorKind::kInconsistentSamples: return "InconsistentSamples";
    case ErrorKind::kWindowMismatch: return "WindowMismatch";
    case ErrorKind::kUnboundedAmbiguity: return "UnboundedAmbiguity";
    case ErrorKind::kTooManyBranches: return "TooManyBranches";
    case ErrorKind::kTooLarge: return "TooLarge";
    case ErrorKind::kParse: return "Parse";
  }
  return "Unknown";
}

// All library failures are reported through this exception type.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace magnilift

#endif  // MAGNILIFT_ERROR_HPP_
