// Copyright 2026 The Authors.
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

#include "p3/error.hpp"

namespace p3 {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kEmptyOutput: return "EmptyOutput";
    case ErrorCode::kEmptyAction: return "EmptyAction";
    case ErrorCode::kEmptyActionList: return "EmptyActionList";
    case ErrorCode::kEmptyPool: return "EmptyPool";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kSizeMismatch: return "SizeMismatch";
    case ErrorCode::kNotPSD: return "NotPSD";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kKTooLarge: return "KTooLarge";
    case ErrorCode::kMissingScores: return "MissingScores";
    case ErrorCode::kMissingMetric: return "MissingMetric";
    case ErrorCode::kMissingEmbedding: return "MissingEmbedding";
    case ErrorCode::kMissingState: return "MissingState";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kHookFailure: return "HookFailure";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

ExitStatus exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotPSD:
      return ExitStatus::kNumerical;
    case ErrorCode::kHookFailure:
      return ExitStatus::kHook;
    default:
      return ExitStatus::kData;
  }
}

}  // namespace p3
