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

#ifndef P3_ERROR_HPP_
#define P3_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace p3 {

// Every failure raised by the library carries one of these codes. The CLI
// maps them onto process exit statuses (see exit_status()).
enum class ErrorCode {
  kInvalidArgument,
  kEmptyOutput,
  kEmptyAction,
  kEmptyActionList,
  kEmptyPool,
  kDimensionMismatch,
  kSizeMismatch,
  kNotPSD,
  kIndexOutOfRange,
  kKTooLarge,
  kMissingScores,
  kMissingMetric,
  kMissingEmbedding,
  kMissingState,
  kSchemaError,
  kInvalidSpec,
  kHookFailure,
  kIoError,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " +
                           message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Process exit statuses. These values are part of the CLI contract.
enum class ExitStatus : int {
  kSuccess = 0,
  kUsage = 1,
  kData = 2,
  kNumerical = 3,
  kHook = 4,
};

ExitStatus exit_status(ErrorCode code);

}  // namespace p3

#endif  // P3_ERROR_HPP_
