/*
 * Copyright 2026 The promptedit Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PROMPTEDIT_ERROR_HPP_
#define PROMPTEDIT_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace promptedit {

// Every failure the library reports. The CLI maps these onto exit codes.
enum class ErrorCode {
  kMissingColumn,
  kMalformedRow,
  kEmptyLexicon,
  kEmptyText,
  kBackendUnavailable,
  kDimensionMismatch,
  kZeroVector,
  kBackendMismatch,
  kDuplicateId,
  kTooFewScores,
  kSingleClass,
  kInvalidParams,
  kSchemaMismatch,
  kTooFewRows,
  kTooManyFeatures,
  kEmptyBackground,
  kEmptySample,
  kUnknownFeature,
  kServiceUnavailable,
  kUnknownEmotion,
  kMissingOriginal,
  kInsufficientPairs,
  kShapeMismatch,
  kIo,
  kParse,
  kInvalidArgument,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

  // True for transport-level failures a caller may retry later.
  bool is_backend_failure() const {
    return code_ == ErrorCode::kBackendUnavailable ||
           code_ == ErrorCode::kServiceUnavailable;
  }

 private:
  ErrorCode code_;
};

}  // namespace promptedit

#endif  // PROMPTEDIT_ERROR_HPP_
