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

#include "promptedit/error.hpp"

namespace promptedit {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingColumn: return "MissingColumn";
    case ErrorCode::kMalformedRow: return "MalformedRow";
    case ErrorCode::kEmptyLexicon: return "EmptyLexicon";
    case ErrorCode::kEmptyText: return "EmptyText";
    case ErrorCode::kBackendUnavailable: return "BackendUnavailable";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kBackendMismatch: return "BackendMismatch";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kTooFewScores: return "TooFewScores";
    case ErrorCode::kSingleClass: return "SingleClass";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kTooFewRows: return "TooFewRows";
    case ErrorCode::kTooManyFeatures: return "TooManyFeatures";
    case ErrorCode::kEmptyBackground: return "EmptyBackground";
    case ErrorCode::kEmptySample: return "EmptySample";
    case ErrorCode::kUnknownFeature: return "UnknownFeature";
    case ErrorCode::kServiceUnavailable: return "ServiceUnavailable";
    case ErrorCode::kUnknownEmotion: return "UnknownEmotion";
    case ErrorCode::kMissingOriginal: return "MissingOriginal";
    case ErrorCode::kInsufficientPairs: return "InsufficientPairs";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace promptedit
