/*
 * Copyright 2026 The pkse Authors.
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

#include "pkse/error.h"

namespace pkse {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotInvertible: return "NotInvertible";
    case ErrorCode::kModulusMismatch: return "ModulusMismatch";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kRandomnessExhausted: return "RandomnessExhausted";
    case ErrorCode::kParameterTooSmall: return "ParameterTooSmall";
    case ErrorCode::kPlaintextOutOfRange: return "PlaintextOutOfRange";
    case ErrorCode::kInvalidCiphertext: return "InvalidCiphertext";
    case ErrorCode::kOutOfDomain: return "OutOfDomain";
    case ErrorCode::kDuplicateTag: return "DuplicateTag";
    case ErrorCode::kInvalidTag: return "InvalidTag";
    case ErrorCode::kInvalidIndex: return "InvalidIndex";
    case ErrorCode::kEmptyQuery: return "EmptyQuery";
    case ErrorCode::kUnknownKeyword: return "UnknownKeyword";
    case ErrorCode::kTooManyKeywords: return "TooManyKeywords";
    case ErrorCode::kInvalidRandomness: return "InvalidRandomness";
    case ErrorCode::kInvalidScanDomain: return "InvalidScanDomain";
    case ErrorCode::kInvalidFormat: return "InvalidFormat";
  }
  return "Unknown";
}

}  // namespace pkse
