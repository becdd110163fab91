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

#ifndef PKSE_ERROR_H_
#define PKSE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace pkse {

enum class ErrorCode {
  kNotInvertible,
  kModulusMismatch,
  kDimensionMismatch,
  kRandomnessExhausted,
  kParameterTooSmall,
  kPlaintextOutOfRange,
  kInvalidCiphertext,
  kOutOfDomain,
  kDuplicateTag,
  kInvalidTag,
  kInvalidIndex,
  kEmptyQuery,
  kUnknownKeyword,
  kTooManyKeywords,
  kInvalidRandomness,
  kInvalidScanDomain,
  kInvalidFormat,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries one of the codes above so the
// command-line front end can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pkse

#endif  // PKSE_ERROR_H_
