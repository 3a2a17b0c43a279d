/*
 * Copyright 2026 The AgroSense Authors.
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
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace agro {

enum class ErrorCode {
  kSchema,
  kEmptyDataset,
  kBounds,
  kContract,
  kNumerical,
  kShape,
  kFormat,
  kCorruptFile,
  kUnimputableFeature,
  kDegenerateData,
  kDegenerateVariance,
  kUndefinedAuc,
  kIncompatibleArtifact,
  kCorruptArtifact,
  kFilesystem,
  kUsage,
  kConfig,
};

std::string_view error_code_name(ErrorCode code);

// Single exception type for the library; the code carries the error class so
// that the C boundary can map it to a status without RTTI ladders.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

// Re-throws `e` with "<stage>: " prepended, keeping the original code.
[[noreturn]] inline void rethrow_in_stage(const Error& e, std::string_view stage) {
  throw Error(e.code(), std::string(stage) + ": " + e.what());
}

}  // namespace agro
