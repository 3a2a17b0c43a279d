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
#include "agrosense/error.hpp"

namespace agro {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSchema: return "schema";
    case ErrorCode::kEmptyDataset: return "empty_dataset";
    case ErrorCode::kBounds: return "bounds";
    case ErrorCode::kContract: return "contract";
    case ErrorCode::kNumerical: return "numerical";
    case ErrorCode::kShape: return "shape";
    case ErrorCode::kFormat: return "format";
    case ErrorCode::kCorruptFile: return "corrupt_file";
    case ErrorCode::kUnimputableFeature: return "unimputable_feature";
    case ErrorCode::kDegenerateData: return "degenerate_data";
    case ErrorCode::kDegenerateVariance: return "degenerate_variance";
    case ErrorCode::kUndefinedAuc: return "undefined_auc";
    case ErrorCode::kIncompatibleArtifact: return "incompatible_artifact";
    case ErrorCode::kCorruptArtifact: return "corrupt_artifact";
    case ErrorCode::kFilesystem: return "filesystem";
    case ErrorCode::kUsage: return "usage";
    case ErrorCode::kConfig: return "config";
  }
  return "unknown";
}

}  // namespace agro
