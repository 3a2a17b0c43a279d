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

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "agrosense/pipeline.hpp"

namespace agro {

inline constexpr std::uint32_t kArtifactVersion = 1;

// Layout: "AGRO", u32 version, u32 section count, then per section a 4-byte
// tag, u64 payload length, payload and the payload's u32 CRC32. Integers and
// doubles are little-endian 64-bit unless noted.
std::vector<std::uint8_t> serialize_pipeline(const TrainedPipeline& pipeline);

// Bad magic or version: incompatible-artifact error. Any damage past the
// header: corrupt-artifact error naming the section.
TrainedPipeline deserialize_pipeline(std::span<const std::uint8_t> bytes);

void save_pipeline(const TrainedPipeline& pipeline, const std::filesystem::path& path);
TrainedPipeline load_pipeline(const std::filesystem::path& path);

}  // namespace agro
