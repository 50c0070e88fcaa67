// Copyright 2026 The MDRD Authors. All Rights Reserved.
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


#ifndef MDRD_MODEL_CHECKPOINT_HPP_
#define MDRD_MODEL_CHECKPOINT_HPP_

#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"
#include "mdrd/model/model.hpp"

namespace mdrd::model {

inline constexpr char kCheckpointMagic[] = "MDRD-CKPT";
inline constexpr std::uint32_t kCheckpointVersion = 1;

enum class StoredPrecision : std::uint8_t { kFloat64 = 0, kFloat32 = 1 };

struct LoadedCheckpoint {
  MdrdModel model;
  nlohmann::ordered_json extras;  // side data such as normalization stats
};

/// Serialized checkpoint:
///   magic, u32 version, u32 length + JSON text {"config", "extras"},
///   u32 record count, records (u16 name length, name, u8 dtype, u8 rank,
///   u32 dims, little-endian values), u32 CRC-32 of everything before it.
std::string checkpoint_bytes(const MdrdModel& model, const nlohmann::ordered_json& extras = {},
                             StoredPrecision precision = StoredPrecision::kFloat64);

LoadedCheckpoint checkpoint_from_bytes(const std::string& bytes);

/// Writes through a temporary file and renames it into place.
void checkpoint_save(const MdrdModel& model, const std::filesystem::path& path,
                     const nlohmann::ordered_json& extras = {},
                     StoredPrecision precision = StoredPrecision::kFloat64);

LoadedCheckpoint checkpoint_load(const std::filesystem::path& path);

}  // namespace mdrd::model

#endif  // MDRD_MODEL_CHECKPOINT_HPP_
