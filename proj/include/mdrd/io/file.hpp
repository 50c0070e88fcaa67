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


#ifndef MDRD_IO_FILE_HPP_
#define MDRD_IO_FILE_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace mdrd::io {

std::uint32_t crc32_of(std::string_view bytes);

/// Writes to "<path>.tmp" and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);

/// Whole file as bytes; fails naming the path when it cannot be opened.
std::string read_file(const std::filesystem::path& path);

}  // namespace mdrd::io

#endif  // MDRD_IO_FILE_HPP_
