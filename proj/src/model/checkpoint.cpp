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


#include "mdrd/model/checkpoint.hpp"

#include <cstring>
#include <map>

#include "mdrd/error.hpp"
#include "mdrd/io/binary.hpp"
#include "mdrd/io/file.hpp"

namespace mdrd::model {

using io::crc32_of;
using io::read_file;
using io::write_file_atomic;

std::string checkpoint_bytes(const MdrdModel& model, const nlohmann::ordered_json& extras,
                             StoredPrecision precision) {
  io::ByteWriter w;
  w.raw(std::string_view(kCheckpointMagic));
  w.u32(kCheckpointVersion);
  nlohmann::ordered_json header;
  header["config"] = to_json(model.config());
  header["extras"] = extras.is_null() ? nlohmann::ordered_json::object() : extras;
  const std::string text = header.dump();
  w.u32(static_cast<std::uint32_t>(text.size()));
  w.raw(text);

  const auto params = model.parameters();
  w.u32(static_cast<std::uint32_t>(params.size()));
  for (const num::Parameter* p : params) {
    if (p->name.size() > 0xFFFF) fail("checkpoint: parameter name too long");
    w.u16(static_cast<std::uint16_t>(p->name.size()));
    w.raw(p->name);
    w.u8(static_cast<std::uint8_t>(precision));
    const auto& shape = p->value.shape();
    w.u8(static_cast<std::uint8_t>(shape.size()));
    for (std::size_t d : shape) w.u32(static_cast<std::uint32_t>(d));
    for (double v : p->value.data()) {
      if (precision == StoredPrecision::kFloat64) w.f64(v);
      else w.f32(static_cast<float>(v));
    }
  }
  w.u32(crc32_of(w.bytes()));
  return w.take();
}

LoadedCheckpoint checkpoint_from_bytes(const std::string& bytes) {
  const std::size_t magic_len = std::strlen(kCheckpointMagic);
  if (bytes.size() < magic_len + 8 || bytes.compare(0, magic_len, kCheckpointMagic) != 0) {
    fail<FormatError>("checkpoint: bad magic (not an MDRD checkpoint)");
  }
  const std::string_view body(bytes.data(), bytes.size() - 4);
  io::ByteReader trailer(std::string_view(bytes).substr(bytes.size() - 4), "checkpoint");
  if (trailer.u32() != crc32_of(body)) fail<FormatError>("checkpoint: checksum mismatch (truncated or corrupted file)");

  io::ByteReader r(body, "checkpoint");
  r.skip(magic_len);
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    fail<FormatError>("checkpoint: unsupported format version ", version, " (expected ", kCheckpointVersion, ")");
  }
  const std::uint32_t text_len = r.u32();
  const std::string_view text = r.raw(text_len);
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail<FormatError>("checkpoint: bad config block: ", e.what());
  }
  if (!header.contains("config")) fail<FormatError>("checkpoint: config block missing");
  MdrdModel model(config_from_json(header["config"]));
  nlohmann::ordered_json extras = nlohmann::ordered_json::object();
  if (header.contains("extras")) extras = nlohmann::ordered_json::parse(header["extras"].dump());

  std::map<std::string, num::Parameter*> by_name;
  for (num::Parameter* p : model.parameters()) by_name.emplace(p->name, p);
  const std::uint32_t count = r.u32();
  if (count != by_name.size()) {
    fail<FormatError>("checkpoint: ", count, " parameter records but the config implies ", by_name.size());
  }
  std::map<std::string, std::vector<double>> staged;
  for (std::uint32_t k = 0; k < count; ++k) {
    const std::uint16_t name_len = r.u16();
    const std::string name(r.raw(name_len));
    const auto it = by_name.find(name);
    if (it == by_name.end()) fail<FormatError>("checkpoint: unexpected parameter '", name, "'");
    if (staged.count(name)) fail<FormatError>("checkpoint: duplicate parameter '", name, "'");
    const std::uint8_t dtype = r.u8();
    if (dtype > 1) fail<FormatError>("checkpoint: unknown dtype tag ", int(dtype), " for '", name, "'");
    const std::uint8_t rank = r.u8();
    num::Shape shape(rank);
    for (auto& d : shape) d = r.u32();
    if (shape != it->second->value.shape()) {
      fail<DimensionError>("checkpoint: parameter '", name, "' has shape ", num::to_string(shape),
                           " but the config implies ", num::to_string(it->second->value.shape()));
    }
    std::vector<double> values(num::element_count(shape));
    for (double& v : values) v = dtype == 0 ? r.f64() : static_cast<double>(r.f32());
    staged.emplace(name, std::move(values));
  }
  if (!r.done()) fail<FormatError>("checkpoint: trailing bytes after parameter records");

  for (auto& [name, values] : staged) {
    num::Parameter* p = by_name.at(name);
    std::copy(values.begin(), values.end(), p->value.data().begin());
  }
  return {std::move(model), std::move(extras)};
}

void checkpoint_save(const MdrdModel& model, const std::filesystem::path& path,
                     const nlohmann::ordered_json& extras, StoredPrecision precision) {
  write_file_atomic(path, checkpoint_bytes(model, extras, precision));
}

LoadedCheckpoint checkpoint_load(const std::filesystem::path& path) {
  return checkpoint_from_bytes(read_file(path));
}

}  // namespace mdrd::model
