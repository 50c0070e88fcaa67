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


#include "mdrd/data/embeddings.hpp"

#include <cstring>
#include <fstream>

#include "mdrd/error.hpp"
#include "mdrd/io/binary.hpp"
#include "mdrd/io/file.hpp"

namespace mdrd::data {

namespace {

constexpr std::size_t kMagicLen = sizeof(kEmbeddingMagic) - 1;
constexpr std::size_t kHeaderLen = kMagicLen + 12;

EmbeddingHeader read_header(io::ByteReader& r) {
  if (r.raw(kMagicLen) != std::string_view(kEmbeddingMagic)) {
    fail<FormatError>("embeddings: bad magic (not an MDRD embedding file)");
  }
  EmbeddingHeader h;
  h.version = r.u32();
  h.dim = r.u32();
  h.layers = r.u32();
  if (h.version != kEmbeddingVersion) {
    fail<FormatError>("embeddings: unsupported version ", h.version, " (expected ", kEmbeddingVersion, ")");
  }
  if (h.dim == 0 || h.layers == 0) fail<FormatError>("embeddings: header declares D = ", h.dim, ", L = ", h.layers);
  return h;
}

}  // namespace

const EmbeddingRecord& EmbeddingFile::at(const std::string& id) const {
  const auto it = index.find(id);
  if (it == index.end()) fail("embeddings: no record for post '", id, "'");
  return records[it->second];
}

std::string embedding_bytes(std::uint32_t dim, std::uint32_t layers, std::span<const EmbeddingRecord> records) {
  if (dim == 0 || layers == 0) fail("embeddings: D and L must be positive");
  io::ByteWriter w;
  w.raw(std::string_view(kEmbeddingMagic));
  w.u32(kEmbeddingVersion);
  w.u32(dim);
  w.u32(layers);
  for (const auto& rec : records) {
    if (rec.id.empty() || rec.id.size() > 0xFFFF) fail("embeddings: bad id length for '", rec.id, "'");
    if (rec.layers.size() != layers) {
      fail<DimensionError>("embeddings: post '", rec.id, "' has ", rec.layers.size(), " layers, header says ", layers);
    }
    const std::size_t n = rec.layers.front().rows();
    for (const auto& m : rec.layers) {
      if (m.rank() != 2 || m.cols() != dim || m.rows() != n) {
        fail<DimensionError>("embeddings: post '", rec.id, "' layer shape ", num::to_string(m.shape()),
                             " inconsistent with D = ", dim);
      }
    }
    w.u16(static_cast<std::uint16_t>(rec.id.size()));
    w.raw(rec.id);
    w.u32(static_cast<std::uint32_t>(n));
    for (const auto& m : rec.layers) {
      for (double v : m.data()) w.f32(static_cast<float>(v));
    }
  }
  w.u32(io::crc32_of(w.bytes()));
  return w.take();
}

EmbeddingFile parse_embeddings(const std::string& bytes) {
  if (bytes.size() < kHeaderLen + 4) fail<FormatError>("embeddings: truncated file");
  const std::string_view body(bytes.data(), bytes.size() - 4);
  io::ByteReader trailer(std::string_view(bytes).substr(bytes.size() - 4), "embeddings");
  io::ByteReader r(body, "embeddings");
  EmbeddingFile file;
  file.header = read_header(r);
  if (trailer.u32() != io::crc32_of(body)) fail<FormatError>("embeddings: checksum mismatch (truncated or corrupted)");
  const std::size_t dim = file.header.dim;
  while (!r.done()) {
    EmbeddingRecord rec;
    const std::uint16_t len = r.u16();
    rec.id = std::string(r.raw(len));
    const std::uint32_t n = r.u32();
    if (n == 0) fail<FormatError>("embeddings: post '", rec.id, "' has zero tokens");
    for (std::uint32_t l = 0; l < file.header.layers; ++l) {
      std::vector<double> values(static_cast<std::size_t>(n) * dim);
      for (double& v : values) v = static_cast<double>(r.f32());
      rec.layers.push_back(Tensor::unchecked({n, dim}, std::move(values)));
    }
    if (!file.index.emplace(rec.id, file.records.size()).second) {
      fail<FormatError>("embeddings: duplicate id '", rec.id, "'");
    }
    file.records.push_back(std::move(rec));
  }
  return file;
}

void embedding_write(const std::filesystem::path& path, std::uint32_t dim, std::uint32_t layers,
                     std::span<const EmbeddingRecord> records) {
  io::write_file_atomic(path, embedding_bytes(dim, layers, records));
}

EmbeddingFile embedding_read_all(const std::filesystem::path& path) { return parse_embeddings(io::read_file(path)); }

EmbeddingHeader embedding_header(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) fail("cannot open '", path.string(), "': no such file");
  std::ifstream in(path, std::ios::binary);
  std::string head(kHeaderLen, '\0');
  in.read(head.data(), static_cast<std::streamsize>(head.size()));
  if (static_cast<std::size_t>(in.gcount()) != head.size()) fail<FormatError>("embeddings: truncated header");
  io::ByteReader r(head, "embeddings");
  return read_header(r);
}

std::vector<EmbeddingRecord> select_embeddings(const EmbeddingFile& file, std::span<const std::string> ids) {
  std::vector<std::string> missing;
  std::size_t missing_count = 0;
  for (const auto& id : ids) {
    if (!file.index.count(id)) {
      if (missing.size() < 10) missing.push_back(id);
      ++missing_count;
    }
  }
  if (missing_count > 0) {
    std::string list;
    for (const auto& id : missing) list += (list.empty() ? "" : ", ") + id;
    if (missing_count > missing.size()) list += ", ...";
    fail("embeddings: ", missing_count, " requested post id(s) missing: ", list);
  }
  std::vector<EmbeddingRecord> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(file.at(id));
  return out;
}

std::vector<EmbeddingRecord> embedding_read(const std::filesystem::path& path, std::span<const std::string> ids) {
  return select_embeddings(embedding_read_all(path), ids);
}

void require_embedding_dim(const EmbeddingHeader& header, std::size_t expected_dim) {
  if (header.dim != expected_dim) {
    fail<DimensionError>("embedding file has token width D = ", header.dim, " but the config expects D = ",
                         expected_dim);
  }
}

Tensor mean_last_k_layers(std::span<const Tensor> layers, std::size_t k) {
  if (k == 0) fail("mean_last_k_layers: k must be at least 1");
  if (k > layers.size()) fail("mean_last_k_layers: k = ", k, " exceeds the ", layers.size(), " available layers");
  const Tensor& last = layers.back();
  if (k == 1) return last;
  Tensor out(last.shape());
  auto acc = out.data();
  for (std::size_t l = layers.size() - k; l < layers.size(); ++l) {
    if (!layers[l].same_shape(last)) fail<DimensionError>("mean_last_k_layers: layer shapes differ");
    auto src = layers[l].data();
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += src[i];
  }
  for (double& v : acc) v /= static_cast<double>(k);
  return out;
}

}  // namespace mdrd::data
