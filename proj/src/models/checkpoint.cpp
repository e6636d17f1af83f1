/*
 * Copyright 2026 The Artic Authors.
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

#include "artic/models/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace artic::models {

namespace fs = std::filesystem;
using nlohmann::json;

static_assert(std::endian::native == std::endian::little, "archives are written little-endian");

void save_archive(const TensorArchive& archive, const fs::path& path) {
  json manifest;
  manifest["metadata"] = archive.metadata;
  manifest["tensors"] = json::array();
  std::uint64_t offset = 0;
  for (const auto& [name, tensor] : archive.tensors) {
    manifest["tensors"].push_back(
        {{"name", name}, {"shape", tensor.shape}, {"offset", offset}, {"count", tensor.data.size()}});
    offset += tensor.data.size();
  }
  const std::string text = manifest.dump();
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw LoadError("cannot write checkpoint: " + path.string());
    out.write(kArchiveMagic, 4);
    const std::uint32_t version = kArchiveVersion;
    out.write(reinterpret_cast<const char*>(&version), sizeof(version));
    const std::uint64_t length = text.size();
    out.write(reinterpret_cast<const char*>(&length), sizeof(length));
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    for (const auto& [name, tensor] : archive.tensors) {
      out.write(reinterpret_cast<const char*>(tensor.data.data()),
                static_cast<std::streamsize>(tensor.data.size() * sizeof(float)));
    }
    if (!out) throw Error("failed writing checkpoint: " + path.string());
  }
  fs::rename(tmp, path);
}

TensorArchive load_archive(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot read checkpoint: " + path.string());
  const std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  constexpr std::size_t kHeader = 16;
  if (bytes.size() < kHeader || std::memcmp(bytes.data(), kArchiveMagic, 4) != 0) {
    throw FormatError("not a checkpoint archive: " + path.string());
  }
  std::uint32_t version;
  std::uint64_t length;
  std::memcpy(&version, bytes.data() + 4, 4);
  std::memcpy(&length, bytes.data() + 8, 8);
  if (version != kArchiveVersion) throw FormatError("unsupported checkpoint version in " + path.string());
  if (length > bytes.size() - kHeader) throw FormatError("truncated checkpoint manifest: " + path.string());

  TensorArchive archive;
  json manifest;
  try {
    manifest = json::parse(bytes.begin() + kHeader, bytes.begin() + static_cast<std::ptrdiff_t>(kHeader + length));
    archive.metadata = manifest.value("metadata", json::object());
    const std::size_t payload = kHeader + length;
    const std::size_t floats = (bytes.size() - payload) / sizeof(float);
    for (const auto& entry : manifest.at("tensors")) {
      ArchivedTensor t;
      t.shape = entry.at("shape").get<std::vector<std::int64_t>>();
      const auto offset = entry.at("offset").get<std::size_t>();
      const auto count = entry.at("count").get<std::size_t>();
      if (offset + count > floats) throw FormatError("checkpoint payload truncated: " + path.string());
      t.data.resize(count);
      std::memcpy(t.data.data(), bytes.data() + payload + offset * sizeof(float), count * sizeof(float));
      archive.tensors.emplace(entry.at("name").get<std::string>(), std::move(t));
    }
  } catch (const json::exception& e) {
    throw FormatError("bad checkpoint manifest in " + path.string() + ": " + e.what());
  }
  return archive;
}

json InitReport::to_json() const {
  json skipped_json = json::array();
  for (const auto& [name, reason] : skipped) skipped_json.push_back({{"name", name}, {"reason", reason}});
  json out = {{"copied", copied},
              {"skipped", skipped_json},
              {"num_copied", copied.size()},
              {"num_skipped", skipped.size()}};
  out["warning"] = warning ? json(*warning) : json(nullptr);
  return out;
}

}  // namespace artic::models
