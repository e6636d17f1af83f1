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

#include "artic/trajectory.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "artic/errors.hpp"

namespace artic {
namespace {

static_assert(std::endian::native == std::endian::little,
              "matrix files are written with native little-endian layout");

void put_u32(std::ofstream& out, std::uint32_t value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(value));
}

std::uint32_t get_u32(const char* bytes) {
  std::uint32_t value;
  std::memcpy(&value, bytes, sizeof(value));
  return value;
}

}  // namespace

void write_matrix(const FrameMatrix& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw LoadError("cannot open for writing: " + path.string());
  out.write(kTrajectoryMagic, 4);
  put_u32(out, kTrajectoryVersion);
  put_u32(out, static_cast<std::uint32_t>(data.rows()));
  put_u32(out, static_cast<std::uint32_t>(data.cols()));
  if (data.size() > 0) {
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size() * sizeof(float)));
  }
  if (!out) throw Error("write failed: " + path.string());
}

FrameMatrix read_matrix(const std::filesystem::path& path, std::optional<Index> expected_dim) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open matrix file: " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  constexpr std::size_t kHeader = 16;
  if (bytes.size() < kHeader || std::memcmp(bytes.data(), kTrajectoryMagic, 4) != 0) {
    throw FormatError("bad matrix header in " + path.string());
  }
  const std::uint32_t version = get_u32(bytes.data() + 4);
  if (version != kTrajectoryVersion) {
    throw FormatError("unsupported matrix version " + std::to_string(version) + " in " +
                      path.string());
  }
  const Index rows = get_u32(bytes.data() + 8);
  const Index cols = get_u32(bytes.data() + 12);
  const std::size_t payload = static_cast<std::size_t>(rows * cols) * sizeof(float);
  if (bytes.size() - kHeader != payload) {
    throw FormatError("payload size does not match header dimensions in " + path.string());
  }
  if (expected_dim && cols != *expected_dim) {
    throw FormatError("expected D=" + std::to_string(*expected_dim) + " but header has D=" +
                      std::to_string(cols) + " in " + path.string());
  }
  FrameMatrix data(rows, cols);
  if (payload > 0) std::memcpy(data.data(), bytes.data() + kHeader, payload);
  return data;
}

void write_trajectory(const ArticulatoryTrajectory& traj, const std::filesystem::path& path) {
  write_matrix(traj.data, path);
}

ArticulatoryTrajectory read_trajectory(const std::filesystem::path& path,
                                       std::optional<Index> expected_dim) {
  ArticulatoryTrajectory traj;
  traj.utterance_id = path.stem().string();
  traj.data = read_matrix(path, expected_dim);
  return traj;
}

}  // namespace artic
