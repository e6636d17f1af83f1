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

#ifndef ARTIC_MODELS_CHECKPOINT_HPP_
#define ARTIC_MODELS_CHECKPOINT_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "artic/errors.hpp"
#include "artic/nn/autograd.hpp"

namespace artic::models {

struct ArchivedTensor {
  std::vector<std::int64_t> shape;
  std::vector<float> data;
};

// Named-tensor archive. On disk: "ARTC", u32 version = 1, u64 manifest
// length, a JSON manifest {metadata, tensors: [{name, shape, offset, count}]},
// then the float32 little-endian payload (offsets count floats).
struct TensorArchive {
  nlohmann::json metadata = nlohmann::json::object();
  std::map<std::string, ArchivedTensor> tensors;
};

inline constexpr char kArchiveMagic[4] = {'A', 'R', 'T', 'C'};
inline constexpr std::uint32_t kArchiveVersion = 1;

void save_archive(const TensorArchive& archive, const std::filesystem::path& path);
TensorArchive load_archive(const std::filesystem::path& path);

template <typename Scalar>
void store_tensor(TensorArchive& archive, const std::string& name, std::vector<std::int64_t> shape,
                  const nn::Tensor<Scalar>& value) {
  ArchivedTensor t;
  t.shape = std::move(shape);
  t.data.resize(static_cast<std::size_t>(value.size()));
  for (nn::Index i = 0; i < value.size(); ++i) t.data[static_cast<std::size_t>(i)] = static_cast<float>(value.data()[i]);
  archive.tensors[name] = std::move(t);
}

template <typename Scalar>
void load_tensor(const ArchivedTensor& source, nn::Tensor<Scalar>& value) {
  for (nn::Index i = 0; i < value.size(); ++i) value.data()[i] = static_cast<Scalar>(source.data[static_cast<std::size_t>(i)]);
}

template <typename Scalar>
void store_parameters(TensorArchive& archive, const nn::ParameterList<Scalar>& params,
                      const std::string& prefix) {
  for (const auto* p : params) store_tensor(archive, prefix + p->name, p->shape, p->value);
}

// Strict restore: every parameter must be present with the same shape.
template <typename Scalar>
void load_parameters(const TensorArchive& archive, const nn::ParameterList<Scalar>& params,
                     const std::string& prefix) {
  for (auto* p : params) {
    const auto it = archive.tensors.find(prefix + p->name);
    if (it == archive.tensors.end()) throw FormatError("checkpoint lacks tensor '" + prefix + p->name + "'");
    if (it->second.shape != p->shape) throw FormatError("checkpoint tensor '" + prefix + p->name + "' has wrong shape");
    load_tensor(it->second, p->value);
  }
}

struct InitReport {
  std::vector<std::string> copied;
  std::vector<std::pair<std::string, std::string>> skipped;  // name, reason
  std::optional<std::string> warning;

  nlohmann::json to_json() const;
};

// Copies every tensor whose name (after `prefix`) and shape match; others keep
// their current values. Shapes never change.
template <typename Scalar>
InitReport init_from_archive(const TensorArchive& archive, const nn::ParameterList<Scalar>& params,
                             const std::string& prefix) {
  InitReport report;
  for (auto* p : params) {
    const std::string name = prefix + p->name;
    const auto it = archive.tensors.find(name);
    if (it == archive.tensors.end()) {
      report.skipped.emplace_back(name, "missing");
    } else if (it->second.shape != p->shape) {
      report.skipped.emplace_back(name, "shape mismatch");
    } else {
      load_tensor(it->second, p->value);
      report.copied.push_back(name);
    }
  }
  if (report.copied.empty()) report.warning = "no tensors copied from checkpoint";
  return report;
}

}  // namespace artic::models

#endif  // ARTIC_MODELS_CHECKPOINT_HPP_
