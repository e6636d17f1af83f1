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

#include "artic/provenance.hpp"

#include <cstdio>

#ifndef ARTIC_VERSION
#define ARTIC_VERSION "0.0.0"
#endif

namespace artic {

std::string toolkit_version() { return ARTIC_VERSION; }

std::string config_hash(const nlohmann::json& config) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.dump()) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char text[17];
  std::snprintf(text, sizeof(text), "%016llx", static_cast<unsigned long long>(hash));
  return text;
}

nlohmann::json provenance_block(const std::string& command, const nlohmann::json& config,
                                const nlohmann::json& seeds) {
  return {{"toolkit", "artic"},
          {"version", toolkit_version()},
          {"command", command},
          {"config_hash", config_hash(config)},
          {"seeds", seeds}};
}

}  // namespace artic
