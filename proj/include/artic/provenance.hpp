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

#ifndef ARTIC_PROVENANCE_HPP_
#define ARTIC_PROVENANCE_HPP_

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

namespace artic {

std::string toolkit_version();

// 64-bit FNV-1a of the compact JSON dump (object keys sorted), as 16 hex digits.
std::string config_hash(const nlohmann::json& config);

// {"toolkit", "version", "command", "config_hash", "seeds"} for report headers.
nlohmann::json provenance_block(const std::string& command, const nlohmann::json& config,
                                const nlohmann::json& seeds);

}  // namespace artic

#endif  // ARTIC_PROVENANCE_HPP_
