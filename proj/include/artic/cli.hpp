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

#ifndef ARTIC_CLI_HPP_
#define ARTIC_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace artic {

// Entry point of the `artic` tool. Exit codes: 0 success, 1 user or
// configuration error, 2 runtime failure. `args` is argv-style: args[0] is
// the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace artic

#endif  // ARTIC_CLI_HPP_
