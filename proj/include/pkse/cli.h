/*
 * Copyright 2026 The pkse Authors.
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

#ifndef PKSE_CLI_H_
#define PKSE_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace pkse {

// Exit statuses of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitParameter = 3;
inline constexpr int kExitProtocol = 4;

// Runs one command line (without the program name). Subcommands: keygen,
// index-gen, query, repro, sweep, repair.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace pkse

#endif  // PKSE_CLI_H_
