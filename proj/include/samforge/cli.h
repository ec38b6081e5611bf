/*
 * Copyright 2026 The samforge Authors.
 *
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

#ifndef SAMFORGE_CLI_H_
#define SAMFORGE_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace samforge {

inline constexpr const char* kVersion = "0.1.0";

// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitData = 3,
  kExitUndefinedMetric = 4,
};

// Runs one subcommand. `args` excludes the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int Dispatch(int argc, char** argv);

}  // namespace samforge

#endif  // SAMFORGE_CLI_H_
