// Copyright 2026 The mecplace Authors.
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

#ifndef MECPLACE_TOOLS_CLI_HPP
#define MECPLACE_TOOLS_CLI_HPP

#include <ostream>

namespace mecplace::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,   // bad flags or out-of-range arguments
  kExitParse = 2,   // malformed config, instance or solution file
  kExitSolve = 3,   // solver failure, or failed experiment runs
  kExitLimit = 4,   // exact search hit its node limit
  kExitIo = 5,      // unreadable input or unwritable output
};

// Entry point of the `mecplace` tool, with the output streams injectable for
// tests. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mecplace::cli

#endif  // MECPLACE_TOOLS_CLI_HPP
