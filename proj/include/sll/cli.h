// Copyright 2026 The sll Authors.
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

#ifndef SLL_CLI_H_
#define SLL_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace sll::cli {

// Exit statuses of Run.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitData = 4;
inline constexpr int kExitSolver = 5;

// Executes one subcommand (fit, predict, cv, sweep, synth, friedman).
// `args` excludes the program name. Failures print a single line
// "error: kind=<kind> message=<text>" to `err`.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace sll::cli

#endif  // SLL_CLI_H_
