// Copyright 2026 The MDRD Authors. All Rights Reserved.
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


#ifndef MDRD_CLI_APP_HPP_
#define MDRD_CLI_APP_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace mdrd::cli {

enum ExitCode : int { kOk = 0, kRuntimeError = 1, kUsageError = 2 };

/// Runs one command line (args[0] is the program name). Human-readable
/// summaries go to `out`, diagnostics to `err`, results to files.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace mdrd::cli

#endif  // MDRD_CLI_APP_HPP_
