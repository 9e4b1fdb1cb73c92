// Copyright 2026 The relunet Authors
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

#ifndef RELUNET_CLI_HPP_
#define RELUNET_CLI_HPP_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace relunet {

inline constexpr int kExitOk = 0;
inline constexpr int kExitClaimFailed = 1;
inline constexpr int kExitRefused = 2;
inline constexpr int kExitUsage = 64;

// Output directory override; takes precedence over config files, not over --out.
inline constexpr const char* kOutputDirEnv = "RELUNET_OUTPUT_DIR";

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string sha256_hex(std::string_view bytes);

}  // namespace relunet

#endif  // RELUNET_CLI_HPP_
