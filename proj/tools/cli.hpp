// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef MIMOGEN_TOOLS_CLI_HPP
#define MIMOGEN_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace mimogen::cli
{

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1; // validation failure or runtime error
inline constexpr int kExitUsage = 2;

// Environment variable naming the default output directory.
inline constexpr const char *kOutDirEnv = "MIMOGEN_OUT_DIR";

// Entry point shared by the executable and the tests. `args` excludes the
// program name. Data goes only to declared output files; diagnostics and
// progress lines go to `err`, help text to `out`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace mimogen::cli

#endif // MIMOGEN_TOOLS_CLI_HPP
