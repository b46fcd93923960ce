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

#ifndef MIMOGEN_ATOMIC_FILE_HPP
#define MIMOGEN_ATOMIC_FILE_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace mimogen
{

// Writes to "<path>.tmp.<pid>" and renames over `path` once the data is
// flushed, so readers never observe a partially written file.
void write_file_atomic(const std::filesystem::path &path, std::span<const std::uint8_t> bytes);
void write_file_atomic(const std::filesystem::path &path, std::string_view text);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path &path);
std::string read_file_text(const std::filesystem::path &path);

} // namespace mimogen

#endif // MIMOGEN_ATOMIC_FILE_HPP
