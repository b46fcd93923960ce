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

#ifndef MIMOGEN_HASH_HPP
#define MIMOGEN_HASH_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace mimogen
{

// 64-bit FNV-1a. This is the content hash pinned for manifests; changing it
// invalidates every manifest ever written.
class Fnv1a64
{
public:
    static constexpr std::uint64_t offset_basis = 0xcbf29ce484222325ULL;
    static constexpr std::uint64_t prime = 0x100000001b3ULL;

    void update(std::span<const std::uint8_t> bytes) noexcept;
    void update(std::string_view text) noexcept;
    std::uint64_t digest() const noexcept { return state_; }

private:
    std::uint64_t state_ = offset_basis;
};

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) noexcept;
std::uint64_t fnv1a64(std::string_view text) noexcept;

// 16 lowercase hex digits.
std::string hash_hex(std::uint64_t h);

} // namespace mimogen

#endif // MIMOGEN_HASH_HPP
