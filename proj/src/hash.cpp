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

#include "mimogen/hash.hpp"

#include <cstdio>

namespace mimogen
{

void Fnv1a64::update(std::span<const std::uint8_t> bytes) noexcept
{
    for (auto b : bytes)
    {
        state_ ^= b;
        state_ *= prime;
    }
}

void Fnv1a64::update(std::string_view text) noexcept
{
    for (char c : text)
    {
        state_ ^= static_cast<std::uint8_t>(c);
        state_ *= prime;
    }
}

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) noexcept
{
    Fnv1a64 h;
    h.update(bytes);
    return h.digest();
}

std::uint64_t fnv1a64(std::string_view text) noexcept
{
    Fnv1a64 h;
    h.update(text);
    return h.digest();
}

std::string hash_hex(std::uint64_t h)
{
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace mimogen
