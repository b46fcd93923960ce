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

#include "mimogen/binio.hpp"

#include "mimogen/error.hpp"

#include <bit>
#include <cstring>

namespace mimogen
{

namespace
{

template <typename U>
void put_le(std::vector<std::uint8_t> &buf, U v)
{
    for (std::size_t i = 0; i < sizeof(U); ++i)
        buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

template <typename U>
U get_le(const std::uint8_t *p)
{
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i)
        v |= static_cast<U>(p[i]) << (8 * i);
    return v;
}

} // namespace

void ByteWriter::put_u16(std::uint16_t v) { put_le(buf_, v); }
void ByteWriter::put_u32(std::uint32_t v) { put_le(buf_, v); }
void ByteWriter::put_u64(std::uint64_t v) { put_le(buf_, v); }
void ByteWriter::put_f64(double v) { put_le(buf_, std::bit_cast<std::uint64_t>(v)); }

void ByteWriter::put_bytes(std::span<const std::uint8_t> bytes)
{
    buf_.insert(buf_.end(), bytes.begin(), bytes.end());
}

void ByteWriter::put_magic(std::string_view magic)
{
    for (char c : magic)
        buf_.push_back(static_cast<std::uint8_t>(c));
}

void ByteWriter::put_fixed_string(std::string_view text, std::size_t width)
{
    if (text.size() > width)
        throw ValidationError("string '" + std::string(text) + "' exceeds its " + std::to_string(width) +
                              "-byte field");
    if (text.find('\0') != std::string_view::npos)
        throw ValidationError("string field must not contain NUL bytes");
    put_magic(text);
    put_zeros(width - text.size());
}

void ByteWriter::put_zeros(std::size_t count) { buf_.insert(buf_.end(), count, 0); }

void ByteReader::require(std::size_t count, const char *what) const
{
    if (remaining() < count)
        throw CorruptionError(std::string("truncated input while reading ") + what, pos_);
}

std::uint16_t ByteReader::get_u16()
{
    require(2, "u16");
    auto v = get_le<std::uint16_t>(data_.data() + pos_);
    pos_ += 2;
    return v;
}

std::uint32_t ByteReader::get_u32()
{
    require(4, "u32");
    auto v = get_le<std::uint32_t>(data_.data() + pos_);
    pos_ += 4;
    return v;
}

std::uint64_t ByteReader::get_u64()
{
    require(8, "u64");
    auto v = get_le<std::uint64_t>(data_.data() + pos_);
    pos_ += 8;
    return v;
}

double ByteReader::get_f64()
{
    require(8, "f64");
    auto v = get_le<std::uint64_t>(data_.data() + pos_);
    pos_ += 8;
    return std::bit_cast<double>(v);
}

std::string ByteReader::get_fixed_string(std::size_t width)
{
    require(width, "fixed string");
    const char *p = reinterpret_cast<const char *>(data_.data() + pos_);
    std::size_t len = 0;
    while (len < width && p[len] != '\0')
        ++len;
    pos_ += width;
    return std::string(p, len);
}

void ByteReader::skip(std::size_t count)
{
    require(count, "padding");
    pos_ += count;
}

bool ByteReader::magic_matches(std::string_view magic) const
{
    if (remaining() < magic.size())
        return false;
    return std::memcmp(data_.data() + pos_, magic.data(), magic.size()) == 0;
}

} // namespace mimogen
