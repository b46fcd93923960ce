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

#ifndef MIMOGEN_BINIO_HPP
#define MIMOGEN_BINIO_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mimogen
{

// Little-endian serialisation into a growable byte buffer.
class ByteWriter
{
public:
    void put_u16(std::uint16_t v);
    void put_u32(std::uint32_t v);
    void put_u64(std::uint64_t v);
    void put_f64(double v);
    void put_bytes(std::span<const std::uint8_t> bytes);
    void put_magic(std::string_view magic);
    // Writes `text` into a field of exactly `width` bytes, zero padded.
    // Throws ValidationError if it does not fit.
    void put_fixed_string(std::string_view text, std::size_t width);
    void put_zeros(std::size_t count);

    std::size_t size() const noexcept { return buf_.size(); }
    const std::vector<std::uint8_t> &bytes() const noexcept { return buf_; }
    std::vector<std::uint8_t> take() noexcept { return std::move(buf_); }
    void reserve(std::size_t n) { buf_.reserve(n); }

private:
    std::vector<std::uint8_t> buf_;
};

// Bounds-checked little-endian reader over a byte span. Every read past the
// end throws CorruptionError carrying the offset where the read started.
class ByteReader
{
public:
    explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

    std::uint16_t get_u16();
    std::uint32_t get_u32();
    std::uint64_t get_u64();
    double get_f64();
    std::string get_fixed_string(std::size_t width);
    void skip(std::size_t count);
    bool magic_matches(std::string_view magic) const;

    std::size_t offset() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return data_.size() - pos_; }
    bool at_end() const noexcept { return pos_ == data_.size(); }

private:
    void require(std::size_t count, const char *what) const;

    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

} // namespace mimogen

#endif // MIMOGEN_BINIO_HPP
