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

#ifndef MIMOGEN_RAYIO_HPP
#define MIMOGEN_RAYIO_HPP

#include "mimogen/tracer.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace mimogen
{

// Ray file: the per-base-station interchange between tracer and channel
// builder. All fields little-endian.
//
//   offset  size  field
//        0     4  magic "DMRF"
//        4     4  version (u32, = 1)
//        8     4  bs_id (u32)
//       12     8  carrier_freq (f64, Hz)
//       20     8  user_count (u64)
//       28    32  scenario name, UTF-8, zero padded
//       60     4  reserved, zero
//
// then user_count records of
//   global_index u64, position 3 x f64 (m), n_paths u16,
//   n_paths x { aod_az, aod_el, aoa_az, aoa_el (f64 deg), power (f64 W),
//               phase (f64 rad), delay (f64 s), n_reflections u16 }
inline constexpr std::size_t kRayHeaderBytes = 64;
inline constexpr std::size_t kRayUserBytes = 34;
inline constexpr std::size_t kRayPathBytes = 58;
inline constexpr std::uint32_t kRayFileVersion = 1;

struct RayFileHeader
{
    std::uint32_t version = kRayFileVersion;
    std::uint32_t bs_id = 0;
    double carrier_freq = 0.0;
    std::uint64_t user_count = 0;
    std::string scenario_name;

    friend bool operator==(const RayFileHeader &, const RayFileHeader &) = default;
};

struct RayFile
{
    RayFileHeader header;
    std::vector<PathList> records; // ascending user_index

    // Binary search by global user index; nullptr when absent.
    const PathList *find(std::uint64_t user_index) const noexcept;

    friend bool operator==(const RayFile &, const RayFile &) = default;
};

struct Violation
{
    std::size_t record = 0; // index into records; header problems use SIZE_MAX
    std::string field;
    std::string rule;

    std::string to_string() const;
};

inline constexpr std::size_t kHeaderRecord = static_cast<std::size_t>(-1);

// Checks every structural and physical invariant. Never throws.
std::vector<Violation> validate_rayfile(const RayFile &rf);

// Serialises `records` with a header built from `meta` (user_count is taken
// from records.size()). Throws ValidationError if records are unsorted or
// violate validate_rayfile, IoError if the stream fails. Returns the number
// of bytes written.
std::size_t write_rayfile(std::span<const PathList> records, const RayFileHeader &meta, std::ostream &sink);
std::vector<std::uint8_t> encode_rayfile(std::span<const PathList> records, const RayFileHeader &meta);

// Throws FormatError (bad magic), UnsupportedVersionError, CorruptionError
// (truncation or trailing bytes, with offset) or SemanticError (first
// violated invariant, naming the record). Never returns partial data.
RayFile read_rayfile(std::span<const std::uint8_t> bytes);
RayFile read_rayfile(std::istream &source);
RayFile read_rayfile(const std::filesystem::path &path);

// Structural decode only: FormatError / UnsupportedVersionError /
// CorruptionError, but no semantic checks. For reporting every violation.
RayFile decode_rayfile(std::span<const std::uint8_t> bytes);

// Human-readable CSV dump for small debug files, one line per path.
void write_rayfile_csv(const RayFile &rf, std::ostream &sink);

} // namespace mimogen

#endif // MIMOGEN_RAYIO_HPP
