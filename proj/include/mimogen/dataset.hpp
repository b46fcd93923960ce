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

#ifndef MIMOGEN_DATASET_HPP
#define MIMOGEN_DATASET_HPP

#include "mimogen/channel.hpp"
#include "mimogen/exec.hpp"
#include "mimogen/params.hpp"
#include "mimogen/progress.hpp"
#include "mimogen/rayio.hpp"
#include "mimogen/scene.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace mimogen
{

struct UserChannel
{
    std::uint64_t global_index = 0;
    Vec3 location;
    ChannelMatrix channel;

    friend bool operator==(const UserChannel &, const UserChannel &) = default;
};

struct BsChannels
{
    std::uint32_t bs_id = 0;
    std::vector<UserChannel> users; // active-user enumeration order

    friend bool operator==(const BsChannels &, const BsChannels &) = default;
};

// A (bs, user) pair that had no ray record; its channel is all zeros.
struct Gap
{
    std::uint32_t bs_id = 0;
    std::uint64_t user_index = 0;
};

struct Dataset
{
    ParamSet params;
    std::string scenario_name;
    std::vector<std::uint32_t> subcarriers;
    std::vector<BsChannels> per_bs; // active_BS order
    std::vector<Gap> gaps;

    std::size_t num_bs() const noexcept { return per_bs.size(); }
    std::size_t num_users() const noexcept { return per_bs.empty() ? 0 : per_bs.front().users.size(); }
};

// Maps 1-based ordinals (b-bar, u-bar) to base station ids and global user
// indices.
class DatasetIndex
{
public:
    explicit DatasetIndex(const Dataset &ds);

    // Throw BoundsError reporting the valid range.
    std::uint32_t bs_id(std::size_t bs_ordinal) const;
    std::uint64_t user_index(std::size_t user_ordinal) const;
    // Inverse maps; throw LookupError when the id is not active.
    std::size_t bs_ordinal(std::uint32_t bs_id) const;
    std::size_t user_ordinal(std::uint64_t user_index) const;

    std::size_t num_bs() const noexcept { return bs_ids_.size(); }
    std::size_t num_users() const noexcept { return user_indices_.size(); }

private:
    std::vector<std::uint32_t> bs_ids_;
    std::vector<std::uint64_t> user_indices_;
};

// Builds every active (bs, user) channel matrix. `rays` must contain one
// file per active BS (any order). Work is split across users and BSs through
// `parallel`. Throws MissingInputError naming the BS when a file is missing,
// ConsistencyError when scenario names disagree.
Dataset build_dataset(std::span<const RayFile> rays, const ParamSet &params, const Scene &scene,
                      const ParallelFor &parallel = serial_executor(), ProgressReporter *progress = nullptr);

// 1-based ordinals. Throw BoundsError reporting the valid ranges.
const ChannelMatrix &get_channel(const Dataset &ds, std::size_t bs_ordinal, std::size_t user_ordinal);
const Vec3 &get_location(const Dataset &ds, std::size_t bs_ordinal, std::size_t user_ordinal);

// Binary shard, one per active BS (little-endian):
//
//   magic "DMDS" | version u32 (=1) | bs_id u32 | bs_ordinal u32 |
//   scenario name 32 bytes | user_count u64 |
//   n_active u32 | active ids u32 x n_active |
//   active_user_first u32 | active_user_last u32 |
//   num_ant_x u32 | num_ant_y u32 | num_ant_z u32 |
//   ant_spacing f64 | bandwidth f64 (GHz) |
//   num_OFDM u32 | OFDM_sampling_factor u32 | OFDM_limit u32 | num_paths u32
//
// followed by user_count records of
//   global_index u64 | location 3 x f64 | M*|K| complex entries as (re, im)
//   f64 pairs, column-major.
//
// Size = 112 + 4*n_active + user_count * (32 + 16*M*|K|).
inline constexpr std::uint32_t kShardVersion = 1;
std::size_t shard_size_bytes(const ParamSet &params, std::size_t user_count);
std::vector<std::uint8_t> encode_shard(const Dataset &ds, std::size_t bs_ordinal);

struct DecodedShard
{
    std::uint32_t bs_id = 0;
    std::uint32_t bs_ordinal = 0;
    std::string scenario_name;
    ParamSet params;
    std::vector<UserChannel> users;
};

// Throws FormatError / UnsupportedVersionError / CorruptionError /
// SemanticError.
DecodedShard decode_shard(std::span<const std::uint8_t> bytes);

enum class ExportFormat
{
    binary,
    csv,
};

struct ManifestEntry
{
    std::string filename;
    std::uint32_t bs_id = 0;
    std::uint64_t first_user = 0; // 0 when the shard has no users
    std::uint64_t last_user = 0;
    std::uint64_t byte_size = 0;
    std::uint64_t hash = 0; // FNV-1a 64 over the file bytes

    friend bool operator==(const ManifestEntry &, const ManifestEntry &) = default;
};

// Text manifest. Comment lines start with '#', `format <binary|csv>` and
// `scenario <name>` lines carry metadata, every other line is
// `filename bs_id first_user last_user byte_size hash_hex`.
struct Manifest
{
    ExportFormat format = ExportFormat::binary;
    std::string scenario_name;
    std::vector<ManifestEntry> entries;

    std::string to_text() const;
    static Manifest parse(std::string_view text);
    // FNV-1a 64 of to_text(): one hash for the whole export.
    std::uint64_t content_hash() const;
};

inline constexpr const char *kManifestName = "manifest.txt";
// CSV export is refused above this many complex channel entries in total.
inline constexpr std::size_t kCsvEntryCap = 4'000'000;

// Writes shards (or CSV files) and manifest.txt into `dir` (created if
// needed). Each file goes through write-to-temp-then-rename; the manifest is
// written last.
Manifest export_dataset(const Dataset &ds, const std::filesystem::path &dir, ExportFormat format);

// Reads a binary export back, verifying sizes and hashes against the
// manifest. Gaps are not recorded in the export and come back empty.
Dataset import_dataset(const std::filesystem::path &dir);

} // namespace mimogen

#endif // MIMOGEN_DATASET_HPP
