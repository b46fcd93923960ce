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

#include "mimogen/dataset.hpp"

#include "mimogen/atomic_file.hpp"
#include "mimogen/binio.hpp"
#include "mimogen/error.hpp"
#include "mimogen/hash.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mimogen
{

namespace fs = std::filesystem;

namespace
{

constexpr std::string_view kShardMagic = "DMDS";

std::string shard_name(std::uint32_t bs_id, ExportFormat format)
{
    return "bs_" + std::to_string(bs_id) + (format == ExportFormat::binary ? ".dmds" : "_channels.csv");
}

} // namespace

DatasetIndex::DatasetIndex(const Dataset &ds)
{
    for (const auto &b : ds.per_bs)
        bs_ids_.push_back(b.bs_id);
    if (!ds.per_bs.empty())
        for (const auto &u : ds.per_bs.front().users)
            user_indices_.push_back(u.global_index);
}

std::uint32_t DatasetIndex::bs_id(std::size_t bs_ordinal) const
{
    if (bs_ordinal < 1 || bs_ordinal > bs_ids_.size())
        throw BoundsError("BS ordinal " + std::to_string(bs_ordinal) + " outside 1.." +
                          std::to_string(bs_ids_.size()));
    return bs_ids_[bs_ordinal - 1];
}

std::uint64_t DatasetIndex::user_index(std::size_t user_ordinal) const
{
    if (user_ordinal < 1 || user_ordinal > user_indices_.size())
        throw BoundsError("user ordinal " + std::to_string(user_ordinal) + " outside 1.." +
                          std::to_string(user_indices_.size()));
    return user_indices_[user_ordinal - 1];
}

std::size_t DatasetIndex::bs_ordinal(std::uint32_t bs_id) const
{
    auto it = std::find(bs_ids_.begin(), bs_ids_.end(), bs_id);
    if (it == bs_ids_.end())
        throw LookupError("base station " + std::to_string(bs_id) + " is not active in this dataset");
    return static_cast<std::size_t>(it - bs_ids_.begin()) + 1;
}

std::size_t DatasetIndex::user_ordinal(std::uint64_t user_index) const
{
    auto it = std::lower_bound(user_indices_.begin(), user_indices_.end(), user_index);
    if (it == user_indices_.end() || *it != user_index)
        throw LookupError("user " + std::to_string(user_index) + " is not active in this dataset");
    return static_cast<std::size_t>(it - user_indices_.begin()) + 1;
}

Dataset build_dataset(std::span<const RayFile> rays, const ParamSet &params, const Scene &scene,
                      const ParallelFor &parallel, ProgressReporter *progress)
{
    validate_params(params);
    Dataset ds;
    ds.params = params;
    ds.scenario_name = scene.name;
    ds.subcarriers = subcarrier_set(params);

    std::vector<const RayFile *> sources;
    for (auto bs_id : params.active_bs)
    {
        auto it = std::find_if(rays.begin(), rays.end(), [&](const RayFile &rf) { return rf.header.bs_id == bs_id; });
        if (it == rays.end())
            throw MissingInputError("no ray file for active base station " + std::to_string(bs_id), bs_id);
        if (it->header.scenario_name != scene.name)
            throw ConsistencyError("ray file for base station " + std::to_string(bs_id) + " belongs to scenario '" +
                                   it->header.scenario_name + "', expected '" + scene.name + "'");
        sources.push_back(&*it);
    }

    const auto [first_user, last_user] = user_span_for_rows(scene, params.active_user_first, params.active_user_last);
    const std::size_t n_users = last_user - first_user + 1;
    const std::size_t n_bs = sources.size();
    const std::size_t rows = params.num_antennas();

    ds.per_bs.resize(n_bs);
    for (std::size_t b = 0; b < n_bs; ++b)
    {
        ds.per_bs[b].bs_id = params.active_bs[b];
        ds.per_bs[b].users.resize(n_users);
    }
    std::vector<char> missing(n_bs * n_users, 0);

    parallel(n_bs * n_users, [&](std::size_t item) {
        const std::size_t b = item / n_users;
        const std::size_t u = item % n_users;
        const std::uint64_t user = first_user + u;
        auto &slot = ds.per_bs[b].users[u];
        slot.global_index = user;
        slot.location = user_at(scene, user).position;
        if (const PathList *pl = sources[b]->find(user))
        {
            slot.channel = channel_matrix(*pl, params, ds.subcarriers);
        }
        else
        {
            slot.channel = ChannelMatrix(rows, ds.subcarriers.size());
            missing[item] = 1;
        }
        slot.channel.bs_id = ds.per_bs[b].bs_id;
        slot.channel.user_index = user;
        if (progress != nullptr)
            progress->tick();
    });

    for (std::size_t item = 0; item < missing.size(); ++item)
        if (missing[item])
            ds.gaps.push_back({ds.per_bs[item / n_users].bs_id, first_user + item % n_users});
    return ds;
}

namespace
{

void check_ordinals(const Dataset &ds, std::size_t b, std::size_t u)
{
    if (b < 1 || b > ds.num_bs() || u < 1 || u > ds.num_users())
        throw BoundsError("ordinal (" + std::to_string(b) + ", " + std::to_string(u) + ") outside valid ranges BS 1.." +
                          std::to_string(ds.num_bs()) + ", user 1.." + std::to_string(ds.num_users()));
}

} // namespace

const ChannelMatrix &get_channel(const Dataset &ds, std::size_t bs_ordinal, std::size_t user_ordinal)
{
    check_ordinals(ds, bs_ordinal, user_ordinal);
    return ds.per_bs[bs_ordinal - 1].users[user_ordinal - 1].channel;
}

const Vec3 &get_location(const Dataset &ds, std::size_t bs_ordinal, std::size_t user_ordinal)
{
    check_ordinals(ds, bs_ordinal, user_ordinal);
    return ds.per_bs[bs_ordinal - 1].users[user_ordinal - 1].location;
}

std::size_t shard_size_bytes(const ParamSet &params, std::size_t user_count)
{
    const std::size_t entries = params.num_antennas() * params.ofdm_limit;
    return 112 + 4 * params.active_bs.size() + user_count * (32 + 16 * entries);
}

std::vector<std::uint8_t> encode_shard(const Dataset &ds, std::size_t bs_ordinal)
{
    if (bs_ordinal < 1 || bs_ordinal > ds.num_bs())
        throw BoundsError("BS ordinal " + std::to_string(bs_ordinal) + " outside 1.." + std::to_string(ds.num_bs()));
    const auto &shard = ds.per_bs[bs_ordinal - 1];
    const auto &p = ds.params;

    ByteWriter w;
    w.reserve(shard_size_bytes(p, shard.users.size()));
    w.put_magic(kShardMagic);
    w.put_u32(kShardVersion);
    w.put_u32(shard.bs_id);
    w.put_u32(static_cast<std::uint32_t>(bs_ordinal));
    w.put_fixed_string(ds.scenario_name, 32);
    w.put_u64(shard.users.size());
    w.put_u32(static_cast<std::uint32_t>(p.active_bs.size()));
    for (auto id : p.active_bs)
        w.put_u32(id);
    w.put_u32(p.active_user_first);
    w.put_u32(p.active_user_last);
    w.put_u32(p.num_ant_x);
    w.put_u32(p.num_ant_y);
    w.put_u32(p.num_ant_z);
    w.put_f64(p.ant_spacing);
    w.put_f64(p.bandwidth);
    w.put_u32(p.num_ofdm);
    w.put_u32(p.ofdm_sampling_factor);
    w.put_u32(p.ofdm_limit);
    w.put_u32(p.num_paths);

    const std::size_t rows = p.num_antennas();
    const std::size_t cols = p.ofdm_limit;
    for (const auto &u : shard.users)
    {
        if (u.channel.rows() != rows || u.channel.cols() != cols)
            throw DimensionError("user " + std::to_string(u.global_index) + " channel is " +
                                 std::to_string(u.channel.rows()) + "x" + std::to_string(u.channel.cols()) +
                                 ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
        w.put_u64(u.global_index);
        w.put_f64(u.location.x);
        w.put_f64(u.location.y);
        w.put_f64(u.location.z);
        for (const auto &v : u.channel.data())
        {
            w.put_f64(v.real());
            w.put_f64(v.imag());
        }
    }
    return w.take();
}

DecodedShard decode_shard(std::span<const std::uint8_t> bytes)
{
    ByteReader r(bytes);
    if (!r.magic_matches(kShardMagic))
        throw FormatError("not a dataset shard (bad magic)");
    r.skip(4);
    const auto version = r.get_u32();
    if (version != kShardVersion)
        throw UnsupportedVersionError("unsupported dataset shard version " + std::to_string(version), version);

    DecodedShard out;
    out.bs_id = r.get_u32();
    out.bs_ordinal = r.get_u32();
    out.scenario_name = r.get_fixed_string(32);
    const auto user_count = r.get_u64();
    const auto n_active = r.get_u32();
    if (n_active > r.remaining() / 4)
        throw CorruptionError("declared active BS count exceeds input", r.offset() - 4);
    auto &p = out.params;
    p.active_bs.resize(n_active);
    for (auto &id : p.active_bs)
        id = r.get_u32();
    p.active_user_first = r.get_u32();
    p.active_user_last = r.get_u32();
    p.num_ant_x = r.get_u32();
    p.num_ant_y = r.get_u32();
    p.num_ant_z = r.get_u32();
    p.ant_spacing = r.get_f64();
    p.bandwidth = r.get_f64();
    p.num_ofdm = r.get_u32();
    p.ofdm_sampling_factor = r.get_u32();
    p.ofdm_limit = r.get_u32();
    p.num_paths = r.get_u32();

    try
    {
        subcarrier_set(p);
    }
    catch (const ValidationError &e)
    {
        throw SemanticError(std::string("shard parameter block: ") + e.what(), 0);
    }
    if (out.bs_ordinal < 1 || out.bs_ordinal > n_active || p.active_bs[out.bs_ordinal - 1] != out.bs_id)
        throw SemanticError("shard bs_id/ordinal inconsistent with its active_BS list", 0);

    const std::size_t rows = p.num_antennas();
    const std::size_t cols = p.ofdm_limit;
    // Overflow-safe: rows and cols are each < 2^32, entries < 2^64 / 16 for
    // any array that could fit in memory; check against remaining input.
    const long double record_bytes = 32.0L + 16.0L * static_cast<long double>(rows) * cols;
    if (static_cast<long double>(user_count) * record_bytes != static_cast<long double>(r.remaining()))
        throw CorruptionError("shard payload size does not match " + std::to_string(user_count) + " users of " +
                                  std::to_string(rows) + "x" + std::to_string(cols) + " channels",
                              r.offset());

    out.users.reserve(user_count);
    for (std::uint64_t i = 0; i < user_count; ++i)
    {
        UserChannel u;
        u.global_index = r.get_u64();
        u.location.x = r.get_f64();
        u.location.y = r.get_f64();
        u.location.z = r.get_f64();
        if (i > 0 && u.global_index <= out.users.back().global_index)
            throw SemanticError("shard record " + std::to_string(i) + ": users not in ascending order", i);
        u.channel = ChannelMatrix(rows, cols);
        u.channel.bs_id = out.bs_id;
        u.channel.user_index = u.global_index;
        for (auto &v : u.channel.data())
        {
            const double re = r.get_f64();
            const double im = r.get_f64();
            if (!std::isfinite(re) || !std::isfinite(im))
                throw SemanticError("shard record " + std::to_string(i) + ": non-finite channel entry", i);
            v = {re, im};
        }
        out.users.push_back(std::move(u));
    }
    return out;
}

std::string Manifest::to_text() const
{
    std::ostringstream os;
    os << "# mimogen dataset manifest v1\n";
    os << "# columns: filename bs_id first_user last_user byte_size fnv1a64\n";
    os << "format " << (format == ExportFormat::binary ? "binary" : "csv") << '\n';
    os << "scenario " << scenario_name << '\n';
    for (const auto &e : entries)
        os << e.filename << ' ' << e.bs_id << ' ' << e.first_user << ' ' << e.last_user << ' ' << e.byte_size << ' '
           << hash_hex(e.hash) << '\n';
    return os.str();
}

Manifest Manifest::parse(std::string_view text)
{
    Manifest m;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream ls(line);
        std::string first;
        ls >> first;
        if (first == "format")
        {
            std::string f;
            ls >> f;
            if (f == "binary")
                m.format = ExportFormat::binary;
            else if (f == "csv")
                m.format = ExportFormat::csv;
            else
                throw FormatError("manifest line " + std::to_string(line_no) + ": unknown format '" + f + "'");
            continue;
        }
        if (first == "scenario")
        {
            std::getline(ls >> std::ws, m.scenario_name);
            continue;
        }
        ManifestEntry e;
        e.filename = first;
        std::string hash;
        if (!(ls >> e.bs_id >> e.first_user >> e.last_user >> e.byte_size >> hash) || hash.size() != 16)
            throw FormatError("manifest line " + std::to_string(line_no) + ": malformed entry");
        if (e.filename.find('/') != std::string::npos || e.filename == "..")
            throw FormatError("manifest line " + std::to_string(line_no) + ": filename must be a plain name");
        std::size_t used = 0;
        try
        {
            e.hash = std::stoull(hash, &used, 16);
        }
        catch (const std::exception &)
        {
            used = 0;
        }
        if (used != 16)
            throw FormatError("manifest line " + std::to_string(line_no) + ": bad hash '" + hash + "'");
        m.entries.push_back(std::move(e));
    }
    return m;
}

std::uint64_t Manifest::content_hash() const { return fnv1a64(to_text()); }

Manifest export_dataset(const Dataset &ds, const fs::path &dir, ExportFormat format)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());

    Manifest m;
    m.format = format;
    m.scenario_name = ds.scenario_name;

    auto record = [&](const std::string &name, std::uint32_t bs_id, const BsChannels *shard,
                      std::span<const std::uint8_t> bytes) {
        write_file_atomic(dir / name, bytes);
        ManifestEntry e;
        e.filename = name;
        e.bs_id = bs_id;
        if (shard != nullptr && !shard->users.empty())
        {
            e.first_user = shard->users.front().global_index;
            e.last_user = shard->users.back().global_index;
        }
        e.byte_size = bytes.size();
        e.hash = fnv1a64(bytes);
        m.entries.push_back(std::move(e));
    };

    if (format == ExportFormat::binary)
    {
        for (std::size_t b = 1; b <= ds.num_bs(); ++b)
        {
            auto bytes = encode_shard(ds, b);
            record(shard_name(ds.per_bs[b - 1].bs_id, format), ds.per_bs[b - 1].bs_id, &ds.per_bs[b - 1], bytes);
        }
    }
    else
    {
        std::size_t total = 0;
        for (const auto &shard : ds.per_bs)
            for (const auto &u : shard.users)
                total += u.channel.data().size();
        if (total > kCsvEntryCap)
            throw ValidationError("CSV export refused: " + std::to_string(total) +
                                  " channel entries exceed the cap of " + std::to_string(kCsvEntryCap) +
                                  "; use the binary format");
        for (const auto &shard : ds.per_bs)
        {
            std::ostringstream os;
            os.precision(17);
            os << "user_index,antenna,subcarrier,re,im\n";
            for (const auto &u : shard.users)
                for (std::size_t c = 0; c < u.channel.cols(); ++c)
                    for (std::size_t r = 0; r < u.channel.rows(); ++r)
                        os << u.global_index << ',' << r + 1 << ',' << ds.subcarriers.at(c) << ','
                           << u.channel(r, c).real() << ',' << u.channel(r, c).imag() << '\n';
            const std::string text = os.str();
            record(shard_name(shard.bs_id, format), shard.bs_id, &shard,
                   std::span(reinterpret_cast<const std::uint8_t *>(text.data()), text.size()));
        }
        std::ostringstream loc;
        loc.precision(17);
        loc << "user_index,x,y,z\n";
        if (!ds.per_bs.empty())
            for (const auto &u : ds.per_bs.front().users)
                loc << u.global_index << ',' << u.location.x << ',' << u.location.y << ',' << u.location.z << '\n';
        const std::string text = loc.str();
        record("locations.csv", 0, nullptr, std::span(reinterpret_cast<const std::uint8_t *>(text.data()), text.size()));
    }
    write_file_atomic(dir / kManifestName, m.to_text());
    return m;
}

Dataset import_dataset(const fs::path &dir)
{
    const Manifest m = Manifest::parse(read_file_text(dir / kManifestName));
    if (m.format != ExportFormat::binary)
        throw FormatError("only binary dataset exports can be imported");

    Dataset ds;
    ds.scenario_name = m.scenario_name;
    for (std::size_t i = 0; i < m.entries.size(); ++i)
    {
        const auto &e = m.entries[i];
        const auto bytes = read_file_bytes(dir / e.filename);
        if (bytes.size() != e.byte_size)
            throw CorruptionError(e.filename + ": size " + std::to_string(bytes.size()) +
                                      " does not match manifest size " + std::to_string(e.byte_size),
                                  std::min<std::size_t>(bytes.size(), e.byte_size));
        if (fnv1a64(bytes) != e.hash)
            throw ConsistencyError(e.filename + ": content hash does not match manifest");
        auto shard = decode_shard(bytes);
        if (i == 0)
            ds.params = shard.params;
        else if (!(shard.params == ds.params))
            throw ConsistencyError(e.filename + ": parameter block differs from the first shard");
        if (shard.scenario_name != ds.scenario_name)
            throw ConsistencyError(e.filename + ": scenario '" + shard.scenario_name + "' differs from manifest '" +
                                   ds.scenario_name + "'");
        if (shard.bs_id != e.bs_id || shard.bs_ordinal != i + 1)
            throw ConsistencyError(e.filename + ": BS id/ordinal differs from manifest order");
        if (i > 0 && shard.users.size() != ds.per_bs.front().users.size())
            throw ConsistencyError(e.filename + ": user count differs from the first shard");
        ds.per_bs.push_back({shard.bs_id, std::move(shard.users)});
    }
    if (ds.per_bs.size() != ds.params.active_bs.size())
        throw ConsistencyError("manifest lists " + std::to_string(ds.per_bs.size()) + " shards but parameters name " +
                               std::to_string(ds.params.active_bs.size()) + " active BSs");
    ds.subcarriers = subcarrier_set(ds.params);
    return ds;
}

} // namespace mimogen
