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

#include "mimogen/rayio.hpp"

#include "mimogen/atomic_file.hpp"
#include "mimogen/binio.hpp"
#include "mimogen/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <iterator>
#include <limits>
#include <numbers>
#include <ostream>

namespace mimogen
{

namespace
{

constexpr std::string_view kMagic = "DMRF";

void check_path(const PathRecord &p, std::size_t record, std::size_t path, std::vector<Violation> &out)
{
    const std::string tag = "paths[" + std::to_string(path) + "].";
    auto angle = [&](double v, const char *name, double lo, double hi, const char *rule) {
        if (!(v >= lo && v <= hi))
            out.push_back({record, tag + name, rule});
    };
    angle(p.aod_az, "aod_az", std::nextafter(-180.0, 0.0), 180.0, "azimuth in (-180, 180]");
    angle(p.aoa_az, "aoa_az", std::nextafter(-180.0, 0.0), 180.0, "azimuth in (-180, 180]");
    angle(p.aod_el, "aod_el", 0.0, 180.0, "elevation in [0, 180]");
    angle(p.aoa_el, "aoa_el", 0.0, 180.0, "elevation in [0, 180]");
    if (!(p.power > 0.0) || !std::isfinite(p.power))
        out.push_back({record, tag + "power", "power > 0"});
    if (!(p.delay > 0.0) || !std::isfinite(p.delay))
        out.push_back({record, tag + "delay", "delay > 0"});
    if (!(p.phase >= 0.0 && p.phase < 2.0 * std::numbers::pi))
        out.push_back({record, tag + "phase", "phase in [0, 2*pi)"});
}

void encode_into(ByteWriter &w, std::span<const PathList> records, const RayFileHeader &meta)
{
    w.put_magic(kMagic);
    w.put_u32(kRayFileVersion);
    w.put_u32(meta.bs_id);
    w.put_f64(meta.carrier_freq);
    w.put_u64(records.size());
    w.put_fixed_string(meta.scenario_name, 32);
    w.put_zeros(kRayHeaderBytes - w.size());
    for (const auto &pl : records)
    {
        w.put_u64(pl.user_index);
        w.put_f64(pl.user_position.x);
        w.put_f64(pl.user_position.y);
        w.put_f64(pl.user_position.z);
        w.put_u16(static_cast<std::uint16_t>(pl.paths.size()));
        for (const auto &p : pl.paths)
        {
            w.put_f64(p.aod_az);
            w.put_f64(p.aod_el);
            w.put_f64(p.aoa_az);
            w.put_f64(p.aoa_el);
            w.put_f64(p.power);
            w.put_f64(p.phase);
            w.put_f64(p.delay);
            w.put_u16(p.n_reflections);
        }
    }
}

} // namespace

const PathList *RayFile::find(std::uint64_t user_index) const noexcept
{
    auto it = std::lower_bound(records.begin(), records.end(), user_index,
                               [](const PathList &pl, std::uint64_t idx) { return pl.user_index < idx; });
    if (it == records.end() || it->user_index != user_index)
        return nullptr;
    return &*it;
}

std::string Violation::to_string() const
{
    std::string where = record == kHeaderRecord ? std::string("header") : "record " + std::to_string(record);
    return where + ": " + field + " violates '" + rule + "'";
}

namespace
{

std::vector<Violation> validate_parts(const RayFileHeader &h, std::span<const PathList> records)
{
    std::vector<Violation> out;
    if (h.version != kRayFileVersion)
        out.push_back({kHeaderRecord, "version", "version == 1"});
    if (!(h.carrier_freq > 0.0) || !std::isfinite(h.carrier_freq))
        out.push_back({kHeaderRecord, "carrier_freq", "carrier_freq > 0"});
    if (h.user_count != records.size())
        out.push_back({kHeaderRecord, "user_count", "user_count == number of records"});
    if (h.scenario_name.size() > 32)
        out.push_back({kHeaderRecord, "scenario_name", "at most 32 bytes"});

    for (std::size_t i = 0; i < records.size(); ++i)
    {
        const auto &pl = records[i];
        if (pl.bs_id != h.bs_id)
            out.push_back({i, "bs_id", "matches header bs_id"});
        if (pl.user_index == 0)
            out.push_back({i, "global_index", "global_index >= 1"});
        if (i > 0 && pl.user_index <= records[i - 1].user_index)
            out.push_back({i, "global_index", "records sorted by ascending global_index"});
        const auto &pos = pl.user_position;
        if (!std::isfinite(pos.x) || !std::isfinite(pos.y) || !std::isfinite(pos.z))
            out.push_back({i, "position", "finite coordinates"});
        if (pl.paths.size() > kMaxRecordedPaths)
            out.push_back({i, "n_paths", "at most 25 paths (strongest 25 recorded)"});
        for (std::size_t k = 0; k < pl.paths.size(); ++k)
        {
            check_path(pl.paths[k], i, k, out);
            if (k > 0 && pl.paths[k].power > pl.paths[k - 1].power)
                out.push_back({i, "paths[" + std::to_string(k) + "].power", "paths sorted by descending power"});
        }
    }
    return out;
}

} // namespace

std::vector<Violation> validate_rayfile(const RayFile &rf) { return validate_parts(rf.header, rf.records); }

std::vector<std::uint8_t> encode_rayfile(std::span<const PathList> records, const RayFileHeader &meta)
{
    RayFileHeader header = meta;
    header.version = kRayFileVersion;
    header.user_count = records.size();
    auto violations = validate_parts(header, records);
    if (!violations.empty())
        throw ValidationError("refusing to write ray file: " + violations.front().to_string());

    ByteWriter w;
    std::size_t paths = 0;
    for (const auto &pl : records)
        paths += pl.paths.size();
    w.reserve(kRayHeaderBytes + records.size() * kRayUserBytes + paths * kRayPathBytes);
    encode_into(w, records, meta);
    return w.take();
}

std::size_t write_rayfile(std::span<const PathList> records, const RayFileHeader &meta, std::ostream &sink)
{
    auto bytes = encode_rayfile(records, meta);
    sink.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!sink)
        throw IoError("failed to write ray file for bs " + std::to_string(meta.bs_id));
    return bytes.size();
}

RayFile decode_rayfile(std::span<const std::uint8_t> bytes)
{
    ByteReader r(bytes);
    if (!r.magic_matches(kMagic))
        throw FormatError("not a ray file (bad magic)");
    r.skip(4);

    RayFile rf;
    auto &h = rf.header;
    h.version = r.get_u32();
    if (h.version != kRayFileVersion)
        throw UnsupportedVersionError("unsupported ray file version " + std::to_string(h.version), h.version);
    h.bs_id = r.get_u32();
    h.carrier_freq = r.get_f64();
    h.user_count = r.get_u64();
    h.scenario_name = r.get_fixed_string(32);
    r.skip(kRayHeaderBytes - r.offset());

    if (h.user_count > r.remaining() / kRayUserBytes)
        throw CorruptionError("declared user_count " + std::to_string(h.user_count) + " exceeds file size",
                              20);
    rf.records.reserve(h.user_count);
    for (std::uint64_t u = 0; u < h.user_count; ++u)
    {
        PathList pl;
        pl.bs_id = h.bs_id;
        pl.user_index = r.get_u64();
        pl.user_position.x = r.get_f64();
        pl.user_position.y = r.get_f64();
        pl.user_position.z = r.get_f64();
        const auto n_paths = r.get_u16();
        if (n_paths > r.remaining() / kRayPathBytes)
            throw CorruptionError("record " + std::to_string(u) + " declares " + std::to_string(n_paths) +
                                      " paths beyond end of file",
                                  r.offset() - 2);
        pl.paths.resize(n_paths);
        for (auto &p : pl.paths)
        {
            p.aod_az = r.get_f64();
            p.aod_el = r.get_f64();
            p.aoa_az = r.get_f64();
            p.aoa_el = r.get_f64();
            p.power = r.get_f64();
            p.phase = r.get_f64();
            p.delay = r.get_f64();
            p.n_reflections = r.get_u16();
        }
        rf.records.push_back(std::move(pl));
    }
    if (!r.at_end())
        throw CorruptionError("trailing bytes after " + std::to_string(h.user_count) + " records", r.offset());
    return rf;
}

RayFile read_rayfile(std::span<const std::uint8_t> bytes)
{
    RayFile rf = decode_rayfile(bytes);
    auto violations = validate_rayfile(rf);
    if (!violations.empty())
        throw SemanticError("invalid ray file: " + violations.front().to_string(), violations.front().record);
    return rf;
}

RayFile read_rayfile(std::istream &source)
{
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(source)), std::istreambuf_iterator<char>());
    if (source.bad())
        throw IoError("failed to read ray file stream");
    return read_rayfile(std::span<const std::uint8_t>(bytes));
}

RayFile read_rayfile(const std::filesystem::path &path)
{
    auto bytes = read_file_bytes(path);
    return read_rayfile(std::span<const std::uint8_t>(bytes));
}

void write_rayfile_csv(const RayFile &rf, std::ostream &sink)
{
    sink << "# bs_id=" << rf.header.bs_id << " carrier_freq=" << rf.header.carrier_freq
         << " scenario=" << rf.header.scenario_name << '\n';
    sink << "user_index,x,y,z,path,aod_az,aod_el,aoa_az,aoa_el,power,phase,delay,n_reflections\n";
    sink << std::setprecision(17);
    for (const auto &pl : rf.records)
        for (std::size_t k = 0; k < pl.paths.size(); ++k)
        {
            const auto &p = pl.paths[k];
            sink << pl.user_index << ',' << pl.user_position.x << ',' << pl.user_position.y << ','
                 << pl.user_position.z << ',' << k + 1 << ',' << p.aod_az << ',' << p.aod_el << ',' << p.aoa_az
                 << ',' << p.aoa_el << ',' << p.power << ',' << p.phase << ',' << p.delay << ','
                 << p.n_reflections << '\n';
        }
}

} // namespace mimogen
