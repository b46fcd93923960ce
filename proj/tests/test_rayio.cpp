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

#include "mimogen/error.hpp"
#include "mimogen/rayio.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cstring>
#include <fstream>
#include <sstream>

using namespace mimogen;
using mimogen::test::random_pathlist;

namespace
{

RayFileHeader meta(std::uint32_t bs_id = 3)
{
    RayFileHeader h;
    h.bs_id = bs_id;
    h.carrier_freq = 60e9;
    h.scenario_name = "O1";
    return h;
}

std::vector<PathList> random_records(std::mt19937_64 &rng, std::uint32_t bs_id, std::size_t n_users)
{
    std::vector<PathList> out;
    std::uint64_t idx = 0;
    for (std::size_t u = 0; u < n_users; ++u)
    {
        idx += 1 + rng() % 50;
        out.push_back(random_pathlist(rng, bs_id, idx, rng() % 26));
    }
    return out;
}

} // namespace

TEST(RayIo, EmptyFileIsHeaderOnly)
{
    std::ostringstream os;
    EXPECT_EQ(write_rayfile({}, meta(), os), kRayHeaderBytes);
    const auto bytes = encode_rayfile({}, meta());
    ASSERT_EQ(bytes.size(), 64u);
    const RayFile rf = read_rayfile(bytes);
    EXPECT_TRUE(rf.records.empty());
    EXPECT_EQ(rf.header.bs_id, 3u);
    EXPECT_EQ(rf.header.scenario_name, "O1");
}

TEST(RayIo, SingleLosRoundTrip)
{
    PathList pl;
    pl.bs_id = 3;
    pl.user_index = 1;
    pl.user_position = {1, 2, 2};
    PathRecord los;
    los.aod_az = 0;
    los.aod_el = 90;
    los.aoa_az = 180;
    los.aoa_el = 90;
    los.power = 1e-7;
    los.phase = 1.0;
    los.delay = 3.3e-8;
    pl.paths.push_back(los);
    const std::vector<PathList> records{pl};
    const auto bytes = encode_rayfile(records, meta());
    EXPECT_EQ(bytes.size(), kRayHeaderBytes + kRayUserBytes + kRayPathBytes);
    const RayFile rf = read_rayfile(bytes);
    ASSERT_EQ(rf.records.size(), 1u);
    EXPECT_EQ(rf.records[0], pl);
    EXPECT_EQ(rf.find(1), &rf.records[0]);
    EXPECT_EQ(rf.find(2), nullptr);
}

TEST(RayIo, RandomRoundTripsAreBitExact)
{
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 1000; ++trial)
    {
        const auto records = random_records(rng, 7, rng() % 6);
        const auto bytes = encode_rayfile(records, meta(7));
        std::size_t expected = kRayHeaderBytes;
        for (const auto &r : records)
            expected += kRayUserBytes + r.paths.size() * kRayPathBytes;
        ASSERT_EQ(bytes.size(), expected);
        const RayFile rf = read_rayfile(bytes);
        ASSERT_EQ(rf.records, records);
        ASSERT_EQ(encode_rayfile(rf.records, rf.header), bytes);
    }
}

TEST(RayIo, StreamAndPathReaders)
{
    std::mt19937_64 rng(1);
    const auto records = random_records(rng, 4, 10);
    std::stringstream ss;
    write_rayfile(records, meta(4), ss);
    EXPECT_EQ(read_rayfile(ss).records, records);

    test::TempDir dir("rayio");
    const auto path = dir / "bs_4.dmrf";
    const auto bytes = encode_rayfile(records, meta(4));
    std::ofstream(path, std::ios::binary).write(reinterpret_cast<const char *>(bytes.data()),
                                                static_cast<std::streamsize>(bytes.size()));
    EXPECT_EQ(read_rayfile(path).records, records);
    EXPECT_THROW(read_rayfile(dir / "nope.dmrf"), IoError);
}

TEST(RayIo, StructuralErrorsAreClassified)
{
    std::mt19937_64 rng(2);
    const auto bytes = encode_rayfile(random_records(rng, 3, 4), meta());

    auto bad_magic = bytes;
    for (int i = 0; i < 4; ++i)
        bad_magic[i] = static_cast<std::uint8_t>(~bad_magic[i]);
    EXPECT_THROW(read_rayfile(bad_magic), FormatError);

    auto bad_version = bytes;
    bad_version[4] = 9;
    EXPECT_THROW(read_rayfile(bad_version), UnsupportedVersionError);

    auto truncated = bytes;
    truncated.resize(kRayHeaderBytes + kRayUserBytes + 10);
    try
    {
        read_rayfile(truncated);
        FAIL();
    }
    catch (const CorruptionError &e)
    {
        EXPECT_NE(std::string(e.what()).find("offset"), std::string::npos);
    }
}

TEST(RayIo, ValidationReportsSeededDefects)
{
    std::mt19937_64 rng(3);
    RayFile rf;
    rf.header = meta();
    rf.records = random_records(rng, 3, 5);
    for (auto &r : rf.records)
        if (r.paths.size() > 24 || r.paths.empty())
            r.paths.resize(3, r.paths.empty() ? test::random_path(rng, 1e-9) : r.paths.front());
    for (auto &r : rf.records)
        for (std::size_t k = 1; k < r.paths.size(); ++k)
            r.paths[k].power = r.paths[k - 1].power * 0.5;
    rf.header.user_count = rf.records.size();
    EXPECT_TRUE(validate_rayfile(rf).empty());

    RayFile zero_delay = rf;
    zero_delay.records[2].paths[0].delay = 0.0;
    const auto v = validate_rayfile(zero_delay);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].record, 2u);
    EXPECT_EQ(v[0].rule, "delay > 0");
    EXPECT_NE(v[0].to_string().find("record 2"), std::string::npos) << v[0].to_string();

    RayFile too_many = rf;
    auto &paths = too_many.records[1].paths;
    while (paths.size() < 26)
    {
        PathRecord p = paths.back();
        p.power *= 0.5;
        paths.push_back(p);
    }
    const auto v2 = validate_rayfile(too_many);
    ASSERT_EQ(v2.size(), 1u);
    EXPECT_NE(v2[0].rule.find("25"), std::string::npos);

    RayFile unsorted = rf;
    std::swap(unsorted.records[0], unsorted.records[1]);
    EXPECT_FALSE(validate_rayfile(unsorted).empty());

    EXPECT_THROW(encode_rayfile(zero_delay.records, zero_delay.header), ValidationError);
}

TEST(RayIo, SemanticErrorNamesRecord)
{
    std::mt19937_64 rng(4);
    auto records = random_records(rng, 3, 3);
    records[1].paths.assign(1, test::random_path(rng, 1e-9));
    auto bytes = encode_rayfile(records, meta());
    // Overwrite the single path's power with -1.
    std::size_t off = kRayHeaderBytes + kRayUserBytes + records[0].paths.size() * kRayPathBytes + kRayUserBytes + 32;
    const double neg = -1.0;
    std::memcpy(bytes.data() + off, &neg, sizeof neg);
    try
    {
        read_rayfile(bytes);
        FAIL();
    }
    catch (const SemanticError &e)
    {
        EXPECT_EQ(e.record(), 1u);
        EXPECT_NE(std::string(e.what()).find("power > 0"), std::string::npos) << e.what();
    }
    EXPECT_EQ(decode_rayfile(bytes).records[1].paths[0].power, -1.0);
}

TEST(RayIo, MutationFuzzOnlyRaisesClassifiedErrors)
{
    std::mt19937_64 rng(99);
    std::vector<std::vector<std::uint8_t>> seeds;
    for (int i = 0; i < 8; ++i)
        seeds.push_back(encode_rayfile(random_records(rng, 2, 1 + rng() % 4), meta(2)));
    std::size_t accepted = 0;
    for (int trial = 0; trial < 10000; ++trial)
    {
        auto bytes = seeds[rng() % seeds.size()];
        switch (rng() % 4)
        {
        case 0:
            for (int k = 0; k < 1 + static_cast<int>(rng() % 4); ++k)
                bytes[rng() % bytes.size()] ^= static_cast<std::uint8_t>(1u << (rng() % 8));
            break;
        case 1:
            bytes.resize(rng() % bytes.size());
            break;
        case 2:
            bytes.insert(bytes.begin() + static_cast<std::ptrdiff_t>(rng() % bytes.size()),
                         static_cast<std::uint8_t>(rng()));
            break;
        default:
            bytes[rng() % bytes.size()] = static_cast<std::uint8_t>(rng());
            break;
        }
        try
        {
            read_rayfile(bytes);
            ++accepted;
        }
        catch (const Error &)
        {
        }
        catch (const std::exception &e)
        {
            FAIL() << "unclassified exception: " << e.what();
        }
    }
    EXPECT_LT(accepted, 10000u);
}

TEST(RayIo, CsvExport)
{
    std::mt19937_64 rng(5);
    RayFile rf;
    rf.header = meta();
    rf.records = random_records(rng, 3, 2);
    std::ostringstream os;
    write_rayfile_csv(rf, os);
    const std::string text = os.str();
    std::size_t lines = std::count(text.begin(), text.end(), '\n');
    std::size_t paths = 0;
    for (const auto &r : rf.records)
        paths += r.paths.size();
    EXPECT_EQ(lines, 2 + paths);
}
