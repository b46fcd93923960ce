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

#include "mimogen/atomic_file.hpp"
#include "mimogen/binio.hpp"
#include "mimogen/error.hpp"
#include "mimogen/hash.hpp"
#include "mimogen/kvfile.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace mimogen;

TEST(Hash, KnownFnvVectors)
{
    EXPECT_EQ(fnv1a64(std::string_view{}), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a64(std::string_view{"a"}), 0xaf63dc4c8601ec8cULL);
    EXPECT_EQ(fnv1a64(std::string_view{"foobar"}), 0x85944171f73967e8ULL);
    EXPECT_EQ(hash_hex(0xcbf29ce484222325ULL), "cbf29ce484222325");
    EXPECT_EQ(hash_hex(1), "0000000000000001");
}

TEST(Hash, IncrementalMatchesOneShot)
{
    Fnv1a64 h;
    h.update(std::string_view{"foo"});
    h.update(std::string_view{"bar"});
    EXPECT_EQ(h.digest(), fnv1a64(std::string_view{"foobar"}));
}

TEST(Binio, RoundTripsPrimitives)
{
    ByteWriter w;
    w.put_magic("ABCD");
    w.put_u16(0xbeef);
    w.put_u32(0xdeadbeef);
    w.put_u64(0x0123456789abcdefULL);
    w.put_f64(-1.5e-300);
    w.put_fixed_string("hello", 8);
    ASSERT_EQ(w.size(), 4u + 2 + 4 + 8 + 8 + 8);
    // little-endian on the wire
    EXPECT_EQ(w.bytes()[4], 0xef);
    EXPECT_EQ(w.bytes()[5], 0xbe);

    ByteReader r(w.bytes());
    EXPECT_TRUE(r.magic_matches("ABCD"));
    r.skip(4);
    EXPECT_EQ(r.get_u16(), 0xbeef);
    EXPECT_EQ(r.get_u32(), 0xdeadbeefu);
    EXPECT_EQ(r.get_u64(), 0x0123456789abcdefULL);
    EXPECT_EQ(r.get_f64(), -1.5e-300);
    EXPECT_EQ(r.get_fixed_string(8), "hello");
    EXPECT_TRUE(r.at_end());
}

TEST(Binio, TruncationIsCorruptionWithOffset)
{
    const std::vector<std::uint8_t> bytes{1, 2, 3};
    ByteReader r(bytes);
    r.skip(2);
    try
    {
        r.get_u32();
        FAIL() << "expected CorruptionError";
    }
    catch (const CorruptionError &e)
    {
        EXPECT_EQ(e.offset(), 2u);
        EXPECT_NE(std::string(e.what()).find("offset 2"), std::string::npos);
    }
}

TEST(Binio, OversizedFixedStringRejected)
{
    ByteWriter w;
    EXPECT_THROW(w.put_fixed_string("toolong", 4), ValidationError);
}

TEST(KvFile, ParsesCommentsAndWhitespace)
{
    const auto kv = parse_key_values("# header\n  a = 1  \n\nb=two # trailing\n");
    ASSERT_EQ(kv.size(), 2u);
    EXPECT_EQ(kv[0].key, "a");
    EXPECT_EQ(kv[0].value, "1");
    EXPECT_EQ(kv[0].line, 2u);
    EXPECT_EQ(kv[1].key, "b");
    EXPECT_EQ(kv[1].value, "two");
}

TEST(KvFile, ErrorsCarryLineNumbers)
{
    try
    {
        parse_key_values("a=1\nnot a pair\n");
        FAIL();
    }
    catch (const ConfigError &e)
    {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
    }
    EXPECT_THROW(parse_key_values("=3"), ConfigError);
    EXPECT_THROW(parse_key_values("a=1\nA=2"), ConfigError);
}

TEST(KvFile, NumberParsing)
{
    EXPECT_EQ(parse_integer({"n", "42", 1}), 42);
    EXPECT_THROW(parse_integer({"n", "4x", 1}), ConfigError);
    EXPECT_DOUBLE_EQ(parse_real({"x", "0.5", 1}), 0.5);
    EXPECT_THROW(parse_real({"x", "nan", 1}), ConfigError);
    EXPECT_EQ(parse_integer_list({"l", "[3, 4,5]", 1}), (std::vector<long long>{3, 4, 5}));
    EXPECT_EQ(parse_integer_list({"l", "7", 1}), (std::vector<long long>{7}));
    EXPECT_THROW(parse_integer_list({"l", "3,,4", 1}), ConfigError);
}

TEST(AtomicFile, WritesAndLeavesNoTempFiles)
{
    test::TempDir dir("atomic");
    const auto target = dir / "out.bin";
    write_file_atomic(target, std::string_view{"first"});
    write_file_atomic(target, std::string_view{"second"});
    EXPECT_EQ(read_file_text(target), "second");
    std::size_t files = 0;
    for ([[maybe_unused]] const auto &e : std::filesystem::directory_iterator(dir.path()))
        ++files;
    EXPECT_EQ(files, 1u);
    EXPECT_THROW(read_file_bytes(dir / "missing"), IoError);
}
