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

#include "mimogen/progress.hpp"

#include <gtest/gtest.h>

#include <sstream>
#include <thread>
#include <vector>

using namespace mimogen;

namespace
{

std::vector<std::string> lines_of(const std::string &text)
{
    std::vector<std::string> out;
    std::istringstream is(text);
    for (std::string line; std::getline(is, line);)
        out.push_back(line);
    return out;
}

} // namespace

TEST(Progress, FinalLineEmittedOnce)
{
    std::ostringstream os;
    ProgressReporter p("trace", 10, &os);
    for (std::uint64_t i = 0; i <= 10; ++i)
        p.report(i);
    p.report(10);
    p.tick();
    const auto lines = lines_of(os.str());
    ASSERT_FALSE(lines.empty());
    EXPECT_EQ(lines.back(), "trace 10/10");
    EXPECT_EQ(std::count(lines.begin(), lines.end(), "trace 10/10"), 1);
}

TEST(Progress, QuietSinkWritesNothing)
{
    ProgressReporter p("build", 100, nullptr);
    for (int i = 0; i < 100; ++i)
        p.tick();
    EXPECT_GT(p.lines_emitted(), 0u);
}

TEST(Progress, RateLimitedOnLargeRun)
{
    const std::uint64_t total = 1'184'923;
    std::ostringstream os;
    ProgressReporter p("trace", total, &os);
    for (std::uint64_t i = 1; i <= total; ++i)
        p.report(i);
    const auto lines = lines_of(os.str());
    EXPECT_LE(lines.size(), 101u);
    EXPECT_EQ(lines.back(), "trace 1184923/1184923");
    // At most one line per whole-percent step.
    long long last_percent = -1;
    for (const auto &line : lines)
    {
        const auto slash = line.find('/');
        const auto done = std::stoull(line.substr(6, slash - 6));
        const long long percent = static_cast<long long>(done * 100 / total);
        EXPECT_GT(percent, last_percent) << line;
        last_percent = percent;
    }
}

TEST(Progress, ConcurrentTicks)
{
    const std::uint64_t total = 40'000;
    std::ostringstream os;
    ProgressReporter p("build", total, &os);
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t)
        threads.emplace_back([&] {
            for (int i = 0; i < 10'000; ++i)
                p.tick();
        });
    for (auto &t : threads)
        t.join();
    const auto lines = lines_of(os.str());
    EXPECT_LE(lines.size(), 101u);
    EXPECT_EQ(lines.back(), "build 40000/40000");
}

TEST(Progress, BackwardsReportsIgnored)
{
    std::ostringstream os;
    ProgressReporter p("x", 100, &os);
    p.report(50);
    p.report(10);
    p.report(100);
    EXPECT_EQ(lines_of(os.str()), (std::vector<std::string>{"x 50/100", "x 100/100"}));
}
