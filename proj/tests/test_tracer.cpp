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
#include "mimogen/scene.hpp"
#include "mimogen/tracer.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

using namespace mimogen;
using mimogen::test::kPi;
using mimogen::test::uniform;

namespace
{

Scene open_scene()
{
    Scene s;
    s.name = "open";
    s.material_losses = {{kGroundMaterial, 6.0}, {kBuildingMaterial, 6.0}};
    return s;
}

// Thin, tall, very long slab whose face toward the origin lies on y = y0.
Building wall_y(double y0, bool facing_negative)
{
    const double far = 1e5;
    if (facing_negative)
        return {{-far, y0, 0.0}, {far, y0 + 2.0, 500.0}, kBuildingMaterial};
    return {{-far, y0 - 2.0, 0.0}, {far, y0, 500.0}, kBuildingMaterial};
}

// Independent oracle: every unfolded image of tx for wall sequences that
// alternate between the given planes, optionally mirrored by the ground.
std::vector<double> canyon_lengths(const Vec3 &tx, const Vec3 &rx, const std::vector<double> &walls, int max_refl)
{
    std::set<std::pair<long long, long long>> seen;
    std::vector<double> out;
    auto add = [&](Vec3 img, int used) {
        for (int ground = 0; ground <= 1; ++ground)
        {
            if (used + ground > max_refl)
                break;
            Vec3 p = img;
            if (ground == 1)
                p.z = -p.z;
            const auto key = std::make_pair(std::llround(p.y * 1e6), std::llround(p.z * 1e6));
            if (seen.insert(key).second)
                out.push_back(distance(p, rx));
        }
    };
    add(tx, 0);
    for (std::size_t start = 0; start < walls.size(); ++start)
    {
        Vec3 img = tx;
        std::size_t w = start;
        for (int n = 1; n <= max_refl; ++n)
        {
            img.y = 2.0 * walls[w] - img.y;
            add(img, n);
            if (walls.size() == 1)
                break;
            w = 1 - w;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> traced_lengths(const std::vector<TracedPath> &paths)
{
    std::vector<double> out;
    for (const auto &p : paths)
        out.push_back(p.length());
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST(Mirror, Examples)
{
    EXPECT_EQ(mirror_point({3, 5, 2}, {1, 0.0}), (Vec3{3, -5, 2}));
    EXPECT_EQ(mirror_point(mirror_point({3, 5, 2}, {1, 0.0}), {1, 0.0}), (Vec3{3, 5, 2}));
    EXPECT_EQ(mirror_point({1, 2, 3}, {0, 10.0}), (Vec3{19, 2, 3}));
}

TEST(PathPower, FriisAtOneMetre)
{
    const double lambda = kSpeedOfLight / 60e9;
    const double expected = std::pow(lambda / (4 * kPi), 2);
    const double p = path_power(1.0, 0, 60e9, {});
    EXPECT_NEAR(p / expected, 1.0, 1e-14);
    EXPECT_NEAR(p, 1.58e-7, 0.01e-7);
    EXPECT_NEAR(10 * std::log10(p), -68.0, 0.05);
}

TEST(PathPower, InverseSquareAndLossless)
{
    EXPECT_DOUBLE_EQ(path_power(2.0, 0, 60e9, {}) / path_power(1.0, 0, 60e9, {}), 0.25);
    const std::vector<double> zeros{0.0, 0.0, 0.0};
    EXPECT_DOUBLE_EQ(path_power(37.0, 3, 60e9, zeros), path_power(37.0, 0, 60e9, {}));
    const std::vector<double> six{6.0};
    EXPECT_NEAR(path_power(5.0, 1, 60e9, six) / path_power(5.0, 0, 60e9, {}), std::pow(10.0, -0.6), 1e-15);
    EXPECT_THROW(path_power(0.0, 0, 60e9, {}), DomainError);
    EXPECT_THROW(path_power(1.0, 2, 60e9, six), DomainError);
}

TEST(PathPhase, Examples)
{
    const double f = 60e9;
    const double full = path_phase(1.0 / f, 0, f);
    EXPECT_LT(std::min(full, 2 * kPi - full), 1e-6);
    EXPECT_NEAR(path_phase(1.0 / (2 * f), 0, f), kPi, 1e-6);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i)
    {
        const double delay = uniform(rng, 1e-9, 1e-6);
        const int n = static_cast<int>(rng() % 4);
        const double a = path_phase(delay, n, f);
        const double b = path_phase(delay, n + 1, f);
        EXPECT_GE(a, 0.0);
        EXPECT_LT(a, 2 * kPi);
        double diff = std::fmod(b - a + 4 * kPi, 2 * kPi);
        EXPECT_NEAR(diff, kPi, 1e-9);
    }
}

TEST(Tracer, OpenSceneLosAndGround)
{
    const Tracer tracer(open_scene());
    const auto paths = tracer.trace_points({0, 0, 10}, {10, 0, 10});
    ASSERT_EQ(paths.size(), 2u);
    const PathRecord &los = paths[0].record;
    EXPECT_EQ(los.n_reflections, 0);
    EXPECT_NEAR(los.delay, 10.0 / kSpeedOfLight, 1e-22);
    EXPECT_NEAR(los.delay * 1e9, 33.356, 1e-3);
    EXPECT_DOUBLE_EQ(los.aod_az, 0.0);
    EXPECT_DOUBLE_EQ(los.aod_el, 90.0);
    EXPECT_DOUBLE_EQ(los.aoa_az, 180.0);
    EXPECT_DOUBLE_EQ(los.aoa_el, 90.0);
    const PathRecord &ground = paths[1].record;
    EXPECT_EQ(ground.n_reflections, 1);
    EXPECT_NEAR(paths[1].length(), std::sqrt(100.0 + 400.0), 1e-12);
    EXPECT_NEAR(paths[1].vertices[1].z, 0.0, 1e-12);
}

TEST(Tracer, BlockedLosWithoutReflections)
{
    Scene s = open_scene();
    s.buildings.push_back({{4, -5, 0}, {6, 5, 50}, kBuildingMaterial});
    s.buildings.push_back(wall_y(8.0, true));
    const Tracer tracer(s);
    EXPECT_TRUE(tracer.trace_points({0, 0, 10}, {10, 0, 10}, {0, 25}).empty());
    const auto around = tracer.trace_points({0, 0, 10}, {10, 0, 10}, {1, 25});
    ASSERT_EQ(around.size(), 1u);
    EXPECT_NEAR(around[0].vertices[1].y, 8.0, 1e-12);
}

TEST(Tracer, TwoWallCanyonMatchesMirrorOracle)
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial)
    {
        const double half = uniform(rng, 5, 30);
        Scene s = open_scene();
        s.buildings.push_back(wall_y(half, true));
        s.buildings.push_back(wall_y(-half, false));
        const Tracer tracer(s);
        const Vec3 tx{uniform(rng, -50, 50), uniform(rng, -half + 0.5, half - 0.5), uniform(rng, 1, 30)};
        const Vec3 rx{uniform(rng, -50, 50), uniform(rng, -half + 0.5, half - 0.5), uniform(rng, 1, 30)};
        const int order = 1 + static_cast<int>(rng() % 4);
        const auto expected = canyon_lengths(tx, rx, {half, -half}, order);
        const auto got = traced_lengths(tracer.trace_points(tx, rx, {order, 1000}));
        ASSERT_EQ(got.size(), expected.size()) << "trial " << trial;
        for (std::size_t i = 0; i < got.size(); ++i)
            EXPECT_NEAR(got[i] / expected[i], 1.0, 1e-12);
    }
}

TEST(Tracer, SingleWallLengthIsImageDistance)
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial)
    {
        const double y0 = uniform(rng, 2, 40);
        Scene s = open_scene();
        s.buildings.push_back(wall_y(y0, true));
        const Tracer tracer(s);
        const Vec3 tx{uniform(rng, -50, 50), uniform(rng, -40, y0 - 0.5), uniform(rng, 1, 30)};
        const Vec3 rx{uniform(rng, -50, 50), uniform(rng, -40, y0 - 0.5), uniform(rng, 1, 30)};
        const auto paths = tracer.trace_points(tx, rx, {1, 25});
        bool found = false;
        for (const auto &p : paths)
            if (p.faces.size() == 1 && std::abs(p.vertices[1].y - y0) < 1e-9)
            {
                found = true;
                const double image = distance(mirror_point(tx, {1, y0}), rx);
                EXPECT_NEAR(p.length() / image, 1.0, 1e-12);
            }
        EXPECT_TRUE(found);
    }
}

TEST(Tracer, ReciprocityUnderSwap)
{
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 20; ++trial)
    {
        const double half = uniform(rng, 5, 30);
        Scene s = open_scene();
        s.buildings.push_back(wall_y(half, true));
        s.buildings.push_back(wall_y(-half, false));
        s.buildings.push_back({{uniform(rng, -20, 20), -2, 0}, {25, 2, uniform(rng, 5, 40)}, kBuildingMaterial});
        const Tracer tracer(s);
        const Vec3 a{-40, uniform(rng, -half + 1, half - 1), uniform(rng, 1, 30)};
        const Vec3 b{40, uniform(rng, -half + 1, half - 1), uniform(rng, 1, 30)};
        auto fwd = tracer.trace_points(a, b, {3, 1000});
        auto rev = tracer.trace_points(b, a, {3, 1000});
        ASSERT_EQ(fwd.size(), rev.size());
        auto by_delay = [](const TracedPath &x, const TracedPath &y) { return x.record.delay < y.record.delay; };
        std::sort(fwd.begin(), fwd.end(), by_delay);
        std::sort(rev.begin(), rev.end(), by_delay);
        for (std::size_t i = 0; i < fwd.size(); ++i)
        {
            const auto &f = fwd[i].record;
            const auto &r = rev[i].record;
            EXPECT_NEAR(f.delay / r.delay, 1.0, 1e-9);
            EXPECT_NEAR(f.power / r.power, 1.0, 1e-9);
            EXPECT_NEAR(f.aod_el, r.aoa_el, 1e-9);
            EXPECT_NEAR(f.aoa_el, r.aod_el, 1e-9);
            auto az_gap = [](double x, double y) {
                const double d = std::fmod(std::abs(x - y), 360.0);
                return std::min(d, 360.0 - d);
            };
            EXPECT_LT(az_gap(f.aod_az, r.aoa_az), 1e-9);
            EXPECT_LT(az_gap(f.aoa_az, r.aod_az), 1e-9);
        }
    }
}

namespace
{

const Scene &o1()
{
    static const Scene scene = build_o1_scene();
    return scene;
}

bool leg_clear(const Scene &s, const Vec3 &a, const Vec3 &b)
{
    const Vec3 d = b - a;
    for (const auto &bl : s.buildings)
    {
        double t0 = 0, t1 = 1;
        bool hit = true;
        for (int ax = 0; ax < 3 && hit; ++ax)
        {
            const double lo = bl.min_corner[ax] + 1e-6, hi = bl.max_corner[ax] - 1e-6;
            if (d[ax] == 0)
            {
                hit = a[ax] > lo && a[ax] < hi;
                continue;
            }
            double ta = (lo - a[ax]) / d[ax], tb = (hi - a[ax]) / d[ax];
            if (ta > tb)
                std::swap(ta, tb);
            t0 = std::max(t0, ta);
            t1 = std::min(t1, tb);
            hit = t0 < t1;
        }
        if (hit)
            return false;
    }
    return true;
}

// Exhaustive enumeration of every face sequence, no pruning.
std::vector<double> brute_force_lengths(const Tracer &t, const Scene &s, const Vec3 &tx, const Vec3 &rx, int order)
{
    const auto &faces = t.faces();
    std::vector<double> out;
    if (leg_clear(s, tx, rx))
        out.push_back(distance(tx, rx));
    std::vector<std::size_t> seq;
    std::function<void(int)> rec = [&](int remaining) {
        if (!seq.empty())
        {
            std::vector<Vec3> images{tx};
            for (auto f : seq)
                images.push_back(mirror_point(images.back(), {faces[f].axis, faces[f].offset}));
            std::vector<Vec3> pts(seq.size() + 2);
            pts.front() = tx;
            pts.back() = rx;
            Vec3 target = rx;
            bool ok = true;
            for (std::size_t i = seq.size(); i >= 1 && ok; --i)
            {
                const auto &f = faces[seq[i - 1]];
                const Vec3 &img = images[i];
                const double den = target[f.axis] - img[f.axis];
                const double tt = den == 0 ? -1 : (f.offset - img[f.axis]) / den;
                if (!(tt > 0 && tt < 1))
                {
                    ok = false;
                    break;
                }
                Vec3 p = img + tt * (target - img);
                p[f.axis] = f.offset;
                ok = p[f.u_axis] >= f.u_min - 1e-9 && p[f.u_axis] <= f.u_max + 1e-9 &&
                     p[f.v_axis] >= f.v_min - 1e-9 && p[f.v_axis] <= f.v_max + 1e-9;
                pts[i] = p;
                target = p;
            }
            double len = 0;
            for (std::size_t i = 0; ok && i + 1 < pts.size(); ++i)
            {
                ok = leg_clear(s, pts[i], pts[i + 1]);
                len += distance(pts[i], pts[i + 1]);
            }
            if (ok)
                out.push_back(len);
        }
        if (remaining == 0)
            return;
        for (std::size_t g = 0; g < faces.size(); ++g)
        {
            if (!seq.empty() && seq.back() == g)
                continue;
            seq.push_back(g);
            rec(remaining - 1);
            seq.pop_back();
        }
    };
    rec(order);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST(Tracer, MatchesExhaustiveSearchOnO1)
{
    const Scene &s = o1();
    const Tracer tracer(s);
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 6; ++trial)
    {
        const std::uint32_t bs = 1 + static_cast<std::uint32_t>(rng() % 18);
        const Vec3 rx = user_at(s, 1 + rng() % s.total_users()).position;
        const Vec3 tx = s.base_station(bs).position;
        const auto expected = brute_force_lengths(tracer, s, tx, rx, 2);
        const auto got = traced_lengths(tracer.trace_points(tx, rx, {2, 1000}));
        ASSERT_EQ(got.size(), expected.size()) << "bs " << bs;
        for (std::size_t i = 0; i < got.size(); ++i)
            EXPECT_NEAR(got[i], expected[i], 1e-9);
    }
}

TEST(Tracer, PathInvariantsOnO1)
{
    const Scene &s = o1();
    const Tracer tracer(s);
    for (std::uint64_t idx : {1ULL, 180820ULL, 500000ULL, 700123ULL, 1184923ULL})
    {
        const Vec3 rx = user_at(s, idx).position;
        for (std::uint32_t bs : {3u, 14u})
        {
            const PathList pl = tracer.trace(bs, rx, {3, 25});
            const double direct = distance(s.base_station(bs).position, rx);
            EXPECT_LE(pl.paths.size(), 25u);
            for (std::size_t i = 0; i < pl.paths.size(); ++i)
            {
                const auto &p = pl.paths[i];
                EXPECT_GT(p.power, 0.0);
                EXPECT_GE(p.delay * kSpeedOfLight, direct * (1 - 1e-12));
                EXPECT_GE(p.phase, 0.0);
                EXPECT_LT(p.phase, 2 * kPi);
                for (double az : {p.aod_az, p.aoa_az})
                {
                    EXPECT_GT(az, -180.0);
                    EXPECT_LE(az, 180.0);
                }
                for (double el : {p.aod_el, p.aoa_el})
                {
                    EXPECT_GE(el, 0.0);
                    EXPECT_LE(el, 180.0);
                }
                if (i > 0)
                {
                    EXPECT_GE(pl.paths[i - 1].power, p.power);
                }
            }
        }
    }
}

TEST(Tracer, DelayEqualsPolylineLength)
{
    const Scene &s = o1();
    const Tracer tracer(s);
    for (const auto &p : tracer.trace_points(s.base_station(4).position, user_at(s, 181000).position, {3, 25}))
        EXPECT_NEAR(p.record.delay * kSpeedOfLight / p.length(), 1.0, 1e-12);
}

TEST(Tracer, InvariantUnderBuildingPermutation)
{
    const Scene &s = o1();
    Scene shuffled = s;
    std::mt19937_64 rng(2);
    std::shuffle(shuffled.buildings.begin(), shuffled.buildings.end(), rng);
    const Tracer a(s);
    const Tracer b(shuffled);
    for (std::uint64_t idx : {181000ULL, 600000ULL, 1000000ULL})
    {
        const Vec3 rx = user_at(s, idx).position;
        for (std::uint32_t bs : {5u, 16u})
        {
            const auto pa = a.trace(bs, rx, {3, 25});
            const auto pb = b.trace(bs, rx, {3, 25});
            ASSERT_EQ(pa.paths.size(), pb.paths.size());
            for (std::size_t i = 0; i < pa.paths.size(); ++i)
            {
                EXPECT_EQ(pa.paths[i].power, pb.paths[i].power);
                EXPECT_EQ(pa.paths[i].delay, pb.paths[i].delay);
                EXPECT_EQ(pa.paths[i].aod_az, pb.paths[i].aod_az);
            }
        }
    }
}

TEST(Tracer, MonotoneInReflectionOrder)
{
    const Scene &s = o1();
    const Tracer tracer(s);
    const Vec3 rx = user_at(s, 181000).position;
    const Vec3 tx = s.base_station(3).position;
    std::vector<double> previous;
    for (int order = 0; order <= 3; ++order)
    {
        const auto now = traced_lengths(tracer.trace_points(tx, rx, {order, 1000}));
        for (double len : previous)
            EXPECT_TRUE(std::any_of(now.begin(), now.end(), [&](double x) { return std::abs(x - len) < 1e-9; }))
                << "order " << order << " lost path of length " << len;
        previous = now;
    }
}

TEST(Tracer, TruncatesToMaxPaths)
{
    const Scene &s = o1();
    const Tracer tracer(s);
    const Vec3 rx = user_at(s, 181000).position;
    const Vec3 tx = s.base_station(3).position;
    const auto all = tracer.trace_points(tx, rx, {3, 1000});
    ASSERT_GT(all.size(), 3u);
    const auto top = tracer.trace_points(tx, rx, {3, 3});
    ASSERT_EQ(top.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i)
        EXPECT_EQ(top[i].record.power, all[i].record.power);
}

TEST(Tracer, RejectsBadInputs)
{
    const Tracer tracer(o1());
    EXPECT_THROW(tracer.trace(99, {0, 0, 2}), LookupError);
    EXPECT_THROW(tracer.trace_points({0, 0, 2}, {1, 0, 2}, {-1, 25}), DomainError);
    EXPECT_THROW(tracer.trace_points({0, 0, 2}, {1, 0, 2}, {1, 0}), DomainError);
    const PathList pl = trace_paths(o1(), 3, user_at(o1(), 181000).position, 1, 25);
    EXPECT_EQ(pl.bs_id, 3u);
    EXPECT_FALSE(pl.paths.empty());
}
