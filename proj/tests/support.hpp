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

#ifndef MIMOGEN_TESTS_SUPPORT_HPP
#define MIMOGEN_TESTS_SUPPORT_HPP

#include "mimogen/rayio.hpp"
#include "mimogen/scene.hpp"
#include "mimogen/tracer.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <unistd.h>

namespace mimogen::test
{

inline constexpr double kPi = std::numbers::pi;

// Scratch directory removed on destruction.
class TempDir
{
public:
    explicit TempDir(const std::string &tag)
    {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("mimogen_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir &) = delete;
    TempDir &operator=(const TempDir &) = delete;

    const std::filesystem::path &path() const noexcept { return path_; }
    std::filesystem::path operator/(const std::string &leaf) const { return path_ / leaf; }

private:
    std::filesystem::path path_;
};

inline double uniform(std::mt19937_64 &rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline PathRecord random_path(std::mt19937_64 &rng, double power)
{
    PathRecord p;
    p.aod_az = uniform(rng, -179.999, 180.0);
    p.aod_el = uniform(rng, 0.0, 180.0);
    p.aoa_az = uniform(rng, -179.999, 180.0);
    p.aoa_el = uniform(rng, 0.0, 180.0);
    p.power = power;
    p.phase = uniform(rng, 0.0, 2.0 * kPi - 1e-9);
    p.delay = uniform(rng, 1e-8, 2e-6);
    p.n_reflections = static_cast<std::uint16_t>(rng() % 5);
    return p;
}

// Valid PathList with `n` paths in descending power order.
inline PathList random_pathlist(std::mt19937_64 &rng, std::uint32_t bs_id, std::uint64_t user, std::size_t n)
{
    PathList pl;
    pl.bs_id = bs_id;
    pl.user_index = user;
    pl.user_position = {uniform(rng, -500, 500), uniform(rng, -500, 500), uniform(rng, 0, 10)};
    double power = uniform(rng, 1e-8, 1e-6);
    for (std::size_t i = 0; i < n; ++i)
    {
        pl.paths.push_back(random_path(rng, power));
        power *= uniform(rng, 0.2, 1.0);
    }
    return pl;
}

// A small scene with one grid, for fast end-to-end tests.
inline Scene tiny_scene(std::uint32_t n_rows = 2, std::uint32_t users_per_row = 3, std::uint32_t n_bs = 2)
{
    Scene s;
    s.name = "tiny";
    s.material_losses = {{kGroundMaterial, 6.0}, {kBuildingMaterial, 6.0}};
    s.buildings.push_back({{20, 10, 0}, {40, 30, 15}, kBuildingMaterial});
    for (std::uint32_t i = 1; i <= n_bs; ++i)
        s.base_stations.push_back({i, {5.0 * i, -5.0, 6.0}, {0, 0, 1}});
    UserGrid g;
    g.origin = {0, 0, 2};
    g.row_axis = {1, 0, 0};
    g.col_axis = {0, 1, 0};
    g.n_rows = n_rows;
    g.users_per_row = users_per_row;
    g.spacing = 1.0;
    s.grids.push_back(g);
    return s;
}

} // namespace mimogen::test

#endif // MIMOGEN_TESTS_SUPPORT_HPP
