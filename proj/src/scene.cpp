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

#include "mimogen/scene.hpp"

#include "mimogen/error.hpp"
#include "mimogen/kvfile.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_map>

namespace mimogen
{

namespace
{

// Street layout (x along the main street, y along the second street, z up).
constexpr double kMainStreetLength = 600.0;
constexpr double kStreetWidth = 40.0;
constexpr double kSecondStreetX0 = 280.0; // intersection spans x in [280, 320]
constexpr double kSecondStreetY0 = -250.0;
constexpr double kSecondStreetLength = 440.0; // y in [-250, 190]
constexpr double kMainBuildingFrontage = 30.0;
constexpr double kMainBuildingDepth = 60.0;
constexpr double kMainBuildingPitch = 40.0;
constexpr double kSecondBuildingSide = 60.0;
constexpr double kBsHeight = 6.0;

// Building heights cycle through this table so neighbouring blocks differ.
constexpr std::array<double, 7> kHeights = {18.0, 27.0, 12.0, 33.0, 21.0, 15.0, 24.0};

std::vector<Building> o1_buildings(double ground_z)
{
    std::vector<Building> out;
    std::size_t h = 0;
    auto add = [&](double x0, double x1, double y0, double y1) {
        out.push_back({{x0, y0, ground_z}, {x1, y1, ground_z + kHeights[h++ % kHeights.size()]}, kBuildingMaterial});
    };

    const double half = kStreetWidth / 2.0;
    const double second_x1 = kSecondStreetX0 + kStreetWidth;
    // Main street, both sides, interrupted by the intersection.
    for (double side : {-1.0, 1.0})
    {
        const double y_near = side * half;
        const double y_far = side * (half + kMainBuildingDepth);
        for (double x0 = 0.0; x0 + kMainBuildingFrontage <= kSecondStreetX0; x0 += kMainBuildingPitch)
            add(x0, x0 + kMainBuildingFrontage, std::min(y_near, y_far), std::max(y_near, y_far));
        for (double x1 = kMainStreetLength; x1 - kMainBuildingFrontage >= second_x1; x1 -= kMainBuildingPitch)
            add(x1 - kMainBuildingFrontage, x1, std::min(y_near, y_far), std::max(y_near, y_far));
    }
    // Second street, both sides, clear of the main-street blocks.
    const double clear = half + kMainBuildingDepth + 10.0;
    const double second_y1 = kSecondStreetY0 + kSecondStreetLength;
    for (double x0 : {kSecondStreetX0 - kSecondBuildingSide, second_x1})
    {
        for (double y1 = -clear; y1 - kSecondBuildingSide >= kSecondStreetY0; y1 -= kSecondBuildingSide + 10.0)
            add(x0, x0 + kSecondBuildingSide, y1 - kSecondBuildingSide, y1);
        for (double y0 = clear; y0 + kSecondBuildingSide <= second_y1; y0 += kSecondBuildingSide + 10.0)
            add(x0, x0 + kSecondBuildingSide, y0, y0 + kSecondBuildingSide);
    }
    return out;
}

[[noreturn]] void config_fail(const std::string &field, const std::string &why)
{
    throw ConfigError("invalid scene configuration: " + field + " " + why);
}

void require_positive(double v, const std::string &field)
{
    if (!(v > 0.0) || !std::isfinite(v))
        config_fail(field, "must be positive (got " + std::to_string(v) + ")");
}

} // namespace

const BaseStation &Scene::base_station(std::uint32_t id) const
{
    auto it = std::find_if(base_stations.begin(), base_stations.end(),
                           [id](const BaseStation &bs) { return bs.id == id; });
    if (it == base_stations.end())
        throw LookupError("unknown base station id " + std::to_string(id) + " (scene has " +
                          std::to_string(base_stations.size()) + ")");
    return *it;
}

double Scene::reflection_loss_db(MaterialId material) const
{
    auto it = material_losses.find(material);
    if (it == material_losses.end())
        throw LookupError("no reflection loss configured for material " + std::to_string(material));
    return it->second;
}

std::uint64_t Scene::total_users() const noexcept
{
    std::uint64_t total = 0;
    for (const auto &g : grids)
        total += g.user_count();
    return total;
}

std::uint32_t Scene::total_rows() const noexcept
{
    std::uint32_t total = 0;
    for (const auto &g : grids)
        total += g.n_rows;
    return total;
}

SceneConfig SceneConfig::o1_defaults()
{
    SceneConfig cfg;
    const double y_south = -kStreetWidth / 2.0 + 1.0;
    const double y_north = kStreetWidth / 2.0 - 1.0;
    // Main street: BS1..BS6 east of the intersection, BS7..BS12 west of it.
    // Odd ids on the south kerb, even ids on the north kerb, 100 m apart.
    const std::array<double, 6> main_x = {560.0, 460.0, 360.0, 240.0, 140.0, 40.0};
    for (std::size_t i = 0; i < 6; ++i)
    {
        cfg.bs_positions[2 * i] = {main_x[i], y_south, kBsHeight};
        cfg.bs_positions[2 * i + 1] = {main_x[i], y_north, kBsHeight};
    }
    // Second street: BS13/15/17 on the west kerb, BS14/16/18 on the east kerb,
    // 150 m apart.
    const std::array<double, 3> second_y = {-200.0, -50.0, 100.0};
    for (std::size_t i = 0; i < 3; ++i)
    {
        cfg.bs_positions[12 + 2 * i] = {kSecondStreetX0 + 1.0, second_y[i], kBsHeight};
        cfg.bs_positions[12 + 2 * i + 1] = {kSecondStreetX0 + kStreetWidth - 1.0, second_y[i], kBsHeight};
    }
    // Grid 1 runs right to left along the main street starting 15 m from its
    // east end; its 36 m width is centred in the 40 m street.
    cfg.grids[0] = {kMainStreetLength - 15.0, -18.0, 2751, 181, 0.2};
    // Grid 2 runs south down the second street, grid 3 north.
    cfg.grids[1] = {kSecondStreetX0 + 2.0, -25.0, 1101, 181, 0.2};
    cfg.grids[2] = {kSecondStreetX0 + 2.0, 25.0, 1351, 361, 0.1};
    return cfg;
}

SceneConfig parse_scene_config(std::string_view text)
{
    SceneConfig cfg = SceneConfig::o1_defaults();

    std::unordered_map<std::string, std::function<void(const KeyValue &)>> setters;
    setters["scenario_name"] = [&](const KeyValue &kv) { cfg.scenario_name = kv.value; };
    setters["carrier_freq_hz"] = [&](const KeyValue &kv) { cfg.carrier_freq_hz = parse_real(kv); };
    setters["ground_z_m"] = [&](const KeyValue &kv) { cfg.ground_z_m = parse_real(kv); };
    setters["user_height_m"] = [&](const KeyValue &kv) { cfg.user_height_m = parse_real(kv); };
    setters["ground_loss_db"] = [&](const KeyValue &kv) { cfg.ground_loss_db = parse_real(kv); };
    setters["building_loss_db"] = [&](const KeyValue &kv) { cfg.building_loss_db = parse_real(kv); };
    for (std::size_t i = 0; i < cfg.bs_positions.size(); ++i)
    {
        const std::string prefix = "bs." + std::to_string(i + 1) + ".";
        for (int axis = 0; axis < 3; ++axis)
            setters[prefix + "xyz"[axis]] = [&cfg, i, axis](const KeyValue &kv) {
                cfg.bs_positions[i][axis] = parse_real(kv);
            };
    }
    for (std::size_t g = 0; g < cfg.grids.size(); ++g)
    {
        const std::string prefix = "grid" + std::to_string(g + 1) + ".";
        auto &spec = cfg.grids[g];
        setters[prefix + "origin_x"] = [&spec](const KeyValue &kv) { spec.origin_x = parse_real(kv); };
        setters[prefix + "origin_y"] = [&spec](const KeyValue &kv) { spec.origin_y = parse_real(kv); };
        setters[prefix + "spacing_m"] = [&spec](const KeyValue &kv) { spec.spacing_m = parse_real(kv); };
        auto count = [](const KeyValue &kv) {
            auto v = parse_integer(kv);
            if (v < 0 || v > 0xffffffffLL)
                throw ConfigError("key '" + kv.key + "': count out of range (" + kv.value + ")");
            return static_cast<std::uint32_t>(v);
        };
        setters[prefix + "rows"] = [&spec, count](const KeyValue &kv) { spec.n_rows = count(kv); };
        setters[prefix + "users_per_row"] = [&spec, count](const KeyValue &kv) { spec.users_per_row = count(kv); };
    }

    for (const auto &kv : parse_key_values(text))
    {
        auto it = setters.find(to_lower(kv.key));
        if (it == setters.end())
            throw ConfigError("line " + std::to_string(kv.line) + ": unknown scene key '" + kv.key + "'");
        it->second(kv);
    }
    return cfg;
}

Scene build_o1_scene(const SceneConfig &cfg)
{
    require_positive(cfg.carrier_freq_hz, "carrier_freq_hz");
    if (!std::isfinite(cfg.ground_z_m))
        config_fail("ground_z_m", "must be finite");
    require_positive(cfg.user_height_m, "user_height_m");
    if (!(cfg.ground_loss_db >= 0.0))
        config_fail("ground_loss_db", "must be non-negative");
    if (!(cfg.building_loss_db >= 0.0))
        config_fail("building_loss_db", "must be non-negative");
    if (cfg.scenario_name.empty() || cfg.scenario_name.size() > 32)
        config_fail("scenario_name", "must be 1..32 bytes");

    Scene scene;
    scene.name = cfg.scenario_name;
    scene.carrier_freq = cfg.carrier_freq_hz;
    scene.ground_z = cfg.ground_z_m;
    scene.material_losses = {{kGroundMaterial, cfg.ground_loss_db}, {kBuildingMaterial, cfg.building_loss_db}};
    scene.buildings = o1_buildings(cfg.ground_z_m);

    for (std::size_t i = 0; i < cfg.bs_positions.size(); ++i)
    {
        const Vec3 &p = cfg.bs_positions[i];
        const std::string field = "bs." + std::to_string(i + 1);
        if (!(p.z > cfg.ground_z_m))
            config_fail(field + ".z", "must be above ground");
        for (const auto &b : scene.buildings)
            if (b.contains(p))
                config_fail(field, "lies inside a building");
        scene.base_stations.push_back({static_cast<std::uint32_t>(i + 1), p, {0.0, 0.0, 1.0}});
    }

    const std::array<Vec3, 3> row_axes = {Vec3{-1.0, 0.0, 0.0}, Vec3{0.0, -1.0, 0.0}, Vec3{0.0, 1.0, 0.0}};
    const std::array<Vec3, 3> col_axes = {Vec3{0.0, 1.0, 0.0}, Vec3{1.0, 0.0, 0.0}, Vec3{1.0, 0.0, 0.0}};
    std::uint32_t next_label = 1;
    for (std::size_t g = 0; g < cfg.grids.size(); ++g)
    {
        const auto &spec = cfg.grids[g];
        const std::string prefix = "grid" + std::to_string(g + 1) + ".";
        if (spec.n_rows == 0)
            config_fail(prefix + "rows", "must be at least 1");
        if (spec.users_per_row == 0)
            config_fail(prefix + "users_per_row", "must be at least 1");
        require_positive(spec.spacing_m, prefix + "spacing_m");
        if (!std::isfinite(spec.origin_x) || !std::isfinite(spec.origin_y))
            config_fail(prefix + "origin", "must be finite");

        UserGrid grid;
        grid.origin = {spec.origin_x, spec.origin_y, cfg.ground_z_m + cfg.user_height_m};
        grid.row_axis = row_axes[g];
        grid.col_axis = col_axes[g];
        grid.n_rows = spec.n_rows;
        grid.users_per_row = spec.users_per_row;
        grid.spacing = spec.spacing_m;
        grid.first_row_label = next_label;
        next_label += spec.n_rows;
        scene.grids.push_back(grid);
    }
    return scene;
}

namespace
{

Vec3 grid_position(const UserGrid &g, std::uint32_t row_in_grid, std::uint32_t col)
{
    // row_in_grid and col are 1-based.
    return g.origin + (static_cast<double>(row_in_grid - 1) * g.spacing) * g.row_axis +
           (static_cast<double>(col - 1) * g.spacing) * g.col_axis;
}

} // namespace

std::vector<UserEntry> enumerate_users(const Scene &scene)
{
    std::vector<UserEntry> out;
    out.reserve(scene.total_users());
    std::uint64_t index = 1;
    for (const auto &g : scene.grids)
        for (std::uint32_t r = 1; r <= g.n_rows; ++r)
            for (std::uint32_t c = 1; c <= g.users_per_row; ++c)
                out.push_back({index++, g.first_row_label + r - 1, c, grid_position(g, r, c)});
    return out;
}

UserEntry user_at(const Scene &scene, std::uint64_t global_index)
{
    const std::uint64_t total = scene.total_users();
    if (global_index < 1 || global_index > total)
        throw BoundsError("user index " + std::to_string(global_index) + " outside valid range 1.." +
                          std::to_string(total));
    std::uint64_t base = 0;
    for (const auto &g : scene.grids)
    {
        if (global_index <= base + g.user_count())
        {
            const std::uint64_t local = global_index - base - 1;
            const auto row = static_cast<std::uint32_t>(local / g.users_per_row) + 1;
            const auto col = static_cast<std::uint32_t>(local % g.users_per_row) + 1;
            return {global_index, g.first_row_label + row - 1, col, grid_position(g, row, col)};
        }
        base += g.user_count();
    }
    throw BoundsError("user index " + std::to_string(global_index) + " not found"); // unreachable
}

std::pair<std::uint64_t, std::uint64_t> user_span_for_rows(const Scene &scene, std::uint32_t first_row,
                                                          std::uint32_t last_row)
{
    const std::uint32_t rows = scene.total_rows();
    auto range_text = [&] { return " (valid rows R1..R" + std::to_string(rows) + ")"; };
    if (first_row < 1 || first_row > rows)
        throw BoundsError("first row R" + std::to_string(first_row) + " out of range" + range_text());
    if (last_row < 1 || last_row > rows)
        throw BoundsError("last row R" + std::to_string(last_row) + " out of range" + range_text());
    if (first_row > last_row)
        throw BoundsError("first row R" + std::to_string(first_row) + " is after last row R" +
                          std::to_string(last_row));

    // Index of the first user of a row label, and of the last.
    auto first_of = [&](std::uint32_t label) {
        std::uint64_t base = 0;
        for (const auto &g : scene.grids)
        {
            if (label <= g.last_row_label())
                return base + std::uint64_t{label - g.first_row_label} * g.users_per_row + 1;
            base += g.user_count();
        }
        return base + 1;
    };
    auto last_of = [&](std::uint32_t label) {
        std::uint64_t base = 0;
        for (const auto &g : scene.grids)
        {
            if (label <= g.last_row_label())
                return base + std::uint64_t{label - g.first_row_label + 1} * g.users_per_row;
            base += g.user_count();
        }
        return base;
    };
    return {first_of(first_row), last_of(last_row)};
}

std::vector<std::uint64_t> users_in_row_range(const Scene &scene, std::uint32_t first_row, std::uint32_t last_row)
{
    auto [lo, hi] = user_span_for_rows(scene, first_row, last_row);
    std::vector<std::uint64_t> out;
    out.reserve(hi - lo + 1);
    for (std::uint64_t i = lo; i <= hi; ++i)
        out.push_back(i);
    return out;
}

std::vector<std::string> validate_scene(const Scene &scene)
{
    std::vector<std::string> v;
    if (!(scene.carrier_freq > 0.0) || !std::isfinite(scene.carrier_freq))
        v.push_back("carrier_freq must be positive");
    if (!std::isfinite(scene.ground_z))
        v.push_back("ground_z must be finite");
    if (scene.name.empty() || scene.name.size() > 32)
        v.push_back("scenario name must be 1..32 bytes");
    if (!scene.material_losses.contains(scene.ground_material))
        v.push_back("ground material " + std::to_string(scene.ground_material) + " has no reflection loss");
    for (const auto &[id, loss] : scene.material_losses)
        if (!(loss >= 0.0) || !std::isfinite(loss))
            v.push_back("material " + std::to_string(id) + ": reflection loss must be >= 0 dB");

    for (std::size_t i = 0; i < scene.buildings.size(); ++i)
    {
        const auto &b = scene.buildings[i];
        const std::string tag = "building " + std::to_string(i) + ": ";
        for (int a = 0; a < 3; ++a)
            if (!(b.min_corner[a] < b.max_corner[a]))
                v.push_back(tag + "min_corner must be < max_corner on axis " + "xyz"[a]);
        if (!scene.material_losses.contains(b.material))
            v.push_back(tag + "material " + std::to_string(b.material) + " has no reflection loss");
    }

    for (std::size_t i = 0; i < scene.base_stations.size(); ++i)
    {
        const auto &bs = scene.base_stations[i];
        const std::string tag = "base station " + std::to_string(bs.id) + ": ";
        if (bs.id != i + 1)
            v.push_back(tag + "ids must be unique and contiguous from 1 (expected " + std::to_string(i + 1) + ")");
        if (!(bs.position.z > scene.ground_z))
            v.push_back(tag + "height must be > 0 above ground");
        if (std::abs(norm(bs.antenna_axis) - 1.0) > 1e-9)
            v.push_back(tag + "antenna_axis must be a unit vector");
        for (const auto &b : scene.buildings)
            if (b.contains(bs.position))
            {
                v.push_back(tag + "lies inside a building");
                break;
            }
    }

    std::uint32_t expected_label = 1;
    for (std::size_t i = 0; i < scene.grids.size(); ++i)
    {
        const auto &g = scene.grids[i];
        const std::string tag = "grid " + std::to_string(i + 1) + ": ";
        if (!(g.spacing > 0.0) || !std::isfinite(g.spacing))
            v.push_back(tag + "spacing must be > 0");
        if (g.n_rows == 0 || g.users_per_row == 0)
            v.push_back(tag + "rows and users_per_row must be >= 1");
        if (std::abs(norm(g.row_axis) - 1.0) > 1e-9 || std::abs(norm(g.col_axis) - 1.0) > 1e-9)
            v.push_back(tag + "row_axis and col_axis must be unit vectors");
        if (std::abs(dot(g.row_axis, g.col_axis)) > 1e-9)
            v.push_back(tag + "row_axis must be perpendicular to col_axis");
        if (g.first_row_label != expected_label)
            v.push_back(tag + "row labels must be contiguous (expected first label R" + std::to_string(expected_label) +
                        ")");
        expected_label = g.first_row_label + g.n_rows;
    }
    return v;
}

} // namespace mimogen
