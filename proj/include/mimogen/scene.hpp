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

#ifndef MIMOGEN_SCENE_HPP
#define MIMOGEN_SCENE_HPP

#include "mimogen/vec3.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <string>
#include <string_view>
#include <vector>

namespace mimogen
{

using MaterialId = std::uint32_t;

inline constexpr MaterialId kGroundMaterial = 0;
inline constexpr MaterialId kBuildingMaterial = 1;

// Solid axis-aligned box standing on the ground.
struct Building
{
    Vec3 min_corner;
    Vec3 max_corner;
    MaterialId material = kBuildingMaterial;

    bool contains(const Vec3 &p) const noexcept
    {
        return p.x > min_corner.x && p.x < max_corner.x && p.y > min_corner.y && p.y < max_corner.y &&
               p.z > min_corner.z && p.z < max_corner.z;
    }
};

struct BaseStation
{
    std::uint32_t id = 0; // 1-based, contiguous
    Vec3 position;
    Vec3 antenna_axis{0.0, 0.0, 1.0};
};

// Rectangular lattice of users. Row r (1-based within the grid) and column c
// sit at origin + (r-1)*spacing*row_axis + (c-1)*spacing*col_axis.
struct UserGrid
{
    Vec3 origin;
    Vec3 row_axis{1.0, 0.0, 0.0};
    Vec3 col_axis{0.0, 1.0, 0.0};
    std::uint32_t n_rows = 0;
    std::uint32_t users_per_row = 0;
    double spacing = 0.0;
    std::uint32_t first_row_label = 1;

    std::uint64_t user_count() const noexcept { return std::uint64_t{n_rows} * users_per_row; }
    std::uint32_t last_row_label() const noexcept { return first_row_label + n_rows - 1; }
};

struct Scene
{
    std::string name;
    std::vector<Building> buildings;
    std::vector<BaseStation> base_stations;
    std::vector<UserGrid> grids;
    double carrier_freq = 60e9; // Hz
    double ground_z = 0.0;
    MaterialId ground_material = kGroundMaterial;
    std::map<MaterialId, double> material_losses; // dB per reflection

    // Throws LookupError for an unknown id.
    const BaseStation &base_station(std::uint32_t id) const;
    double reflection_loss_db(MaterialId material) const;
    std::uint64_t total_users() const noexcept;
    std::uint32_t total_rows() const noexcept;
};

// Every knob of the generated street-canyon scenario. Defaults reproduce the
// reference layout: 18 base stations at 6 m, three user grids totalling
// 1,184,923 users, 60 GHz carrier.
struct SceneConfig
{
    struct GridSpec
    {
        double origin_x = 0.0;
        double origin_y = 0.0;
        std::uint32_t n_rows = 0;
        std::uint32_t users_per_row = 0;
        double spacing_m = 0.0;
    };

    std::string scenario_name = "O1";
    double carrier_freq_hz = 60e9;
    double ground_z_m = 0.0;
    double user_height_m = 2.0;
    double ground_loss_db = 6.0;
    double building_loss_db = 6.0;
    std::array<Vec3, 18> bs_positions;
    std::array<GridSpec, 3> grids;

    static SceneConfig o1_defaults();
};

// Applies `key = value` overrides to the O1 defaults. Keys: scenario_name,
// carrier_freq_hz, ground_z_m, user_height_m, ground_loss_db,
// building_loss_db, bs.<1..18>.{x,y,z}, grid<1..3>.{origin_x, origin_y, rows,
// users_per_row, spacing_m}. Unknown keys and malformed values throw
// ConfigError.
SceneConfig parse_scene_config(std::string_view text);

// Builds the two-street scenario. Throws ConfigError naming the field when an
// override is out of range (non-positive spacing or counts, BS inside a
// building, and so on).
Scene build_o1_scene(const SceneConfig &cfg = SceneConfig::o1_defaults());

struct UserEntry
{
    std::uint64_t global_index = 0; // dense from 1
    std::uint32_t row_label = 0;    // global row label R<n>
    std::uint32_t col_index = 0;    // 1-based within the row
    Vec3 position;

    friend bool operator==(const UserEntry &, const UserEntry &) = default;
};

// Grids in declaration order, rows ascending, columns ascending.
std::vector<UserEntry> enumerate_users(const Scene &scene);

// Random access into the enumeration. Throws BoundsError outside 1..total.
UserEntry user_at(const Scene &scene, std::uint64_t global_index);

// Global indices of every user whose row label is in [first_row, last_row].
// Throws BoundsError when a label is outside the scene or first > last.
std::vector<std::uint64_t> users_in_row_range(const Scene &scene, std::uint32_t first_row, std::uint32_t last_row);

// Same set as users_in_row_range, expressed as the inclusive index span it
// always forms. Returns {first, last} global indices.
std::pair<std::uint64_t, std::uint64_t> user_span_for_rows(const Scene &scene, std::uint32_t first_row,
                                                          std::uint32_t last_row);

// Structural checks used by `validate`; empty when the scene is consistent.
std::vector<std::string> validate_scene(const Scene &scene);

// Binary scene container ("DMSC", version 1, little-endian).
std::vector<std::uint8_t> serialize_scene(const Scene &scene);
// Throws FormatError, UnsupportedVersionError, CorruptionError, or
// SemanticError when the decoded scene fails validate_scene.
Scene deserialize_scene(std::span<const std::uint8_t> bytes);

} // namespace mimogen

#endif // MIMOGEN_SCENE_HPP
