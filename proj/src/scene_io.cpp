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

#include "mimogen/binio.hpp"
#include "mimogen/error.hpp"
#include "mimogen/scene.hpp"

#include <cstring>

namespace mimogen
{

namespace
{

constexpr std::string_view kSceneMagic = "DMSC";
constexpr std::uint32_t kSceneVersion = 1;

void put_vec(ByteWriter &w, const Vec3 &v)
{
    w.put_f64(v.x);
    w.put_f64(v.y);
    w.put_f64(v.z);
}

Vec3 get_vec(ByteReader &r)
{
    Vec3 v;
    v.x = r.get_f64();
    v.y = r.get_f64();
    v.z = r.get_f64();
    return v;
}

// Guards reserve() against absurd counts in corrupted headers.
void check_count(const ByteReader &r, std::uint64_t count, std::size_t min_item_bytes, const char *what)
{
    if (count > r.remaining() / min_item_bytes)
        throw CorruptionError(std::string("declared ") + what + " count " + std::to_string(count) +
                                  " exceeds remaining input",
                              r.offset());
}

} // namespace

std::vector<std::uint8_t> serialize_scene(const Scene &scene)
{
    ByteWriter w;
    w.put_magic(kSceneMagic);
    w.put_u32(kSceneVersion);
    w.put_fixed_string(scene.name, 32);
    w.put_f64(scene.carrier_freq);
    w.put_f64(scene.ground_z);
    w.put_u32(scene.ground_material);

    w.put_u32(static_cast<std::uint32_t>(scene.material_losses.size()));
    for (const auto &[id, loss] : scene.material_losses)
    {
        w.put_u32(id);
        w.put_f64(loss);
    }
    w.put_u32(static_cast<std::uint32_t>(scene.buildings.size()));
    for (const auto &b : scene.buildings)
    {
        put_vec(w, b.min_corner);
        put_vec(w, b.max_corner);
        w.put_u32(b.material);
    }
    w.put_u32(static_cast<std::uint32_t>(scene.base_stations.size()));
    for (const auto &bs : scene.base_stations)
    {
        w.put_u32(bs.id);
        put_vec(w, bs.position);
        put_vec(w, bs.antenna_axis);
    }
    w.put_u32(static_cast<std::uint32_t>(scene.grids.size()));
    for (const auto &g : scene.grids)
    {
        put_vec(w, g.origin);
        put_vec(w, g.row_axis);
        put_vec(w, g.col_axis);
        w.put_u32(g.n_rows);
        w.put_u32(g.users_per_row);
        w.put_f64(g.spacing);
        w.put_u32(g.first_row_label);
    }
    return w.take();
}

Scene deserialize_scene(std::span<const std::uint8_t> bytes)
{
    ByteReader r(bytes);
    if (!r.magic_matches(kSceneMagic))
        throw FormatError("not a scene file (bad magic)");
    r.skip(4);
    const auto version = r.get_u32();
    if (version != kSceneVersion)
        throw UnsupportedVersionError("unsupported scene file version " + std::to_string(version), version);

    Scene s;
    s.name = r.get_fixed_string(32);
    s.carrier_freq = r.get_f64();
    s.ground_z = r.get_f64();
    s.ground_material = r.get_u32();

    const auto n_mat = r.get_u32();
    check_count(r, n_mat, 12, "material");
    for (std::uint32_t i = 0; i < n_mat; ++i)
    {
        const auto id = r.get_u32();
        s.material_losses[id] = r.get_f64();
    }
    const auto n_build = r.get_u32();
    check_count(r, n_build, 52, "building");
    s.buildings.reserve(n_build);
    for (std::uint32_t i = 0; i < n_build; ++i)
    {
        Building b;
        b.min_corner = get_vec(r);
        b.max_corner = get_vec(r);
        b.material = r.get_u32();
        s.buildings.push_back(b);
    }
    const auto n_bs = r.get_u32();
    check_count(r, n_bs, 52, "base station");
    s.base_stations.reserve(n_bs);
    for (std::uint32_t i = 0; i < n_bs; ++i)
    {
        BaseStation bs;
        bs.id = r.get_u32();
        bs.position = get_vec(r);
        bs.antenna_axis = get_vec(r);
        s.base_stations.push_back(bs);
    }
    const auto n_grid = r.get_u32();
    check_count(r, n_grid, 92, "grid");
    s.grids.reserve(n_grid);
    for (std::uint32_t i = 0; i < n_grid; ++i)
    {
        UserGrid g;
        g.origin = get_vec(r);
        g.row_axis = get_vec(r);
        g.col_axis = get_vec(r);
        g.n_rows = r.get_u32();
        g.users_per_row = r.get_u32();
        g.spacing = r.get_f64();
        g.first_row_label = r.get_u32();
        s.grids.push_back(g);
    }
    if (!r.at_end())
        throw CorruptionError("trailing bytes after scene content", r.offset());
    if (s.material_losses.size() != n_mat)
        throw SemanticError("duplicate material id in scene file", 0);

    auto violations = validate_scene(s);
    if (!violations.empty())
        throw SemanticError("invalid scene: " + violations.front(), 0);
    return s;
}

} // namespace mimogen
