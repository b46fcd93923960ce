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

#ifndef MIMOGEN_TRACER_HPP
#define MIMOGEN_TRACER_HPP

#include "mimogen/scene.hpp"
#include "mimogen/vec3.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace mimogen
{

inline constexpr double kSpeedOfLight = 299792458.0; // m/s
inline constexpr std::size_t kMaxRecordedPaths = 25;

// One propagation path between a base station and a user.
//
// Angles are in degrees. Azimuth is measured in the x-y plane from +x and
// lies in (-180, 180]; elevation is the polar angle from +z in [0, 180].
// AoD is the direction leaving the transmitter, AoA the direction from the
// receiver back towards where the wave arrived from.
struct PathRecord
{
    double aod_az = 0.0;
    double aod_el = 0.0;
    double aoa_az = 0.0;
    double aoa_el = 0.0;
    double power = 0.0; // W, for 1 W transmitted
    double phase = 0.0; // rad, [0, 2*pi)
    double delay = 0.0; // s
    std::uint16_t n_reflections = 0;

    friend bool operator==(const PathRecord &, const PathRecord &) = default;
};

struct PathList
{
    std::uint32_t bs_id = 0;
    std::uint64_t user_index = 0;
    Vec3 user_position;
    std::vector<PathRecord> paths; // descending power

    friend bool operator==(const PathList &, const PathList &) = default;
};

struct AxisPlane
{
    int axis = 0; // 0 = x, 1 = y, 2 = z
    double offset = 0.0;
};

// Reflection of p across an axis-aligned plane. An involution.
Vec3 mirror_point(const Vec3 &p, const AxisPlane &plane) noexcept;

// Friis free-space power (lambda / (4 pi d))^2 at unit transmit power and
// isotropic unit gains, times the linear factor of every bounce loss.
// Throws DomainError when length <= 0, carrier_freq <= 0, or the loss list
// does not have n_reflections entries.
double path_power(double length, int n_reflections, double carrier_freq, std::span<const double> reflection_loss_db);

// (-2 pi f tau + pi n) wrapped into [0, 2 pi).
double path_phase(double delay, int n_reflections, double carrier_freq);

struct TraceOptions
{
    int max_reflections = 4;
    std::size_t max_paths = kMaxRecordedPaths;
};

// A traced path together with its polyline; vertices run tx, bounce points,
// rx. `faces` names the reflecting surfaces in bounce order.
struct TracedPath
{
    PathRecord record;
    std::vector<Vec3> vertices;
    std::vector<std::uint32_t> faces;

    double length() const noexcept;
};

// Image-method tracer over the scene's building faces (walls and roofs) and
// the ground plane. Specular reflections only; a candidate path is kept when
// every unfolded segment is clear of all buildings. Results are ordered by
// power (descending), then delay (ascending), then the bounce points'
// coordinates, and truncated to max_paths.
//
// Holds only read-only state after construction; concurrent calls to the
// const members are safe.
class Tracer
{
public:
    explicit Tracer(const Scene &scene);

    // Throws LookupError for an unknown bs_id, DomainError for bad options.
    PathList trace(std::uint32_t bs_id, const Vec3 &user_position, const TraceOptions &opts = {}) const;
    std::vector<TracedPath> trace_points(const Vec3 &tx, const Vec3 &rx, const TraceOptions &opts = {}) const;

    struct Face
    {
        int axis = 0;
        double offset = 0.0;
        double normal_sign = 1.0; // outward normal is normal_sign * e_axis
        int u_axis = 1;
        int v_axis = 2;
        double u_min = 0.0, u_max = 0.0;
        double v_min = 0.0, v_max = 0.0;
        double loss_linear = 1.0;
    };

    const std::vector<Face> &faces() const noexcept { return faces_; }

private:
    bool segment_clear(const Vec3 &a, const Vec3 &b) const noexcept;

    Scene scene_;
    std::vector<Face> faces_;
    double best_loss_linear_ = 1.0;
};

PathList trace_paths(const Scene &scene, std::uint32_t bs_id, const Vec3 &user_position, int max_reflections = 4,
                     std::size_t max_paths = kMaxRecordedPaths);

} // namespace mimogen

#endif // MIMOGEN_TRACER_HPP
