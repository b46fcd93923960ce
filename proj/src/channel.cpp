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

#include "mimogen/channel.hpp"

#include "mimogen/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mimogen
{

namespace
{

constexpr double kPi = std::numbers::pi;
constexpr double kDegToRad = kPi / 180.0;

void fill_axis(std::vector<cplx> &axis, std::uint32_t count, double phase_step)
{
    axis.resize(count);
    for (std::uint32_t m = 0; m < count; ++m)
        axis[m] = std::polar(1.0, m * phase_step);
}

std::size_t used_paths(std::span<const PathRecord> paths, const ParamSet &params)
{
    return std::min<std::size_t>(paths.size(), params.num_paths);
}

cplx path_coefficient(const PathRecord &p, std::uint32_t k, const ParamSet &params)
{
    const double K = params.num_ofdm;
    const double amplitude = std::sqrt(p.power / K);
    const double angle = p.phase + 2.0 * kPi * (static_cast<double>(k) - 1.0) / K * p.delay * params.bandwidth_hz();
    return std::polar(amplitude, angle);
}

} // namespace

void array_response_into(double az, double el, ArrayDims dims, double spacing, std::span<cplx> out)
{
    if (out.size() != dims.size())
        throw DimensionError("array response buffer has " + std::to_string(out.size()) + " entries, expected " +
                             std::to_string(dims.size()));
    const double kd = 2.0 * kPi * spacing;
    std::vector<cplx> ax, ay, az_vec;
    fill_axis(ax, dims.x, kd * std::sin(el) * std::cos(az));
    fill_axis(ay, dims.y, kd * std::sin(el) * std::sin(az));
    fill_axis(az_vec, dims.z, kd * std::cos(el));

    std::size_t m = 0;
    for (std::uint32_t mz = 0; mz < dims.z; ++mz)
        for (std::uint32_t my = 0; my < dims.y; ++my)
        {
            const cplx zy = az_vec[mz] * ay[my];
            for (std::uint32_t mx = 0; mx < dims.x; ++mx)
                out[m++] = zy * ax[mx];
        }
}

std::vector<cplx> array_response(double az, double el, ArrayDims dims, double spacing)
{
    if (dims.x < 1 || dims.y < 1 || dims.z < 1)
        throw DomainError("array dimensions must be >= 1 on every axis");
    if (!(spacing > 0.0))
        throw DomainError("antenna spacing must be > 0");
    std::vector<cplx> out(dims.size());
    array_response_into(az, el, dims, spacing, out);
    return out;
}

std::vector<cplx> channel_vector(std::span<const PathRecord> paths, std::uint32_t k, const ParamSet &params)
{
    if (k < 1 || k > params.num_ofdm)
        throw BoundsError("subcarrier " + std::to_string(k) + " outside 1.." + std::to_string(params.num_ofdm));
    const ArrayDims dims = ArrayDims::of(params);
    std::vector<cplx> h(dims.size());
    std::vector<cplx> a(dims.size());
    for (std::size_t l = 0; l < used_paths(paths, params); ++l)
    {
        const auto &p = paths[l];
        array_response_into(p.aod_az * kDegToRad, p.aod_el * kDegToRad, dims, params.ant_spacing, a);
        const cplx c = path_coefficient(p, k, params);
        for (std::size_t m = 0; m < h.size(); ++m)
            h[m] += c * a[m];
    }
    return h;
}

ChannelMatrix channel_matrix(const PathList &paths, const ParamSet &params, std::span<const std::uint32_t> subcarriers)
{
    const ArrayDims dims = ArrayDims::of(params);
    ChannelMatrix H(dims.size(), subcarriers.size());
    H.bs_id = paths.bs_id;
    H.user_index = paths.user_index;

    for (auto k : subcarriers)
        if (k < 1 || k > params.num_ofdm)
            throw BoundsError("subcarrier " + std::to_string(k) + " outside 1.." + std::to_string(params.num_ofdm));

    std::vector<cplx> a(dims.size());
    for (std::size_t l = 0; l < used_paths(paths.paths, params); ++l)
    {
        const auto &p = paths.paths[l];
        array_response_into(p.aod_az * kDegToRad, p.aod_el * kDegToRad, dims, params.ant_spacing, a);
        for (std::size_t j = 0; j < subcarriers.size(); ++j)
        {
            const cplx c = path_coefficient(p, subcarriers[j], params);
            auto col = H.column(j);
            for (std::size_t m = 0; m < col.size(); ++m)
                col[m] += c * a[m];
        }
    }
    return H;
}

ChannelMatrix channel_matrix(const PathList &paths, const ParamSet &params)
{
    const auto subcarriers = subcarrier_set(params);
    return channel_matrix(paths, params, subcarriers);
}

} // namespace mimogen
