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

#ifndef MIMOGEN_CHANNEL_HPP
#define MIMOGEN_CHANNEL_HPP

#include "mimogen/params.hpp"
#include "mimogen/tracer.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace mimogen
{

using cplx = std::complex<double>;

struct ArrayDims
{
    std::uint32_t x = 1;
    std::uint32_t y = 1;
    std::uint32_t z = 1;

    std::size_t size() const noexcept { return std::size_t{x} * y * z; }
    static ArrayDims of(const ParamSet &p) noexcept { return {p.num_ant_x, p.num_ant_y, p.num_ant_z}; }
};

// Uniform planar/cubic array response a = a_z (x) a_y (x) a_x, element
// index m = m_z*(M_y*M_x) + m_y*M_x + m_x. Per-axis phases use kd = 2*pi*d
// with d in wavelengths:
//   x: m_x * kd * sin(el) cos(az)
//   y: m_y * kd * sin(el) sin(az)
//   z: m_z * kd * cos(el)
// Angles in radians; el is the polar angle from +z. Each axis runs over its
// own element count.
std::vector<cplx> array_response(double az, double el, ArrayDims dims, double spacing);
void array_response_into(double az, double el, ArrayDims dims, double spacing, std::span<cplx> out);

// M x |K| complex matrix stored column-major: column j is the channel vector
// at the j-th selected subcarrier.
class ChannelMatrix
{
public:
    ChannelMatrix() = default;
    ChannelMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    cplx &operator()(std::size_t r, std::size_t c) noexcept { return data_[c * rows_ + r]; }
    const cplx &operator()(std::size_t r, std::size_t c) const noexcept { return data_[c * rows_ + r]; }

    std::span<cplx> column(std::size_t c) noexcept { return {data_.data() + c * rows_, rows_}; }
    std::span<const cplx> column(std::size_t c) const noexcept { return {data_.data() + c * rows_, rows_}; }

    std::span<cplx> data() noexcept { return data_; }
    std::span<const cplx> data() const noexcept { return data_; }

    std::uint32_t bs_id = 0;
    std::uint64_t user_index = 0;

    friend bool operator==(const ChannelMatrix &, const ChannelMatrix &) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

// Channel at 1-based subcarrier k from the strongest min(num_paths, n) paths:
//   h_k = sum_l sqrt(P_l / K) exp(j(phase_l + 2 pi (k-1)/K * tau_l * B)) a(aod_l)
// with B in Hz and K = num_OFDM. Subcarrier 1 carries zero frequency
// offset. An empty path list gives the zero vector. Throws BoundsError if k
// is not in 1..num_OFDM.
std::vector<cplx> channel_vector(std::span<const PathRecord> paths, std::uint32_t k, const ParamSet &params);

// Column j = channel_vector at subcarrier_set(params)[j].
ChannelMatrix channel_matrix(const PathList &paths, const ParamSet &params);
// As above with a precomputed subcarrier set (hot path for batch builds).
ChannelMatrix channel_matrix(const PathList &paths, const ParamSet &params, std::span<const std::uint32_t> subcarriers);

} // namespace mimogen

#endif // MIMOGEN_CHANNEL_HPP
