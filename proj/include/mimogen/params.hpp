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

#ifndef MIMOGEN_PARAMS_HPP
#define MIMOGEN_PARAMS_HPP

#include "mimogen/kvfile.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mimogen
{

// Dataset parameter set. Defaults are the reference configuration:
// BSs 3-6, rows R1000-R1300, a 1x32x8 array at half-wavelength spacing,
// 0.5 GHz over 1024 subcarriers of which the first 64 are kept, 5 paths.
struct ParamSet
{
    std::vector<std::uint32_t> active_bs{3, 4, 5, 6};
    std::uint32_t active_user_first = 1000; // row label
    std::uint32_t active_user_last = 1300;  // row label
    std::uint32_t num_ant_x = 1;
    std::uint32_t num_ant_y = 32;
    std::uint32_t num_ant_z = 8;
    double ant_spacing = 0.5; // wavelengths
    double bandwidth = 0.5;   // GHz
    std::uint32_t num_ofdm = 1024;
    std::uint32_t ofdm_sampling_factor = 1;
    std::uint32_t ofdm_limit = 64;
    std::uint32_t num_paths = 5;

    std::size_t num_antennas() const noexcept
    {
        return std::size_t{num_ant_x} * num_ant_y * num_ant_z;
    }
    double bandwidth_hz() const noexcept { return bandwidth * 1e9; }

    friend bool operator==(const ParamSet &, const ParamSet &) = default;
};

// Canonical key spellings (also the CLI flag names). Keys are matched
// case-insensitively.
const std::vector<std::string> &param_keys();

// Throws ConfigError for unknown keys or malformed values (with line number)
// and ValidationError when the resulting set breaks an invariant.
ParamSet parse_params(std::string_view text);
ParamSet params_from_entries(const std::vector<KeyValue> &entries, ParamSet base = {});

// Throws ValidationError naming the field.
void validate_params(const ParamSet &p);

// 1-based subcarrier indices {1, 1+f, 1+2f, ...}, ofdm_limit entries.
// Throws ValidationError if the last index would exceed num_OFDM.
std::vector<std::uint32_t> subcarrier_set(const ParamSet &p);

// key = value text that parse_params maps back to `p`.
std::string params_to_text(const ParamSet &p);

} // namespace mimogen

#endif // MIMOGEN_PARAMS_HPP
