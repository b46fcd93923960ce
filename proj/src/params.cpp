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

#include "mimogen/params.hpp"

#include "mimogen/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace mimogen
{

namespace
{

std::uint32_t to_u32(const KeyValue &kv)
{
    const long long v = parse_integer(kv);
    if (v < 0 || v > 0xffffffffLL)
        throw ConfigError("line " + std::to_string(kv.line) + ": key '" + kv.key + "' out of range (" + kv.value +
                          ")");
    return static_cast<std::uint32_t>(v);
}

} // namespace

const std::vector<std::string> &param_keys()
{
    static const std::vector<std::string> keys = {
        "active_BS", "active_user_first", "active_user_last", "num_ant_x",  "num_ant_y",  "num_ant_z",
        "ant_spacing", "bandwidth", "num_OFDM", "OFDM_sampling_factor", "OFDM_limit", "num_paths"};
    return keys;
}

ParamSet params_from_entries(const std::vector<KeyValue> &entries, ParamSet p)
{
    for (const auto &kv : entries)
    {
        const std::string key = to_lower(kv.key);
        if (key == "active_bs")
        {
            p.active_bs.clear();
            for (long long id : parse_integer_list(kv))
            {
                if (id < 1 || id > 0xffffffffLL)
                    throw ValidationError("active_BS: base station ids must be >= 1 (got " + std::to_string(id) +
                                          ")");
                p.active_bs.push_back(static_cast<std::uint32_t>(id));
            }
        }
        else if (key == "active_user_first")
            p.active_user_first = to_u32(kv);
        else if (key == "active_user_last")
            p.active_user_last = to_u32(kv);
        else if (key == "num_ant_x")
            p.num_ant_x = to_u32(kv);
        else if (key == "num_ant_y")
            p.num_ant_y = to_u32(kv);
        else if (key == "num_ant_z")
            p.num_ant_z = to_u32(kv);
        else if (key == "ant_spacing")
            p.ant_spacing = parse_real(kv);
        else if (key == "bandwidth")
            p.bandwidth = parse_real(kv);
        else if (key == "num_ofdm")
            p.num_ofdm = to_u32(kv);
        else if (key == "ofdm_sampling_factor")
            p.ofdm_sampling_factor = to_u32(kv);
        else if (key == "ofdm_limit")
            p.ofdm_limit = to_u32(kv);
        else if (key == "num_paths")
            p.num_paths = to_u32(kv);
        else
            throw ConfigError((kv.line > 0 ? "line " + std::to_string(kv.line) + ": " : std::string()) +
                              "unknown parameter '" + kv.key + "'");
    }
    validate_params(p);
    return p;
}

ParamSet parse_params(std::string_view text) { return params_from_entries(parse_key_values(text)); }

void validate_params(const ParamSet &p)
{
    auto fail = [](const std::string &msg) { throw ValidationError("invalid parameters: " + msg); };
    if (p.active_bs.empty())
        fail("active_BS must list at least one base station");
    std::set<std::uint32_t> unique(p.active_bs.begin(), p.active_bs.end());
    if (unique.size() != p.active_bs.size())
        fail("active_BS contains duplicate ids");
    if (unique.count(0) != 0)
        fail("active_BS ids must be >= 1");
    if (p.active_user_first < 1)
        fail("active_user_first must be >= 1");
    if (p.active_user_first > p.active_user_last)
        fail("active_user_first (" + std::to_string(p.active_user_first) + ") must be <= active_user_last (" +
             std::to_string(p.active_user_last) + ")");
    if (p.num_ant_x < 1 || p.num_ant_y < 1 || p.num_ant_z < 1)
        fail("num_ant_x, num_ant_y and num_ant_z must be >= 1");
    if (!(p.ant_spacing > 0.0) || !std::isfinite(p.ant_spacing))
        fail("ant_spacing must be > 0");
    if (!(p.bandwidth > 0.0) || !std::isfinite(p.bandwidth))
        fail("bandwidth must be > 0");
    if (p.num_ofdm < 1)
        fail("num_OFDM must be >= 1");
    if (p.ofdm_sampling_factor < 1)
        fail("OFDM_sampling_factor must be >= 1");
    if (p.ofdm_limit < 1)
        fail("OFDM_limit must be >= 1");
    if (p.num_paths < 1 || p.num_paths > 25)
        fail("num_paths must be in 1..25 (got " + std::to_string(p.num_paths) + ")");
}

std::vector<std::uint32_t> subcarrier_set(const ParamSet &p)
{
    validate_params(p);
    const std::uint64_t span = std::uint64_t{p.ofdm_limit} * p.ofdm_sampling_factor;
    if (span > p.num_ofdm)
        throw ValidationError("invalid parameters: OFDM_limit*OFDM_sampling_factor = " + std::to_string(p.ofdm_limit) +
                              "*" + std::to_string(p.ofdm_sampling_factor) + " = " + std::to_string(span) +
                              " exceeds num_OFDM = " + std::to_string(p.num_ofdm));
    std::vector<std::uint32_t> out(p.ofdm_limit);
    for (std::uint32_t i = 0; i < p.ofdm_limit; ++i)
        out[i] = 1 + i * p.ofdm_sampling_factor;
    return out;
}

std::string params_to_text(const ParamSet &p)
{
    std::ostringstream os;
    os.precision(17);
    os << "active_BS = ";
    for (std::size_t i = 0; i < p.active_bs.size(); ++i)
        os << (i ? "," : "") << p.active_bs[i];
    os << "\nactive_user_first = " << p.active_user_first << "\nactive_user_last = " << p.active_user_last
       << "\nnum_ant_x = " << p.num_ant_x << "\nnum_ant_y = " << p.num_ant_y << "\nnum_ant_z = " << p.num_ant_z
       << "\nant_spacing = " << p.ant_spacing << "\nbandwidth = " << p.bandwidth << "\nnum_OFDM = " << p.num_ofdm
       << "\nOFDM_sampling_factor = " << p.ofdm_sampling_factor << "\nOFDM_limit = " << p.ofdm_limit
       << "\nnum_paths = " << p.num_paths << '\n';
    return os.str();
}

} // namespace mimogen
