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

#include "mimogen/kvfile.hpp"

#include "mimogen/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

namespace mimogen
{

namespace
{

std::string_view trim(std::string_view s)
{
    auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
    while (!s.empty() && is_space(s.front()))
        s.remove_prefix(1);
    while (!s.empty() && is_space(s.back()))
        s.remove_suffix(1);
    return s;
}

std::string where(const KeyValue &kv)
{
    if (kv.line > 0)
        return "line " + std::to_string(kv.line) + ": key '" + kv.key + "'";
    return "key '" + kv.key + "'";
}

} // namespace

std::string to_lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::vector<KeyValue> parse_key_values(std::string_view text)
{
    std::vector<KeyValue> out;
    std::set<std::string> seen;
    int line_no = 0;
    while (!text.empty())
    {
        ++line_no;
        auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);

        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;

        auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value', got '" +
                              std::string(line) + "'");
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        auto folded = to_lower(key);
        if (!seen.insert(folded).second)
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + std::string(key) + "'");
        out.push_back({std::string(key), std::string(value), line_no});
    }
    return out;
}

long long parse_integer(const KeyValue &kv)
{
    std::string_view v = kv.value;
    long long result = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), result);
    if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty())
        throw ConfigError(where(kv) + ": expected an integer, got '" + kv.value + "'");
    return result;
}

double parse_real(const KeyValue &kv)
{
    std::string_view v = kv.value;
    double result = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), result);
    if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty() || !std::isfinite(result))
        throw ConfigError(where(kv) + ": expected a finite number, got '" + kv.value + "'");
    return result;
}

std::vector<long long> parse_integer_list(const KeyValue &kv)
{
    std::string_view v = trim(kv.value);
    if (v.size() >= 2 && v.front() == '[' && v.back() == ']')
        v = trim(v.substr(1, v.size() - 2));
    std::vector<long long> out;
    if (v.empty())
        throw ConfigError(where(kv) + ": expected a non-empty list of integers");
    while (true)
    {
        auto comma = v.find(',');
        KeyValue item{kv.key, std::string(trim(v.substr(0, comma))), kv.line};
        out.push_back(parse_integer(item));
        if (comma == std::string_view::npos)
            break;
        v = v.substr(comma + 1);
    }
    return out;
}

} // namespace mimogen
