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

#ifndef MIMOGEN_KVFILE_HPP
#define MIMOGEN_KVFILE_HPP

#include <string>
#include <string_view>
#include <vector>

namespace mimogen
{

struct KeyValue
{
    std::string key;
    std::string value;
    int line = 0; // 1-based source line, 0 for entries that did not come from a file
};

// Parses the flat `key = value` format shared by scene and parameter files.
// `#` starts a comment; blank lines are ignored; keys and values are trimmed.
// Throws ConfigError (with line number) on a line lacking '=' or an empty key,
// and on a key repeated within the same document.
std::vector<KeyValue> parse_key_values(std::string_view text);

// Helpers used by the typed parsers. `what` identifies the key/line in errors.
long long parse_integer(const KeyValue &kv);
double parse_real(const KeyValue &kv);
std::vector<long long> parse_integer_list(const KeyValue &kv);

std::string to_lower(std::string_view s);

} // namespace mimogen

#endif // MIMOGEN_KVFILE_HPP
