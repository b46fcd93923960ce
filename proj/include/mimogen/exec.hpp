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

#ifndef MIMOGEN_EXEC_HPP
#define MIMOGEN_EXEC_HPP

#include <cstddef>
#include <functional>

namespace mimogen
{

// Execution policy injected by callers. The library never starts threads on
// its own; batch operations take a ParallelFor and call it with the number of
// independent work items. Implementations must invoke `body(i)` exactly once
// for every i in [0, count) and return only after all calls finished.
using ParallelFor = std::function<void(std::size_t count, const std::function<void(std::size_t)> &body)>;

inline void run_serial(std::size_t count, const std::function<void(std::size_t)> &body)
{
    for (std::size_t i = 0; i < count; ++i)
        body(i);
}

inline ParallelFor serial_executor() { return run_serial; }

} // namespace mimogen

#endif // MIMOGEN_EXEC_HPP
