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

#ifndef MIMOGEN_PROGRESS_HPP
#define MIMOGEN_PROGRESS_HPP

#include <atomic>
#include <cstdint>
#include <mutex>
#include <ostream>
#include <string>

namespace mimogen
{

// Emits machine-readable `STAGE done/total` lines, at most one per whole
// percent of progress plus the final line. Safe to call from many threads.
class ProgressReporter
{
public:
    ProgressReporter(std::string stage, std::uint64_t total, std::ostream *sink);

    // Report an absolute count. Counts below the last reported one are ignored.
    void report(std::uint64_t done);
    // Increment by one and report.
    void tick();

    std::uint64_t lines_emitted() const noexcept { return lines_; }

private:
    std::string stage_;
    std::uint64_t total_;
    std::ostream *sink_;
    std::mutex mu_;
    std::atomic<std::uint64_t> counter_{0};
    std::uint64_t last_done_ = 0;
    std::int64_t last_percent_ = -1;
    bool finished_ = false;
    std::uint64_t lines_ = 0;
};

} // namespace mimogen

#endif // MIMOGEN_PROGRESS_HPP
