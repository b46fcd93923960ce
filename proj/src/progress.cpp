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

#include "mimogen/progress.hpp"

#include <algorithm>

namespace mimogen
{

ProgressReporter::ProgressReporter(std::string stage, std::uint64_t total, std::ostream *sink)
    : stage_(std::move(stage)), total_(total), sink_(sink)
{
}

void ProgressReporter::report(std::uint64_t done)
{
    std::lock_guard lock(mu_);
    if (finished_ || done < last_done_)
        return;
    done = std::min(done, total_);
    last_done_ = done;

    bool final_line = done == total_;
    std::int64_t percent = total_ == 0 ? 100 : static_cast<std::int64_t>(done * 100 / total_);
    if (!final_line && percent <= last_percent_)
        return;
    last_percent_ = percent;
    finished_ = final_line;
    ++lines_;
    if (sink_ != nullptr)
        *sink_ << stage_ << ' ' << done << '/' << total_ << '\n' << std::flush;
}

void ProgressReporter::tick() { report(counter_.fetch_add(1) + 1); }

} // namespace mimogen
