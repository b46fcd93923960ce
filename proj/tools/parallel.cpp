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

#include "parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mimogen::cli
{

unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

ParallelFor thread_pool_executor(unsigned workers)
{
    workers = std::max(1u, workers);
    return [workers](std::size_t count, const std::function<void(std::size_t)> &body) {
        if (workers == 1 || count <= 1)
        {
            run_serial(count, body);
            return;
        }
        const std::size_t chunk = std::max<std::size_t>(1, count / (std::size_t{workers} * 16));
        std::atomic<std::size_t> next{0};
        std::atomic<bool> stop{false};
        std::exception_ptr failure;
        std::mutex failure_mu;

        auto worker = [&] {
            while (!stop.load(std::memory_order_relaxed))
            {
                const std::size_t begin = next.fetch_add(chunk);
                if (begin >= count)
                    return;
                const std::size_t end = std::min(count, begin + chunk);
                try
                {
                    for (std::size_t i = begin; i < end; ++i)
                        body(i);
                }
                catch (...)
                {
                    std::lock_guard lock(failure_mu);
                    if (!failure)
                        failure = std::current_exception();
                    stop = true;
                }
            }
        };

        {
            std::vector<std::jthread> pool;
            const auto n = static_cast<unsigned>(std::min<std::size_t>(workers, count));
            pool.reserve(n);
            for (unsigned w = 0; w < n; ++w)
                pool.emplace_back(worker);
        }
        if (failure)
            std::rethrow_exception(failure);
    };
}

} // namespace mimogen::cli
