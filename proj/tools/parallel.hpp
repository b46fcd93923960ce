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

#ifndef MIMOGEN_TOOLS_PARALLEL_HPP
#define MIMOGEN_TOOLS_PARALLEL_HPP

#include "mimogen/exec.hpp"

namespace mimogen::cli
{

// Runs work items on `workers` threads pulling chunks from a shared counter.
// The first exception thrown by a work item stops the remaining work and is
// rethrown to the caller after all threads have joined.
ParallelFor thread_pool_executor(unsigned workers);

unsigned default_workers();

} // namespace mimogen::cli

#endif // MIMOGEN_TOOLS_PARALLEL_HPP
