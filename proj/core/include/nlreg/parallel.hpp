/*
 Copyright 2026 The nlreg Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef NLREG_PARALLEL_HPP
#define NLREG_PARALLEL_HPP

#include <functional>

namespace nlreg {

/// Worker count: NLREG_THREADS if set, else hardware concurrency.
int worker_count();

/**
 * Runs body(i) for i in [0, count) on a pool of threads. Every index is
 * processed exactly once; callers write results into index-owned slots, so
 * the outcome does not depend on scheduling. The exception of the lowest failing
 * index is rethrown after all workers have joined.
 */
void parallel_for(int count, const std::function<void(int)>& body);

} // namespace nlreg

#endif // NLREG_PARALLEL_HPP
