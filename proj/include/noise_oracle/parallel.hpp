// noise_oracle/parallel.hpp

// Copyright 2026 The noise-oracle Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NOISE_ORACLE_PARALLEL_HPP_
#define NOISE_ORACLE_PARALLEL_HPP_

#include <cstdint>
#include <functional>

namespace noise_oracle {

// Runs fn(0) .. fn(count - 1) on up to `threads` workers. Each index is
// processed exactly once; callers must make fn(i) independent of scheduling
// (write to slot i, seed from index i) so results do not depend on the
// worker count. The first exception thrown by any fn is rethrown.
void parallel_for_index(std::int64_t count, int threads,
                        const std::function<void(std::int64_t)>& fn);

}  // namespace noise_oracle

#endif  // NOISE_ORACLE_PARALLEL_HPP_
