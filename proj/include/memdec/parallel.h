// Copyright 2026 The memdec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MEMDEC_PARALLEL_H
#define MEMDEC_PARALLEL_H

#include <cstddef>
#include <functional>

namespace memdec {

/// Worker count: MEMDEC_THREADS if set and positive, otherwise the hardware concurrency.
std::size_t thread_count();

/// Runs body(i) for i in [0, n) over `threads` workers.
///
/// Indices are statically partitioned. Callers get scheduling-independent results as long as
/// body(i) writes only to slot i and draws randomness from a stream derived from i.
/// The first exception thrown by any worker is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body, std::size_t threads = 0);

}  // namespace memdec

#endif
