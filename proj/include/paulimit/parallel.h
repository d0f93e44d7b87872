// Copyright 2026 The paulimit Authors
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

#ifndef _PAULIMIT_PARALLEL_H
#define _PAULIMIT_PARALLEL_H

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace paulimit {

/// Calls body(k) for k in [0, count) on up to `workers` threads, in contiguous chunks.
///
/// Results must be written to slot k so the output order never depends on scheduling.
/// The first exception thrown by any worker is rethrown on the calling thread.
template <typename Body>
void parallel_for(size_t count, size_t workers, Body &&body) {
    workers = std::max<size_t>(1, std::min(workers, count));
    if (workers == 1) {
        for (size_t k = 0; k < count; k++) {
            body(k);
        }
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> threads;
    size_t chunk = (count + workers - 1) / workers;
    for (size_t w = 0; w < workers; w++) {
        size_t start = w * chunk;
        size_t end = std::min(count, start + chunk);
        threads.emplace_back([&, start, end] {
            try {
                for (size_t k = start; k < end; k++) {
                    body(k);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        });
    }
    for (auto &t : threads) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace paulimit

#endif
