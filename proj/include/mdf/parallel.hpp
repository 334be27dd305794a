// Copyright 2026 The mdf-sim Authors
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


#ifndef MDF_PARALLEL_HPP
#define MDF_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mdf {

/// Number of worker threads; 0 means std::thread::hardware_concurrency().
struct Parallelism {
    unsigned workers = 0;

    unsigned resolved() const {
        if (workers != 0) {
            return workers;
        }
        return std::max(1u, std::thread::hardware_concurrency());
    }
};

/// Runs body(i) for i in [0, n). Indices are dealt round-robin to workers, so
/// callers must make each body(i) write only to storage owned by i; with that
/// discipline the result does not depend on the worker count.
template <typename Body>
void parallel_for(std::size_t n, Parallelism par, Body &&body) {
    std::size_t workers = std::min<std::size_t>(par.resolved(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) {
                    body(i);
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
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

}  // namespace mdf

#endif
