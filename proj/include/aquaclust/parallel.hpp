// Copyright 2026 aquaclust authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace aquaclust {

// Number of worker threads: hardware concurrency, capped by the SDTW_THREADS
// environment variable when set to a positive integer.
std::size_t thread_budget();

// Runs body(i) for i in [0, n). Iterations must be independent; callers get
// deterministic results by writing into per-index slots and reducing in index
// order afterwards.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
    const std::size_t threads = thread_budget();
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    const std::size_t used = threads < n ? threads : n;
    std::vector<std::thread> pool;
    pool.reserve(used);
    for (std::size_t t = 0; t < used; ++t) {
        pool.emplace_back([t, used, n, &body] {
            for (std::size_t i = t; i < n; i += used) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace aquaclust
