// Copyright 2026 aquaclust authors
// SPDX-License-Identifier: Apache-2.0

#include "aquaclust/parallel.hpp"

#include <cstdlib>
#include <string>

namespace aquaclust {

namespace {

std::size_t detect_budget() {
    std::size_t budget = std::thread::hardware_concurrency();
    if (budget == 0) budget = 1;
    if (const char* env = std::getenv("SDTW_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && cap > 0) budget = static_cast<std::size_t>(cap);
    }
    return budget;
}

}  // namespace

std::size_t thread_budget() {
    static const std::size_t budget = detect_budget();
    return budget;
}

}  // namespace aquaclust
