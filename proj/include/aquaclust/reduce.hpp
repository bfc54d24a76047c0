// Copyright 2026 aquaclust authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <span>
#include <vector>

namespace aquaclust {

// Order-insensitive sum: sorts the terms before accumulating, so the result
// is identical for any permutation of the inputs. Used where bitwise
// reproducibility must survive family reordering and parallel evaluation.
inline double stable_sum(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc;
}

inline double stable_sum(std::span<const double> values) {
    return stable_sum(std::vector<double>(values.begin(), values.end()));
}

}  // namespace aquaclust
