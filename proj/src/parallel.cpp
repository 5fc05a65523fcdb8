// Copyright 2026 The mvgeo Authors
// SPDX-License-Identifier: Apache-2.0

#include "mvgeo/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace mvgeo {

int thread_count() {
    if (const char* env = std::getenv("MVGEO_THREADS")) {
        try {
            const int requested = std::stoi(env);
            if (requested > 0) return requested;
        } catch (const std::exception&) {
            // unparsable values fall through to auto
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int n, const std::function<void(int, int)>& body) {
    if (n <= 0) return;
    const int workers = std::min(thread_count(), n);
    if (workers == 1) {
        body(0, n);
        return;
    }
    const int chunk = (n + workers - 1) / workers;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (int begin = 0; begin < n; begin += chunk) {
        pool.emplace_back([&body, begin, end = std::min(n, begin + chunk)] { body(begin, end); });
    }
}

} // namespace mvgeo
