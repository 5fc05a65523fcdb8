// Copyright 2026 The mvgeo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>

namespace mvgeo {

/// Worker count: MVGEO_THREADS if set and positive, otherwise the hardware
/// concurrency (at least 1).
int thread_count();

/// Runs body(begin, end) over disjoint chunks of [0, n). Each index is visited
/// exactly once; callers must only write to slots owned by their chunk.
void parallel_for(int n, const std::function<void(int, int)>& body);

} // namespace mvgeo
