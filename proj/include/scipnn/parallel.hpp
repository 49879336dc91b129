// Copyright 2026 The scipnn Authors
// Licensed under the Apache License, Version 2.0

#ifndef SCIPNN_PARALLEL_HPP
#define SCIPNN_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace scipnn {

/// Worker cap: SCIPNN_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t thread_count();

/// Calls body(i) for every i in [0, n), statically partitioned over
/// thread_count() workers. Results must be written to per-index slots so the
/// outcome does not depend on the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace scipnn

#endif  // SCIPNN_PARALLEL_HPP
