// Copyright (C) 2026 squeezetrack contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace squeezetrack {

/// Worker count: `requested` if nonzero, else SQUEEZETRACK_WORKERS if set,
/// else the hardware concurrency (at least 1).
std::size_t resolve_workers(std::size_t requested = 0);

/// Calls fn(i) for i in [0, count) on up to `workers` threads. Each index runs
/// exactly once; if any call throws, the exception of the lowest failing
/// index is rethrown after all threads finish.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& fn);

}  // namespace squeezetrack
