#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace dvar {

/// Worker count: DVAR_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t default_thread_count();

/// Runs body(begin, end) over contiguous chunks of [0, count) on up to
/// `threads` threads. Chunk boundaries depend only on count and threads, and
/// callers write to disjoint slots, so results never depend on scheduling.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t, std::size_t)>& body);

/// splitmix64 step; used to derive independent child seeds.
std::uint64_t split_seed(std::uint64_t master, std::uint64_t index);

}  // namespace dvar
