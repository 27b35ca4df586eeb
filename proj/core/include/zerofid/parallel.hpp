#pragma once

#include <cstddef>
#include <functional>

namespace zerofid {

int default_workers();

// Runs fn(0), ..., fn(count-1) with at most `workers` running concurrently
// (workers <= 1 means inline).  Schedule order is unspecified; callers keep
// determinism by writing to disjoint, index-addressed slots.  The first
// exception thrown stops new work and is rethrown after all threads join.
void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t)>& fn);

}  // namespace zerofid
