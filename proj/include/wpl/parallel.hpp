#pragma once

#include <cstddef>
#include <functional>

namespace wpl {

/// Worker count: `requested` if nonzero, else the WPL_THREADS environment
/// variable, else the hardware concurrency (at least 1).
unsigned resolve_threads(unsigned requested);

/// Splits [0, count) into contiguous chunks run on up to `threads` workers.
/// `body(begin, end)` must only write state owned by its own range.
/// The first exception thrown by a worker is rethrown after all join.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace wpl
