#pragma once

#include <cstddef>
#include <functional>

namespace kfreelat {

// Threading is slab based: work splits into indexed slabs, each worker fills
// its own slot, and the caller reduces the slots in index order. Results are
// therefore independent of the thread count.

// requested > 0 uses that many threads, 0 picks hardware concurrency.
int resolve_threads(int requested);

// Process-wide default used when a call site passes threads = 0 and the
// default itself was set (CLI --threads hook). 0 means auto.
void set_default_threads(int threads);
int default_threads();

// Runs fn(i) for each i in [0, count). fn must only write to state owned by
// slab i. Exceptions propagate; the first one thrown wins.
void parallel_for_index(std::size_t count, int threads,
                        const std::function<void(std::size_t)>& fn);

}  // namespace kfreelat
