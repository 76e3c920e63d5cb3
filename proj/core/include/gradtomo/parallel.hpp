#pragma once

#include <cstddef>
#include <functional>

namespace gradtomo {

/// Worker count for library-internal loops. 0 selects the hardware concurrency.
/// The initial value is read from GRADTOMO_THREADS when set.
void set_thread_count(std::size_t count);
std::size_t thread_count();

/// Runs body(i) for i in [begin, end) split into contiguous chunks, one per worker.
/// Each index must write only to its own outputs; results do not depend on the worker count.
void parallel_for(std::size_t begin, std::size_t end, const std::function<void(std::size_t)>& body);

}  // namespace gradtomo
