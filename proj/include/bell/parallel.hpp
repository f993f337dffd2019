#pragma once

#include <cstddef>
#include <functional>

namespace bell {

/// Runs fn(i) for i in [0, count). With jobs > 1 the index range is split
/// across that many threads; fn must be safe to call concurrently on
/// distinct indices. Results must be written to preallocated per-index
/// slots so the outcome is independent of the job count.
void parallel_for(std::size_t count, int jobs,
                  const std::function<void(std::size_t)>& fn);

}  // namespace bell
