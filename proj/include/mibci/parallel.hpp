#pragma once

#include <cstddef>
#include <functional>

namespace mibci {

/// Worker count used by parallel_for; 1 (the default) runs inline.
void set_num_threads(std::size_t n);
std::size_t num_threads();

/// Calls fn(i) for i in [0, n), split into contiguous chunks across threads.
/// Callers write results to index-owned slots; any reduction is done
/// afterwards in ascending index order so results do not depend on the
/// thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace mibci
