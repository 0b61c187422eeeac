#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace biharm {

/// Worker count used by grid loops. Defaults to the hardware concurrency.
int thread_count();
void set_thread_count(int threads);

/// Runs body(i) for i in [0, count). If any call throws, the exception with
/// the lowest index is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Pairwise summation in a fixed order, independent of the thread count.
double pairwise_sum(std::span<const double> values);

}  // namespace biharm
