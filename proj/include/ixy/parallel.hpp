#ifndef IXY_PARALLEL_HPP_
#define IXY_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace ixy {

/// Worker count used by parallel_for. Defaults to the hardware concurrency;
/// only affects speed, never results.
void set_thread_count(int threads);
int thread_count();

/// Runs fn(i) for i in [0, n) on up to thread_count() workers. Each index is
/// processed exactly once; callers write results into pre-sized slots so the
/// output order is the index order. The first exception thrown is rethrown.
/// Calls made from inside a worker run serially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace ixy

#endif  // IXY_PARALLEL_HPP_
