#ifndef BUBBLELAB_PARALLEL_HPP
#define BUBBLELAB_PARALLEL_HPP

#include <cstddef>
#include <span>

namespace bubblelab {

/// Execution policy for the data-parallel kernels. Serial is the reference
/// implementation; Par runs the same per-output work under OpenMP. Outputs
/// are bit-identical because each output element is accumulated in a fixed
/// serial order regardless of the thread count.
enum class Exec { Serial, Par };

/// Pairwise summation in a fixed order (independent of threading).
double pairwise_sum(std::span<const double> x);

namespace detail {

template <class Fn>
void parallel_index_loop(Exec exec, std::ptrdiff_t count, Fn&& fn) {
    if (exec == Exec::Par) {
#pragma omp parallel for schedule(dynamic, 4)
        for (std::ptrdiff_t i = 0; i < count; ++i)
            fn(static_cast<std::size_t>(i));
    } else {
        for (std::ptrdiff_t i = 0; i < count; ++i)
            fn(static_cast<std::size_t>(i));
    }
}

} // namespace detail

} // namespace bubblelab

#endif
