#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace onemax {

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

/// Runs f(i) for i in [0, n). Iterations must be independent; callers own any
/// aggregation and must perform it in deterministic index order.
template <class F>
void parallel_for(std::size_t n, F&& f) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
        f(static_cast<std::size_t>(i));
#else
    for (std::size_t i = 0; i < n; ++i)
        f(i);
#endif
}

} // namespace onemax
