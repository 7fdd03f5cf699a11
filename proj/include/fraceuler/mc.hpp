#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fraceuler {

/// Parallel loop over Monte Carlo path indices. Bodies must write only to
/// per-index slots; reductions happen afterwards in index order, so results
/// do not depend on scheduling or thread count.
template <typename F>
void for_each_path(std::int64_t count, F&& f) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
    for (std::int64_t i = 0; i < count; ++i) f(i);
}

inline void set_thread_count(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

/// Resolve thread count: explicit argument, else FRACEULER_THREADS, else 0 (library default).
inline int resolve_thread_count(int cli_threads) {
    if (cli_threads > 0) return cli_threads;
    if (const char* env = std::getenv("FRACEULER_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 0;
}

}  // namespace fraceuler
