#pragma once

#include <cstddef>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace monoqt::par {

// Thread cap from MONOQT_THREADS (0 or unset = library default).
inline int max_threads() {
    const char* env = std::getenv("MONOQT_THREADS");
    long requested = 0;
    if (env != nullptr && *env != '\0') {
        requested = std::strtol(env, nullptr, 10);
        if (requested < 0) requested = 0;
    }
#ifdef _OPENMP
    if (requested == 0) return omp_get_max_threads();
    return static_cast<int>(requested);
#else
    (void)requested;
    return 1;
#endif
}

// Index-parallel map. Bodies must write only to their own slot so that the
// result is identical to the serial twin below for any thread count.
template <class F>
void parallel_for(std::size_t n, F&& body) {
#ifdef _OPENMP
    const int threads = max_threads();
    if (threads > 1 && n > 1) {
#pragma omp parallel for schedule(static) num_threads(threads)
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            body(static_cast<std::size_t>(i));
        return;
    }
#endif
    for (std::size_t i = 0; i < n; ++i) body(i);
}

// Serial reference twin, kept separate so tests and the benchmark can compare
// the two paths directly.
template <class F>
void serial_for(std::size_t n, F&& body) {
    for (std::size_t i = 0; i < n; ++i) body(i);
}

template <class F>
void run_for(std::size_t n, bool serial, F&& body) {
    if (serial)
        serial_for(n, body);
    else
        parallel_for(n, body);
}

} // namespace monoqt::par
