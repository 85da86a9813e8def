#pragma once

#include <cstdint>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace schur {

// Worker count: SCHUR_THREADS env var wins, otherwise the OpenMP default.
// Everything routed through here so the CLI's --threads flag and the env var
// behave identically.
inline int& thread_override() {
    static int v = -1;
    return v;
}

inline int max_threads() {
    if (thread_override() > 0) return thread_override();
    if (const char* env = std::getenv("SCHUR_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_threads(int n) { thread_override() = n > 0 ? n : -1; }

// Data-parallel loop over [0, n). Bodies must be pure per-index writes into
// disjoint slots; all kernels in this project satisfy that.
template <class Fn>
void parallel_for(int64_t n, Fn&& fn) {
#ifdef _OPENMP
    const int nt = max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
    for (int64_t i = 0; i < n; ++i) fn(i);
#else
    for (int64_t i = 0; i < n; ++i) fn(i);
#endif
}

// Serial reference loop, kept for the kernel equivalence tests and the
// benchmark target.
template <class Fn>
void serial_for(int64_t n, Fn&& fn) {
    for (int64_t i = 0; i < n; ++i) fn(i);
}

}  // namespace schur
