#include "schur/kernels.hpp"

#include "schur/parallel.hpp"

namespace schur {
namespace kernels {

std::vector<int64_t> pair_table_serial(int n, const PairFn& fn) {
    std::vector<int64_t> out((size_t)n * n);
    serial_for(n, [&](int64_t i) {
        for (int j = 0; j < n; ++j) out[(size_t)i * n + j] = fn((int)i, j);
    });
    return out;
}

std::vector<int64_t> pair_table_omp(int n, const PairFn& fn) {
    std::vector<int64_t> out((size_t)n * n);
    parallel_for(n, [&](int64_t i) {
        for (int j = 0; j < n; ++j) out[(size_t)i * n + j] = fn((int)i, j);
    });
    return out;
}

int64_t count_failures_serial(int64_t n, const PredFn& ok) {
    int64_t bad = 0;
    for (int64_t i = 0; i < n; ++i)
        if (!ok(i)) ++bad;
    return bad;
}

int64_t count_failures_omp(int64_t n, const PredFn& ok) {
#ifdef _OPENMP
    int64_t bad = 0;
    const int nt = max_threads();
#pragma omp parallel for schedule(static) num_threads(nt) reduction(+ : bad)
    for (int64_t i = 0; i < n; ++i)
        if (!ok(i)) ++bad;
    return bad;
#else
    return count_failures_serial(n, ok);
#endif
}

std::vector<uint8_t> map_jobs_serial(int n, const JobFn& job) {
    std::vector<uint8_t> out(n);
    for (int i = 0; i < n; ++i) out[i] = job(i);
    return out;
}

std::vector<uint8_t> map_jobs_omp(int n, const JobFn& job) {
    std::vector<uint8_t> out(n);
    parallel_for(n, [&](int64_t i) { out[i] = job((int)i); });
    return out;
}

}  // namespace kernels
}  // namespace schur
