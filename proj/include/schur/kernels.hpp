#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace schur {
namespace kernels {

// Data-parallel kernels with serial reference implementations. The OpenMP
// variants are the production path; the serial ones are kept for the
// equivalence tests and the benchmark target. All callbacks must be pure.

using PairFn = std::function<int64_t(int, int)>;
std::vector<int64_t> pair_table_serial(int n, const PairFn& fn);
std::vector<int64_t> pair_table_omp(int n, const PairFn& fn);

using PredFn = std::function<bool(int64_t)>;
int64_t count_failures_serial(int64_t n, const PredFn& ok);
int64_t count_failures_omp(int64_t n, const PredFn& ok);

using JobFn = std::function<uint8_t(int)>;
std::vector<uint8_t> map_jobs_serial(int n, const JobFn& job);
std::vector<uint8_t> map_jobs_omp(int n, const JobFn& job);

}  // namespace kernels
}  // namespace schur
