// Times the OpenMP kernels against their serial reference implementations on
// a midsize workload (the c_T and c_{beta,rho} pair tables for J_3(1) over
// F_7, and a full conjecture sweep at q=5, n=2).

#include <chrono>
#include <cstdio>

#include "schur/grouporacle.hpp"
#include "schur/kernels.hpp"
#include "schur/parallel.hpp"

using namespace schur;

template <class Fn>
static double time_ms(Fn&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

int main() {
    std::printf("threads: %d\n", max_threads());
    {
        FiniteField F(7, 1);
        RegularMatrix rm = RegularMatrix::jordan(F, {{1, 3}});
        SymplecticSpace sp = build_symplectic_space(rm);
        SchrodingerModel model(sp, polarization_split(sp));
        CentralizerAlgebra C(rm);
        UnitGroup G = unit_group(C);
        int n = G.order();
        std::vector<MatrixF> sigmas(n);
        for (int i = 0; i < n; ++i) sigmas[i] = model.sigma_of_unit(C, G.elems[i]);
        auto fn = [&](int i, int j) -> int64_t {
            return model.c_T_sigma(sigmas[i], sigmas[j]).lifted(4).e;
        };
        std::vector<int64_t> a, b;
        double ts = time_ms([&] { a = kernels::pair_table_serial(n, fn); });
        double tp = time_ms([&] { b = kernels::pair_table_omp(n, fn); });
        std::printf("c_T table  J_3(1)/F_7  (%d^2 pairs): serial %8.1f ms   omp %8.1f ms   x%.2f  %s\n",
                    n, ts, tp, ts / tp, a == b ? "equal" : "MISMATCH");
    }
    {
        FiniteField F(7, 1);
        RegularMatrix rm = RegularMatrix::jordan(F, {{1, 3}});
        SymplecticSpace sp = build_symplectic_space(rm);
        CentralizerAlgebra C(rm);
        UnitGroup G = unit_group(C);
        auto rho = AdditiveCharacterRho::enumerate(C)[123];
        CBetaRho cbr(sp, G, rho);
        int n = G.order();
        auto fn = [&](int i, int j) -> int64_t { return cbr.value(i, j).e; };
        std::vector<int64_t> a, b;
        double ts = time_ms([&] { a = kernels::pair_table_serial(n, fn); });
        double tp = time_ms([&] { b = kernels::pair_table_omp(n, fn); });
        std::printf("c_beta_rho J_3(1)/F_7  (%d^2 pairs): serial %8.1f ms   omp %8.1f ms   x%.2f  %s\n",
                    n, ts, tp, ts / tp, a == b ? "equal" : "MISMATCH");
    }
    {
        FiniteField F(5, 1);
        RegularMatrix rm = RegularMatrix::jordan(F, {{0, 2}});
        SweepOptions serial_opt, par_opt;
        serial_opt.parallel = false;
        par_opt.parallel = true;
        SweepReport a, b;
        double ts = time_ms([&] { a = conjecture_sweep(rm, serial_opt); });
        double tp = time_ms([&] { b = conjecture_sweep(rm, par_opt); });
        std::printf("sweep      J_2(0)/F_5  (%d rho):     serial %8.1f ms   omp %8.1f ms   x%.2f  %s\n",
                    a.rho_count, ts, tp, ts / tp,
                    (a.trivial_count == b.trivial_count && a.counterexamples == b.counterexamples)
                        ? "equal"
                        : "MISMATCH");
    }
    return 0;
}
