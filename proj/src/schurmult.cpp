#include "schur/schurmult.hpp"

#include <map>
#include <random>
#include <sstream>

#include "json.hpp"
#include "schur/kernels.hpp"
#include "schur/parallel.hpp"

namespace schur {

namespace {

// tiny dense mod-p linear algebra for the dual-vector solves
struct ModP {
    int64_t p;
    int64_t inv(int64_t a) const {
        int64_t r = 1, x = ((a % p) + p) % p, e = p - 2;
        while (e) {
            if (e & 1) r = r * x % p;
            x = x * x % p;
            e >>= 1;
        }
        return r;
    }
};

// inverse of a square matrix mod p
std::vector<std::vector<int64_t>> invert_mod_p(int64_t p, std::vector<std::vector<int64_t>> M) {
    ModP mp{p};
    int n = (int)M.size();
    std::vector<std::vector<int64_t>> inv(n, std::vector<int64_t>(n, 0));
    for (int i = 0; i < n; ++i) inv[i][i] = 1;
    for (int col = 0, row = 0; col < n; ++col, ++row) {
        int sel = -1;
        for (int i = row; i < n; ++i)
            if (M[i][col] % p != 0) {
                sel = i;
                break;
            }
        require(sel >= 0, Errc::Internal, "dual-vector pairing matrix is singular");
        std::swap(M[row], M[sel]);
        std::swap(inv[row], inv[sel]);
        int64_t pivinv = mp.inv(M[row][col]);
        for (auto& v : M[row]) v = v * pivinv % p;
        for (auto& v : inv[row]) v = v * pivinv % p;
        for (int i = 0; i < n; ++i) {
            if (i == row) continue;
            int64_t f = ((M[i][col] % p) + p) % p;
            if (!f) continue;
            for (int j = 0; j < n; ++j) {
                M[i][j] = ((M[i][j] - f * M[row][j]) % p + p) % p;
                inv[i][j] = ((inv[i][j] - f * inv[row][j]) % p + p) % p;
            }
        }
    }
    return inv;
}

}  // namespace

AdditiveCharacterRho AdditiveCharacterRho::trace_form(const CentralizerAlgebra& C,
                                                      CentralizerAlgebra::Elem A) {
    AdditiveCharacterRho r(C, Kind::TraceForm);
    r.A_ = std::move(A);
    return r;
}

AdditiveCharacterRho AdditiveCharacterRho::transpose_form(const CentralizerAlgebra& C,
                                                          CentralizerAlgebra::Elem A) {
    AdditiveCharacterRho r(C, Kind::TransposeForm);
    r.A_ = std::move(A);
    return r;
}

AdditiveCharacterRho AdditiveCharacterRho::raw(const CentralizerAlgebra& C,
                                               std::vector<int32_t> functional) {
    AdditiveCharacterRho r(C, Kind::Raw);
    require((int)functional.size() == C.field().f() * C.n(), Errc::WrongShape,
            "raw functional has wrong length");
    r.functional_ = std::move(functional);
    return r;
}

AdditiveCharacterRho AdditiveCharacterRho::trivial(const CentralizerAlgebra& C) {
    return raw(C, std::vector<int32_t>(C.field().f() * C.n(), 0));
}

std::vector<AdditiveCharacterRho> AdditiveCharacterRho::enumerate(const CentralizerAlgebra& C) {
    const FiniteField& F = C.field();
    int len = F.f() * C.n();
    int64_t total = 1;
    for (int i = 0; i < len; ++i) total *= F.p();
    std::vector<AdditiveCharacterRho> out;
    out.reserve(total);
    for (int64_t idx = 0; idx < total; ++idx) {
        std::vector<int32_t> fn(len);
        int64_t t = idx;
        for (int i = 0; i < len; ++i) {
            fn[i] = (int32_t)(t % F.p());
            t /= F.p();
        }
        out.push_back(raw(C, std::move(fn)));
    }
    return out;
}

int32_t AdditiveCharacterRho::exponent(const CentralizerAlgebra::Elem& x) const {
    const FiniteField& F = C_->field();
    switch (kind_) {
        case Kind::TraceForm: {
            FFElem pair = C_->to_matrix(A_).mul(C_->to_matrix(x)).trace();
            return (int32_t)F.additive_character(pair).e;
        }
        case Kind::TransposeForm: {
            FFElem pair = C_->to_matrix(x).mul(C_->to_matrix(A_).transpose()).trace();
            return (int32_t)F.additive_character(pair).e;
        }
        case Kind::Raw: {
            int64_t s = 0;
            for (int i = 0; i < C_->n(); ++i) {
                auto digits = F.coeffs(x[i]);
                for (int j = 0; j < F.f(); ++j)
                    s += (int64_t)functional_[i * F.f() + j] * digits[j];
            }
            return (int32_t)(s % F.p());
        }
    }
    return 0;
}

RootOfUnity AdditiveCharacterRho::value(const CentralizerAlgebra::Elem& x) const {
    return RootOfUnity(C_->field().p(), exponent(x));
}

bool AdditiveCharacterRho::is_trivial() const {
    const FiniteField& F = C_->field();
    for (int i = 0; i < C_->n(); ++i)
        for (int j = 0; j < F.f(); ++j) {
            CentralizerAlgebra::Elem x = C_->zero();
            x[i] = F.pow(F.f() > 1 ? F.generator_t() : F.one(), j);
            if (exponent(x) != 0) return false;
        }
    return true;
}

std::string AdditiveCharacterRho::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::TraceForm:
            os << "trace A=";
            for (auto c : A_) os << c << ",";
            break;
        case Kind::TransposeForm:
            os << "transpose A=";
            for (auto c : A_) os << c << ",";
            break;
        case Kind::Raw:
            os << "raw l=";
            for (auto c : functional_) os << c << ",";
            break;
    }
    return os.str();
}

CentralizerAlgebra::Elem gamma_map(const SymplecticSpace& sp, const CentralizerAlgebra& C,
                                   const std::vector<FFElem>& v,
                                   const CentralizerAlgebra::Elem& eps) {
    require(C.is_unit(eps), Errc::NotUnit, "gamma of a non-unit");
    MatrixF e = C.to_matrix(eps);
    MatrixF einv = C.to_matrix(C.inv(eps));
    MatrixF conj = einv.mul(sp.section(v)).mul(e);
    // gamma is the centralizer component of the conjugated section
    return sp.cent_coords(conj);
}

DualSolver::DualSolver(const SymplecticSpace& sp, const CentralizerAlgebra& C,
                       const AdditiveCharacterRho& rho)
    : sp_(&sp), C_(&C), rho_(&rho) {
    const FiniteField& F = sp.field();
    int D = sp.dim();
    int f = F.f();
    int dim = D * f;
    if (D == 0) return;
    // F_p pairing matrix: B[(k,j),(l,m)] = Tr(twist u^j u^m G_{kl})
    FFElem u = f > 1 ? F.generator_t() : F.one();
    std::vector<std::vector<int64_t>> B(dim, std::vector<int64_t>(dim));
    for (int k = 0; k < D; ++k)
        for (int j = 0; j < f; ++j)
            for (int l = 0; l < D; ++l)
                for (int m = 0; m < f; ++m) {
                    FFElem val = F.mul(F.pow(u, j), F.mul(F.pow(u, m), sp.gram().at(k, l)));
                    B[k * f + j][l * f + m] = F.additive_character(val).e;
                }
    Binv_ = invert_mod_p(F.p(), std::move(B));
}

std::vector<FFElem> DualSolver::dual(const CentralizerAlgebra::Elem& eps) const {
    const SymplecticSpace& sp = *sp_;
    const CentralizerAlgebra& C = *C_;
    const FiniteField& F = sp.field();
    int D = sp.dim();
    int f = F.f();
    std::vector<FFElem> out(D, 0);
    if (D == 0) return out;
    FFElem u = f > 1 ? F.generator_t() : F.one();
    std::vector<CentralizerAlgebra::Elem> gam(D);
    MatrixF e = C.to_matrix(eps);
    MatrixF einv = C.to_matrix(C.inv(eps));
    for (int k = 0; k < D; ++k)
        gam[k] = sp.cent_coords(einv.mul(sp.quotient_basis()[k]).mul(e));
    int dim = D * f;
    std::vector<int64_t> ell(dim);
    for (int k = 0; k < D; ++k)
        for (int j = 0; j < f; ++j) {
            CentralizerAlgebra::Elem scaled(gam[k].size());
            FFElem uj = F.pow(u, j);
            for (size_t t = 0; t < gam[k].size(); ++t) scaled[t] = F.mul(uj, gam[k][t]);
            ell[k * f + j] = rho_->exponent(scaled);
        }
    int64_t p = F.p();
    for (int l = 0; l < D; ++l) {
        std::vector<int32_t> digits(f);
        for (int m = 0; m < f; ++m) {
            int64_t s = 0;
            for (int c = 0; c < dim; ++c) s += Binv_[l * f + m][c] * ell[c];
            digits[m] = (int32_t)(s % p);
        }
        out[l] = F.from_coeffs(digits);
    }
    return out;
}

CBetaRho::CBetaRho(const SymplecticSpace& sp, const UnitGroup& G, AdditiveCharacterRho rho)
    : sp_(&sp), G_(&G), rho_(std::move(rho)) {
    DualSolver solver(sp, *G.C, rho_);
    duals_.resize(G.order());
    for (int gi = 0; gi < G.order(); ++gi) duals_[gi] = solver.dual(G.elems[gi]);
}

std::vector<FFElem> CBetaRho::dual_vector(const CentralizerAlgebra::Elem& eps) const {
    return duals_[G_->index_of(eps)];
}

RootOfUnity CBetaRho::value(int i, int j) const {
    const FiniteField& F = sp_->field();
    int ij = G_->table.mul(i, j);
    FFElem arg = F.mul(F.half(), sp_->form_coords(duals_[i], duals_[ij]));
    return F.additive_character(arg);
}

RootOfUnity CBetaRho::value(const CentralizerAlgebra::Elem& eps,
                            const CentralizerAlgebra::Elem& eta) const {
    return value(G_->index_of(eps), G_->index_of(eta));
}

Cocycle2 CBetaRho::table() const {
    int n = G_->order();
    const FiniteField& F = sp_->field();
    auto t = kernels::pair_table_omp(
        n, [&](int i, int j) { return value(i, j).lifted(F.p()).e; });
    return Cocycle2(G_->table, F.p(), std::move(t));
}

bool almost_coboundary_check(const CBetaRho& c, const MatrixF& Btilde, int i, int j) {
    const SymplecticSpace& sp = c.space();
    const FiniteField& F = sp.field();
    const CentralizerAlgebra& C = *c.units().C;
    // rho~ must extend rho on F[beta]
    auto rho_tilde = [&](const MatrixF& X) {
        return F.additive_character(X.mul(Btilde.transpose()).trace());
    };
    for (int k = 0; k < C.n(); ++k) {
        CentralizerAlgebra::Elem e = C.zero();
        e[k] = F.one();
        require((int64_t)rho_tilde(C.to_matrix(e)).e == (int64_t)c.rho().exponent(e),
                Errc::NotAnExtension, "rho~ does not restrict to rho on F[beta]");
    }
    const auto& eps = c.units().elems[i];
    int ij = c.units().table.mul(i, j);
    MatrixF e = C.to_matrix(eps);
    MatrixF einv = C.to_matrix(C.inv(eps));
    MatrixF veta = sp.section(c.dual_vector(j));
    MatrixF conj = e.mul(veta).mul(einv).scaled(F.half());
    MatrixF vme = sp.section(c.dual_vector(ij)).scaled(F.half());
    MatrixF veps = sp.section(c.dual_vector(i)).scaled(F.half());
    RootOfUnity rhs =
        rho_tilde(conj).times(rho_tilde(vme).inverse()).times(rho_tilde(veps));
    return c.value(i, j).equals(rhs);
}

SplitWitness::SplitWitness(const CentralizerAlgebra& C, std::vector<FFElem> rho_coeffs)
    : C_(&C), rho_(std::move(rho_coeffs)) {
    const RegularMatrix& rm = C.regular();
    const FiniteField& F = C.field();
    int n = rm.n();
    require(rm.jordan_blocks().size() == 1 && rm.split() && n >= 2 && n <= 4, Errc::WrongShape,
            "split witnesses need a single Jordan block J_n(a), n in {2,3,4}");
    int64_t need = n == 2 ? 3 : n == 3 ? 5 : 7;
    require(F.p() > need, Errc::CharTooSmall, "characteristic too small for the witness");
    require((int)rho_.size() == n, Errc::WrongShape, "rho needs n coefficients");
    // power basis -> nilpotent basis: row k = coefficients of (a + N)^k
    FFElem a = rm.beta().at(0, 0);
    beta_to_nilpotent_ = MatrixF(F, n, n);
    // (a+N)^k = sum_j binom(k,j) a^{k-j} N^j
    std::vector<std::vector<int64_t>> binom(n, std::vector<int64_t>(n, 0));
    for (int k = 0; k < n; ++k) {
        binom[k][0] = 1;
        for (int j = 1; j <= k; ++j)
            binom[k][j] = binom[k - 1][j - 1] + (j <= k - 1 ? binom[k - 1][j] : 0);
    }
    for (int k = 0; k < n; ++k)
        for (int j = 0; j <= k; ++j)
            beta_to_nilpotent_.at(k, j) =
                F.mul(F.from_int(binom[k][j]), F.pow(a, k - j));
}

std::vector<FFElem> SplitWitness::exp_coords(const CentralizerAlgebra::Elem& eps) const {
    const FiniteField& F = C_->field();
    int n = C_->n();
    auto xN = row_apply(F, eps, beta_to_nilpotent_);  // coords on N powers
    require(xN[0] != 0, Errc::NotUnit, "exp coordinates of a non-unit");
    FFElem d0inv = F.inv(xN[0]);
    std::vector<FFElem> w(n);  // u - 1, nilpotent part
    w[0] = 0;
    for (int k = 1; k < n; ++k) w[k] = F.mul(xN[k], d0inv);
    // truncated log: sum (-1)^{j+1} w^j / j
    std::vector<FFElem> s(n, 0), power = w;
    for (int j = 1; j < n; ++j) {
        FFElem coef = F.mul(F.inv(F.from_int(j)), (j % 2 == 1) ? F.one() : F.neg(F.one()));
        for (int k = 0; k < n; ++k) s[k] = F.add(s[k], F.mul(coef, power[k]));
        // power *= w, truncated at N^n
        std::vector<FFElem> next(n, 0);
        for (int x = 0; x < n; ++x) {
            if (power[x] == 0) continue;
            for (int y = 0; x + y < n; ++y)
                if (w[y] != 0) next[x + y] = F.add(next[x + y], F.mul(power[x], w[y]));
        }
        power = std::move(next);
    }
    return std::vector<FFElem>(s.begin() + 1, s.end());
}

RootOfUnity SplitWitness::delta(const CentralizerAlgebra::Elem& eps) const {
    const FiniteField& F = C_->field();
    int n = C_->n();
    auto sc = exp_coords(eps);
    auto fr = [&](int64_t num, int64_t den) {
        FFElem v = F.from_int(num);
        return F.mul(v, F.inv(F.from_int(den)));
    };
    auto mulv = [&](std::initializer_list<FFElem> xs) {
        FFElem r = F.one();
        for (FFElem x : xs) r = F.mul(r, x);
        return r;
    };
    FFElem arg = 0;
    if (n == 2) {
        FFElem r = sc[0];
        // -rho_1^2 r^3 / 6
        arg = F.neg(mulv({fr(1, 6), rho_[1], rho_[1], r, r, r}));
    } else if (n == 3) {
        FFElem r = sc[0], s = sc[1];
        FFElem t1 = mulv({fr(1, 3), rho_[1], rho_[1], r, r, r});
        FFElem t2 = mulv({F.from_int(2), rho_[1], rho_[2], r, r, s});
        FFElem inner = F.sub(mulv({r, s, s}), mulv({fr(1, 20), r, r, r, r, r}));
        FFElem t3 = mulv({rho_[2], rho_[2], inner});
        arg = F.neg(F.mul(F.half(), F.add(t1, F.add(t2, t3))));
    } else {
        FFElem r = sc[0], s = sc[1], t = sc[2];
        FFElem r2 = F.mul(r, r), r3 = F.mul(r2, r), r4 = F.mul(r3, r), r5 = F.mul(r4, r);
        FFElem r7 = F.mul(r5, r2);
        FFElem s2 = F.mul(s, s), s3 = F.mul(s2, s), t2 = F.mul(t, t);
        FFElem a1 = mulv({fr(1, 3), rho_[1], rho_[1], r3});
        FFElem a2 = mulv({F.from_int(2), rho_[1], rho_[2], r2, s});
        FFElem a3 = mulv({rho_[2], rho_[2],
                          F.sub(F.add(mulv({F.from_int(2), r, s2}), F.mul(r2, t)),
                                F.mul(fr(1, 30), r5))});
        FFElem a4 = mulv({rho_[1], rho_[3],
                          F.add(F.add(mulv({F.from_int(2), r, s2}),
                                      mulv({F.from_int(2), r2, t})),
                                F.mul(fr(1, 30), r5))});
        FFElem a5 = mulv({rho_[2], rho_[3],
                          F.sub(F.add(mulv({F.from_int(4), r, s, t}), mulv({fr(4, 3), s3})),
                                mulv({fr(1, 3), r4, s}))});
        FFElem a6 = mulv({rho_[3], rho_[3],
                          F.add(F.sub(F.add(F.add(F.mul(s2, t), F.mul(r, t2)),
                                            F.mul(fr(1, 12), F.mul(r4, t))),
                                      mulv({fr(1, 3), r3, s2})),
                                F.mul(fr(1, 252), r7))});
        FFElem sum = F.add(a1, F.add(a2, F.add(a3, F.add(a4, F.add(a5, a6)))));
        arg = F.neg(F.mul(F.half(), sum));
    }
    return F.additive_character(arg);
}

CentralizerAlgebra::Elem SplitWitness::A_power_basis() const {
    const FiniteField& F = C_->field();
    // x_N = x_pow * T, so A_pow = rho_N * T^{-1}
    return row_apply(F, rho_, inverse(beta_to_nilpotent_));
}

int64_t split_witness_scan(const SymplecticSpace& sp, const CentralizerAlgebra& C,
                           const AdditiveCharacterRho& rho, const SplitWitness& sw,
                           int64_t num_pairs, uint64_t seed, bool parallel) {
    const FiniteField& F = sp.field();
    const auto& units = C.units();
    int64_t nu = (int64_t)units.size();
    require(nu > 0, Errc::ConfigError, "unit list not materialized");
    std::map<CentralizerAlgebra::Elem, int> index;
    for (int64_t i = 0; i < nu; ++i) index[units[i]] = (int)i;
    // duals and deltas for every unit, data-parallel
    DualSolver solver(sp, C, rho);
    std::vector<std::vector<FFElem>> duals(nu);
    std::vector<int64_t> deltas(nu);
    auto fill = [&](int64_t i) {
        duals[i] = solver.dual(units[i]);
        deltas[i] = sw.delta(units[i]).e;  // exponent mod p
    };
    if (parallel)
        parallel_for(nu, fill);
    else
        serial_for(nu, fill);
    int64_t p = F.p();
    auto pair_ok = [&](int i, int j) {
        int k = index.at(C.mul(units[i], units[j]));
        FFElem arg = F.mul(F.half(), sp.form_coords(duals[i], duals[k]));
        int64_t c = F.additive_character(arg).e;
        int64_t dd = ((deltas[j] - deltas[k] + deltas[i]) % p + p) % p;
        return c == dd;
    };
    if (num_pairs < 0) {
        auto ok = [&](int64_t idx) { return pair_ok((int)(idx / nu), (int)(idx % nu)); };
        return parallel ? kernels::count_failures_omp(nu * nu, ok)
                        : kernels::count_failures_serial(nu * nu, ok);
    }
    std::mt19937_64 rng(seed);
    std::vector<std::pair<int, int>> pairs(num_pairs);
    for (auto& pr : pairs) pr = {(int)(rng() % nu), (int)(rng() % nu)};
    auto ok = [&](int64_t idx) { return pair_ok(pairs[idx].first, pairs[idx].second); };
    return parallel ? kernels::count_failures_omp(num_pairs, ok)
                    : kernels::count_failures_serial(num_pairs, ok);
}

Cocycle2 combined_cocycle(const CBetaRho& cbr, const Cocycle2& ct) {
    return cbr.table().times(ct);
}

std::string SweepReport::to_json() const {
    nlohmann::ordered_json j;
    j["beta"] = beta;
    j["q"] = q;
    j["n"] = n;
    j["polarization"] = polarization;
    j["rho_count"] = rho_count;
    j["trivial_count"] = trivial_count;
    j["counterexamples"] = counterexamples;
    if (!witnesses.empty()) {
        auto arr = nlohmann::ordered_json::array();
        for (auto& w : witnesses) arr.push_back(nlohmann::ordered_json::parse(w));
        j["witnesses"] = arr;
    }
    return j.dump();
}

SweepReport conjecture_sweep(const RegularMatrix& rm, const SweepOptions& opt) {
    const FiniteField& F = rm.field();
    SymplecticSpace sp = build_symplectic_space(rm);
    CentralizerAlgebra C(rm);
    UnitGroup G = unit_group(C);
    SweepReport rep;
    rep.beta = rm.describe();
    rep.q = F.q();
    rep.n = rm.n();
    auto rhos = AdditiveCharacterRho::enumerate(C);
    if (opt.rho_cap >= 0 && (int64_t)rhos.size() > opt.rho_cap)
        rhos.erase(rhos.begin() + opt.rho_cap, rhos.end());
    rep.rho_count = (int)rhos.size();
    if (sp.dim() == 0) {
        // n = 1: everything is trivially trivial
        rep.polarization = "none";
        rep.trivial_count = rep.rho_count;
        return rep;
    }
    Polarization pol = default_polarization(sp);
    switch (pol.kind) {
        case Polarization::Kind::SplitTriangular: rep.polarization = "triangular"; break;
        case Polarization::Kind::Involution: rep.polarization = "involution"; break;
        case Polarization::Kind::BlockAssembled: rep.polarization = "block"; break;
        case Polarization::Kind::Custom: rep.polarization = "custom"; break;
    }
    SchrodingerModel model(sp, std::move(pol));
    Cocycle2 ct = c_T_table(model, G);
    auto job = [&](int i) -> uint8_t {
        CBetaRho cbr(sp, G, rhos[i]);
        Cocycle2 comb = combined_cocycle(cbr, ct);
        return is_trivial_class(comb) ? 1 : 0;
    };
    std::vector<uint8_t> trivial = opt.parallel
                                       ? kernels::map_jobs_omp((int)rhos.size(), job)
                                       : kernels::map_jobs_serial((int)rhos.size(), job);
    rep.trivial_count = 0;
    for (size_t i = 0; i < trivial.size(); ++i) {
        if (trivial[i])
            ++rep.trivial_count;
        else
            rep.counterexamples.push_back((int)i);
    }
    if (opt.want_witnesses) {
        for (size_t i = 0; i < trivial.size(); ++i) {
            if (!trivial[i]) continue;
            CBetaRho cbr(sp, G, rhos[i]);
            Cocycle2 comb = combined_cocycle(cbr, ct);
            rep.witnesses.push_back(solve_coboundary(comb).to_json());
        }
    }
    return rep;
}

}  // namespace schur
