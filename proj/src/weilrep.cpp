#include "schur/weilrep.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "schur/parallel.hpp"

namespace schur {

CMatrix CMatrix::identity(int dim) {
    CMatrix m(dim);
    for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::mul(const CMatrix& o) const {
    CMatrix r(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            auto v = at(i, k);
            if (std::abs(v) < 1e-15) continue;
            for (int j = 0; j < n; ++j) r.at(i, j) += v * o.at(k, j);
        }
    return r;
}

CMatrix CMatrix::adjoint() const {
    CMatrix r(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r.at(i, j) = std::conj(at(j, i));
    return r;
}

CMatrix CMatrix::scaled(std::complex<double> c) const {
    CMatrix r = *this;
    for (auto& v : r.a) v *= c;
    return r;
}

double CMatrix::max_abs_diff(const CMatrix& o) const {
    double m = 0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - o.a[i]));
    return m;
}

double CMatrix::max_abs() const {
    double m = 0;
    for (auto& v : a) m = std::max(m, std::abs(v));
    return m;
}

std::complex<double> CMatrix::scalar_ratio(const CMatrix& B, double tol) const {
    // s = tr(B^* A)/n for unitary B; then verify A ~ s B entrywise
    std::complex<double> s = 0;
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) s += std::conj(B.at(k, i)) * at(k, i);
    s /= (double)n;
    double err = max_abs_diff(B.scaled(s));
    require(err < tol, Errc::IntertwinerNotScalar, "operators differ by more than a scalar");
    return s;
}

bool CMatrix::is_unitary(double tol) const {
    return adjoint().mul(*this).max_abs_diff(CMatrix::identity(n)) < tol;
}

RootOfUnity snap_to_root(std::complex<double> z, int64_t M, double tol) {
    double arg = std::arg(z) / (2.0 * M_PI);
    int64_t k = (int64_t)std::llround(arg * (double)M);
    k = ((k % M) + M) % M;
    RootOfUnity r(M, k);
    require(std::abs(z - r.value()) < tol, Errc::SnapFailure,
            "value is not close to a root of unity of the expected order");
    return r;
}

UnitGroup unit_group(const CentralizerAlgebra& C) {
    require(!C.units().empty(), Errc::ConfigError, "unit list not materialized");
    std::map<CentralizerAlgebra::Elem, int> index;
    for (size_t i = 0; i < C.units().size(); ++i) index[C.units()[i]] = (int)i;
    int n = (int)C.units().size();
    AbelianGroupTable table(n, [&](int a, int b) {
        return index.at(C.mul(C.units()[a], C.units()[b]));
    });
    UnitGroup g(&C, C.units(), std::move(table));
    g.index_ = std::move(index);
    return g;
}

int UnitGroup::index_of(const CentralizerAlgebra::Elem& e) const { return index_.at(e); }

SchrodingerModel::SchrodingerModel(const SymplecticSpace& sp, Polarization pol)
    : sp_(&sp), pol_(std::move(pol)) {
    validate_polarization(sp, pol_);
    const FiniteField& F = sp.field();
    int D = sp.dim();
    L_ = D / 2;
    dim_ = 1;
    for (int i = 0; i < L_; ++i) dim_ *= F.q();
    R_ = MatrixF(F, D, D);
    for (int i = 0; i < L_; ++i)
        for (int j = 0; j < D; ++j) R_.at(i, j) = pol_.wminus[i][j];
    for (int i = 0; i < L_; ++i)
        for (int j = 0; j < D; ++j) R_.at(L_ + i, j) = pol_.wplus[i][j];
    if (D > 0) {
        Rinv_ = inverse(R_);
        J_ = R_.mul(sp.gram()).mul(R_.transpose());
        P_ = MatrixF(F, L_, L_);
        for (int i = 0; i < L_; ++i)
            for (int j = 0; j < L_; ++j) {
                P_.at(i, j) = J_.at(i, L_ + j);
                require(J_.at(i, j) == 0 && J_.at(L_ + i, L_ + j) == 0, Errc::Internal,
                        "polarization coordinates are not isotropic");
            }
        MatrixF dummy;
        require(try_inverse(P_, dummy), Errc::Internal, "pairing block singular");
    }
}

std::vector<FFElem> SchrodingerModel::pol_coords(const std::vector<FFElem>& quot) const {
    return row_apply(field(), quot, Rinv_);
}

std::vector<FFElem> SchrodingerModel::quot_coords(const std::vector<FFElem>& pol) const {
    return row_apply(field(), pol, R_);
}

FFElem SchrodingerModel::form_pol(const std::vector<FFElem>& x,
                                  const std::vector<FFElem>& y) const {
    const FiniteField& F = field();
    FFElem s = 0;
    int D = 2 * L_;
    for (int i = 0; i < D; ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < D; ++j)
            if (y[j] != 0) s = F.add(s, F.mul(x[i], F.mul(J_.at(i, j), y[j])));
    }
    return s;
}

HeisenbergElement SchrodingerModel::compose(const HeisenbergElement& h1,
                                            const HeisenbergElement& h2) const {
    const FiniteField& F = field();
    HeisenbergElement r;
    r.v.resize(2 * L_);
    for (int i = 0; i < 2 * L_; ++i) r.v[i] = F.add(h1.v[i], h2.v[i]);
    FFElem arg = F.mul(F.half(), form_pol(h1.v, h2.v));
    r.s = h1.s.times(h2.s).times(F.additive_character(arg));
    return r;
}

std::vector<FFElem> SchrodingerModel::point(int64_t idx) const {
    const FiniteField& F = field();
    std::vector<FFElem> w(L_);
    for (int i = 0; i < L_; ++i) {
        w[i] = (FFElem)(idx % F.q());
        idx /= F.q();
    }
    return w;
}

int64_t SchrodingerModel::index(const std::vector<FFElem>& w) const {
    const FiniteField& F = field();
    int64_t idx = 0;
    for (int i = L_ - 1; i >= 0; --i) idx = idx * F.q() + w[i];
    return idx;
}

namespace {

// <x_minus, y_plus> for L-coordinate halves via the pairing block
FFElem pair_mp(const FiniteField& F, const MatrixF& P, const std::vector<FFElem>& xm,
               const std::vector<FFElem>& yp) {
    FFElem s = 0;
    int L = P.rows();
    for (int i = 0; i < L; ++i) {
        if (xm[i] == 0) continue;
        for (int j = 0; j < L; ++j)
            if (yp[j] != 0) s = F.add(s, F.mul(xm[i], F.mul(P.at(i, j), yp[j])));
    }
    return s;
}

std::vector<FFElem> add_vec(const FiniteField& F, const std::vector<FFElem>& a,
                            const std::vector<FFElem>& b) {
    std::vector<FFElem> r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = F.add(a[i], b[i]);
    return r;
}

}  // namespace

CMatrix SchrodingerModel::pi_matrix(const HeisenbergElement& h) const {
    const FiniteField& F = field();
    std::vector<FFElem> um(h.v.begin(), h.v.begin() + L_);
    std::vector<FFElem> up(h.v.begin() + L_, h.v.end());
    CMatrix m((int)dim_);
    FFElem base = F.mul(F.half(), pair_mp(F, P_, um, up));
    for (int64_t wi = 0; wi < dim_; ++wi) {
        auto w = point(wi);
        FFElem arg = F.add(base, pair_mp(F, P_, w, up));
        auto phase = h.s.times(F.additive_character(arg));
        m.at((int)wi, (int)index(add_vec(F, w, um))) = phase.value();
    }
    return m;
}

std::vector<std::complex<double>> SchrodingerModel::schrodinger_apply(
    const HeisenbergElement& h, const std::vector<std::complex<double>>& f) const {
    CMatrix m = pi_matrix(h);
    std::vector<std::complex<double>> out(dim_, 0.0);
    for (int64_t i = 0; i < dim_; ++i)
        for (int64_t j = 0; j < dim_; ++j) out[i] += m.at((int)i, (int)j) * f[j];
    return out;
}

MatrixF SchrodingerModel::sigma_of_unit(const CentralizerAlgebra& C,
                                        const CentralizerAlgebra::Elem& eps) const {
    require(C.is_unit(eps), Errc::NotUnit, "sigma of a non-unit");
    MatrixF sq = sp_->conj_action(C, eps);
    MatrixF s = R_.mul(sq).mul(Rinv_);
    require(s.mul(J_).mul(s.transpose()).equals(J_), Errc::Internal, "sigma not symplectic");
    return s;
}

CMatrix SchrodingerModel::weil_operator(const MatrixF& sigma) const {
    const FiniteField& F = field();
    require(dim_ <= 400, Errc::ConfigError, "operator path capped at dimension 400");
    // blocks (row convention): a: W'->W', b: W'->W, c: W->W', d: W->W
    auto block = [&](int r0, int c0) {
        MatrixF m(F, L_, L_);
        for (int i = 0; i < L_; ++i)
            for (int j = 0; j < L_; ++j) m.at(i, j) = sigma.at(r0 + i, c0 + j);
        return m;
    };
    MatrixF A = block(0, 0), B = block(0, L_), Cc = block(L_, 0), D = block(L_, L_);
    std::vector<std::vector<FFElem>> kernel = right_kernel(Cc.transpose());
    SpanBuilder span(F, L_);
    for (auto& v : kernel) span.add(v);
    std::vector<std::vector<FFElem>> comp;
    for (int i = 0; i < L_; ++i) {
        std::vector<FFElem> e(L_, 0);
        e[i] = F.one();
        if (span.add(e)) comp.push_back(std::move(e));
    }
    int k = (int)comp.size();
    int64_t reps = 1;
    for (int i = 0; i < k; ++i) reps *= F.q();
    CMatrix m((int)dim_);
    for (int64_t wi = 0; wi < dim_; ++wi) {
        auto w = point(wi);
        auto wa = row_apply(F, w, A);
        auto wb = row_apply(F, w, B);
        for (int64_t t = 0; t < reps; ++t) {
            std::vector<FFElem> v(L_, 0);
            int64_t tt = t;
            for (int i = 0; i < k; ++i) {
                FFElem c = (FFElem)(tt % F.q());
                tt /= F.q();
                if (c != 0)
                    for (int j = 0; j < L_; ++j) v[j] = F.add(v[j], F.mul(c, comp[i][j]));
            }
            auto vc = row_apply(F, v, Cc);
            auto vd = row_apply(F, v, D);
            auto x = add_vec(F, wa, vc);  // lands in W'
            auto y = add_vec(F, wb, vd);  // lands in W
            FFElem arg = F.sub(F.mul(F.half(), pair_mp(F, P_, x, y)),
                               F.mul(F.half(), pair_mp(F, P_, w, v)));
            m.at((int)wi, (int)index(x)) += F.additive_character(arg).value();
        }
    }
    CMatrix g = m.adjoint().mul(m);
    double c0 = g.at(0, 0).real();
    require(c0 > 1e-12, Errc::Internal, "weil operator collapsed");
    require(g.max_abs_diff(CMatrix::identity((int)dim_).scaled(c0)) < 1e-6 * c0, Errc::Internal,
            "weil operator is not a positive multiple of a unitary");
    return m.scaled(1.0 / std::sqrt(c0));
}

RootOfUnity SchrodingerModel::c_T_sigma(const MatrixF& s1, const MatrixF& s2) const {
    const FiniteField& F = field();
    if (L_ == 0) return RootOfUnity(4, 0);
    auto block = [&](const MatrixF& s, int r0, int c0) {
        MatrixF m(F, L_, L_);
        for (int i = 0; i < L_; ++i)
            for (int j = 0; j < L_; ++j) m.at(i, j) = s.at(r0 + i, c0 + j);
        return m;
    };
    MatrixF c1 = block(s1, L_, 0), d1 = block(s1, L_, L_);
    MatrixF a2 = block(s2, 0, 0), c2 = block(s2, L_, 0);
    auto complement = [&](const MatrixF& c) {
        std::vector<std::vector<FFElem>> kernel = right_kernel(c.transpose());
        SpanBuilder span(F, L_);
        for (auto& v : kernel) span.add(v);
        std::vector<std::vector<FFElem>> comp;
        for (int i = 0; i < L_; ++i) {
            std::vector<FFElem> e(L_, 0);
            e[i] = F.one();
            if (span.add(e)) comp.push_back(std::move(e));
        }
        return comp;
    };
    auto comp1 = complement(c1), comp2 = complement(c2);
    int k1 = (int)comp1.size(), k2 = (int)comp2.size();
    int k = k1 + k2;
    if (k == 0) return RootOfUnity(4, 0);
    // constraint (v c1) a2 + v' c2 = 0 on the complement coordinates
    MatrixF con(F, k, L_);
    for (int i = 0; i < k1; ++i) {
        auto r = row_apply(F, row_apply(F, comp1[i], c1), a2);
        for (int j = 0; j < L_; ++j) con.at(i, j) = r[j];
    }
    for (int i = 0; i < k2; ++i) {
        auto r = row_apply(F, comp2[i], c2);
        for (int j = 0; j < L_; ++j) con.at(k1 + i, j) = r[j];
    }
    auto sol = right_kernel(con.transpose());  // rows z with z * con = 0
    int r = (int)sol.size();
    if (r == 0) return RootOfUnity(4, 0);
    // Phi(z) = 2^{-1} [ <v c1, v d1> - <v c1, v'> ]
    auto phi = [&](const std::vector<FFElem>& z) {
        std::vector<FFElem> v(L_, 0), vp(L_, 0);
        for (int i = 0; i < k1; ++i)
            if (z[i] != 0)
                for (int j = 0; j < L_; ++j) v[j] = F.add(v[j], F.mul(z[i], comp1[i][j]));
        for (int i = 0; i < k2; ++i)
            if (z[k1 + i] != 0)
                for (int j = 0; j < L_; ++j) vp[j] = F.add(vp[j], F.mul(z[k1 + i], comp2[i][j]));
        auto vc = row_apply(F, v, c1);
        auto vd = row_apply(F, v, d1);
        FFElem t = F.sub(pair_mp(F, P_, vc, vd), pair_mp(F, P_, vc, vp));
        return F.mul(F.half(), t);
    };
    std::vector<FFElem> gram((size_t)r * r, 0);
    std::vector<FFElem> diag(r);
    for (int i = 0; i < r; ++i) diag[i] = phi(sol[i]);
    for (int i = 0; i < r; ++i) {
        gram[(size_t)i * r + i] = diag[i];
        for (int j = i + 1; j < r; ++j) {
            auto z = add_vec(F, sol[i], sol[j]);
            FFElem b = F.mul(F.half(), F.sub(F.sub(phi(z), diag[i]), diag[j]));
            gram[(size_t)i * r + j] = b;
            gram[(size_t)j * r + i] = b;
        }
    }
    QuadraticFormF Q(F, r, gram);
    return F.weil_constant_form(Q);
}

RootOfUnity SchrodingerModel::c_T(const CentralizerAlgebra& C,
                                  const CentralizerAlgebra::Elem& eps,
                                  const CentralizerAlgebra::Elem& eta) const {
    MatrixF s1 = sigma_of_unit(C, eps);
    MatrixF s2 = sigma_of_unit(C, eta);
    return c_T_sigma(s1, s2);
}

Cocycle2 c_T_table(const SchrodingerModel& model, const UnitGroup& G) {
    int n = G.order();
    std::vector<MatrixF> sigmas(n);
    for (int i = 0; i < n; ++i) sigmas[i] = model.sigma_of_unit(*G.C, G.elems[i]);
    std::vector<int64_t> table((size_t)n * n);
    parallel_for(n, [&](int64_t i) {
        for (int j = 0; j < n; ++j) {
            RootOfUnity v = model.c_T_sigma(sigmas[i], sigmas[j]);
            table[(size_t)i * n + j] = v.lifted(4).e;
        }
    });
    return Cocycle2(G.table, 4, std::move(table));
}

QuadraticCuspidal quadratic_cuspidal(const CentralizerAlgebra& C) {
    const RegularMatrix& rm = C.regular();
    const FiniteField& F = C.field();
    require(rm.n() == 2 && rm.irreducible(), Errc::WrongNormalForm,
            "quadratic cuspidal closed forms need an irreducible 2x2 beta");
    require(rm.beta().at(0, 0) == 0 && rm.beta().at(1, 1) == 0 &&
                rm.beta().at(1, 0) == F.one(),
            Errc::WrongNormalForm, "beta must be [[0, alpha],[1, 0]]");
    FFElem alpha = rm.beta().at(0, 1);
    require(alpha != 0 && F.legendre(alpha) == -1, Errc::WrongNormalForm,
            "alpha must be a non-square");
    return QuadraticCuspidal{&C, alpha};
}

std::pair<FFElem, FFElem> QuadraticCuspidal::ratio_parts(
    const CentralizerAlgebra::Elem& eps) const {
    auto bar = C->frobenius(eps);
    auto r = C->mul(eps, C->inv(bar));
    return {r[0], r[1]};
}

RootOfUnity QuadraticCuspidal::c_T_closed(const CentralizerAlgebra::Elem& eps,
                                          const CentralizerAlgebra::Elem& eta) const {
    const FiniteField& F = C->field();
    auto [ep, em] = ratio_parts(eps);
    auto [hp, hm] = ratio_parts(eta);
    auto [mp, mm] = ratio_parts(C->mul(eps, eta));
    (void)ep;
    (void)hp;
    (void)mp;
    if (em == 0 || hm == 0 || mm == 0) return RootOfUnity(4, 0);
    // gamma(a e)^-1 gamma(a h)^-1 gamma(a m): the inverse of the Weil constant
    // of Q_{eps,eta}, matching the operator composition exactly (the operator
    // cross-check test pins the direction)
    return F.weil_constant_scalar(F.mul(alpha, em))
        .inverse()
        .times(F.weil_constant_scalar(F.mul(alpha, hm)).inverse())
        .times(F.weil_constant_scalar(F.mul(alpha, mm)));
}

RootOfUnity QuadraticCuspidal::delta(const CentralizerAlgebra::Elem& eps) const {
    const FiniteField& F = C->field();
    auto [ep, em] = ratio_parts(eps);
    if (em != 0) return F.weil_constant_scalar(F.mul(alpha, em)).inverse();
    return RootOfUnity(4, F.legendre(ep) == 1 ? 0 : 2);
}

Polarization polarization_block_assembled(const SymplecticSpace& sp) {
    const RegularMatrix& rm = sp.regular();
    const FiniteField& F = sp.field();
    const auto& layout = rm.block_layout();
    require(!layout.empty(), Errc::WrongShape, "no block layout on beta");
    int n = rm.n();
    Polarization pol;
    pol.kind = Polarization::Kind::BlockAssembled;
    auto block_of = [&](int i) {
        for (size_t b = 0; b < layout.size(); ++b)
            if (i >= layout[b].first && i < layout[b].first + layout[b].second) return (int)b;
        return -1;
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int bi = block_of(i), bj = block_of(j);
            if (bi == bj) continue;
            MatrixF e(F, n, n);
            e.at(i, j) = F.one();
            if (bi > bj)
                pol.wminus.push_back(sp.quot_coords(e));
            else
                pol.wplus.push_back(sp.quot_coords(e));
        }
    for (auto& [start, size] : layout) {
        MatrixF sub(F, size, size);
        for (int i = 0; i < size; ++i)
            for (int j = 0; j < size; ++j) sub.at(i, j) = rm.beta().at(start + i, start + j);
        RegularMatrix sub_rm = RegularMatrix::from_matrix(sub);
        if (sub_rm.n() == 1) continue;  // zero-dimensional quotient
        SymplecticSpace sub_sp = build_symplectic_space(sub_rm);
        Polarization sub_pol = default_polarization(sub_sp);
        auto embed = [&](const std::vector<FFElem>& v) {
            MatrixF m = sub_sp.section(v);
            MatrixF big(F, n, n);
            for (int i = 0; i < size; ++i)
                for (int j = 0; j < size; ++j) big.at(start + i, start + j) = m.at(i, j);
            return sp.quot_coords(big);
        };
        for (auto& v : sub_pol.wminus) pol.wminus.push_back(embed(v));
        for (auto& v : sub_pol.wplus) pol.wplus.push_back(embed(v));
    }
    validate_polarization(sp, pol);
    return pol;
}

Polarization default_polarization(const SymplecticSpace& sp) {
    const RegularMatrix& rm = sp.regular();
    if (rm.split() && !rm.jordan_blocks().empty()) return polarization_split(sp);
    if (rm.irreducible()) return polarization_involution(sp);
    if (rm.block_layout().size() > 1) return polarization_block_assembled(sp);
    return polarization_darboux(sp);
}

BlockReductionReport c_T_block_reduction(const RegularMatrix& rm) {
    const FiniteField& F = rm.field();
    SymplecticSpace sp = build_symplectic_space(rm);
    Polarization pol = rm.block_layout().size() > 1 ? polarization_block_assembled(sp)
                                                    : default_polarization(sp);
    SchrodingerModel model(sp, pol);
    CentralizerAlgebra C(rm);
    UnitGroup G = unit_group(C);
    Cocycle2 global = c_T_table(model, G);

    const auto& layout = rm.block_layout();
    std::vector<std::unique_ptr<RegularMatrix>> sub_rms;
    std::vector<std::unique_ptr<CentralizerAlgebra>> sub_cs;
    std::vector<std::unique_ptr<SymplecticSpace>> sub_sps;
    std::vector<std::unique_ptr<SchrodingerModel>> sub_models;
    for (auto& [start, size] : layout) {
        MatrixF sub(F, size, size);
        for (int i = 0; i < size; ++i)
            for (int j = 0; j < size; ++j) sub.at(i, j) = rm.beta().at(start + i, start + j);
        sub_rms.push_back(std::make_unique<RegularMatrix>(RegularMatrix::from_matrix(sub)));
        sub_cs.push_back(std::make_unique<CentralizerAlgebra>(*sub_rms.back()));
        if (sub_rms.back()->n() > 1) {
            sub_sps.push_back(
                std::make_unique<SymplecticSpace>(build_symplectic_space(*sub_rms.back())));
            sub_models.push_back(std::make_unique<SchrodingerModel>(
                *sub_sps.back(), default_polarization(*sub_sps.back())));
        } else {
            sub_sps.push_back(nullptr);
            sub_models.push_back(nullptr);
        }
    }
    auto project = [&](const CentralizerAlgebra::Elem& eps, size_t b) {
        auto [start, size] = layout[b];
        MatrixF m = C.to_matrix(eps);
        MatrixF sub(F, size, size);
        for (int i = 0; i < size; ++i)
            for (int j = 0; j < size; ++j) sub.at(i, j) = m.at(start + i, start + j);
        return sub_cs[b]->from_matrix(sub);
    };
    int n = G.order();
    std::vector<int64_t> prod_table((size_t)n * n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            RootOfUnity v(4, 0);
            for (size_t b = 0; b < layout.size(); ++b) {
                if (!sub_models[b]) continue;
                v = v.times(sub_models[b]->c_T(*sub_cs[b], project(G.elems[i], b),
                                               project(G.elems[j], b)));
            }
            prod_table[(size_t)i * n + j] = v.lifted(4).e;
        }
    Cocycle2 product(G.table, 4, std::move(prod_table));
    auto pg = antisym_pairing(global);
    auto pp = antisym_pairing(product);
    BlockReductionReport rep;
    rep.group_order = n;
    rep.classes_equal = pg == pp;
    rep.tables_equal = global.table() == product.table();
    return rep;
}

}  // namespace schur
