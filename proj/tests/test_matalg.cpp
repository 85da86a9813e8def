#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "schur/matalg.hpp"

using namespace schur;

static MatrixF random_matrix(const FiniteField& F, int n, std::mt19937_64& rng) {
    MatrixF m(F, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.at(i, j) = (FFElem)(rng() % F.q());
    return m;
}

TEST_CASE("matrix basics and inverse") {
    FiniteField F(5, 1);
    std::mt19937_64 rng(7);
    for (int t = 0; t < 30; ++t) {
        MatrixF a = random_matrix(F, 3, rng);
        MatrixF inv;
        if (try_inverse(a, inv)) {
            CHECK(a.mul(inv).equals(MatrixF::identity(F, 3)));
            CHECK(inv.mul(a).equals(MatrixF::identity(F, 3)));
        } else {
            CHECK(rank(a) < 3);
        }
    }
}

TEST_CASE("kernel and solve") {
    FiniteField F(3, 1);
    MatrixF a(F, 2, 3);
    a.at(0, 0) = 1;
    a.at(0, 1) = 2;
    a.at(1, 1) = 1;  // third column zero
    auto ker = right_kernel(a);
    CHECK((int)ker.size() == 1);
    for (auto& v : ker) {
        for (int i = 0; i < 2; ++i) {
            FFElem s = 0;
            for (int j = 0; j < 3; ++j) s = F.add(s, F.mul(a.at(i, j), v[j]));
            CHECK(s == 0);
        }
    }
    auto sol = solve_linear(a, {1, 2});
    REQUIRE(sol.has_value());
    auto& x = *sol;
    CHECK(F.add(F.mul(a.at(0, 0), x[0]), F.add(F.mul(a.at(0, 1), x[1]), F.mul(a.at(0, 2), x[2]))) == 1);
}

TEST_CASE("polynomial arithmetic") {
    FiniteField F(5, 1);
    Poly a = {1, 2, 3};                   // 3t^2+2t+1
    Poly b = {2, 1};                      // t+2
    auto [q, r] = poly_divmod(F, a, b);
    CHECK(poly_add(F, poly_mul(F, q, b), r) == poly_trim(a));
    CHECK(poly_deg(r) < poly_deg(b));
    CHECK(poly_gcd(F, poly_mul(F, a, b), b) == poly_monic(F, b));
    auto inv = poly_invmod(F, {2, 1}, {2, 0, 1});  // t+2 mod t^2+2
    REQUIRE(inv.has_value());
    CHECK(poly_mod(F, poly_mul(F, *inv, {2, 1}), {2, 0, 1}) == Poly{1});
}

TEST_CASE("charpoly of companion recovers the polynomial") {
    FiniteField F(7, 1);
    std::mt19937_64 rng(21);
    for (int t = 0; t < 20; ++t) {
        int n = 1 + (int)(rng() % 4);
        Poly f(n + 1, 0);
        for (int i = 0; i < n; ++i) f[i] = (FFElem)(rng() % 7);
        f[n] = 1;
        RegularMatrix rm = RegularMatrix::companion(F, f);
        CHECK(rm.char_poly() == f);
        CHECK(is_regular(rm.beta()));
    }
}

TEST_CASE("regularity") {
    FiniteField F(3, 1);
    RegularMatrix j2 = RegularMatrix::jordan(F, {{0, 2}});
    CHECK(is_regular(j2.beta()));
    MatrixF scalar = MatrixF::identity(F, 2).scaled(2);
    CHECK(!is_regular(scalar));
    CHECK_THROWS_AS(RegularMatrix::from_matrix(scalar), Error);
    CHECK_THROWS_AS(RegularMatrix::jordan(F, {{1, 1}, {1, 2}}), Error);  // duplicate eigenvalue
    // regular <=> centralizer has dimension n (Sylvester kernel)
    std::mt19937_64 rng(3);
    FiniteField F5(5, 1);
    for (int t = 0; t < 40; ++t) {
        int n = 2 + (int)(rng() % 2);
        MatrixF m = random_matrix(F5, n, rng);
        // kernel of X -> Xm - mX
        MatrixF op(F5, n * n, n * n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                MatrixF e(F5, n, n);
                e.at(a, b) = F5.one();
                MatrixF c = e.mul(m).sub(m.mul(e));
                auto v = c.vec();
                for (int i = 0; i < n * n; ++i) op.at(i, a * n + b) = v[i];
            }
        int cent_dim = (int)right_kernel(op).size();
        CHECK(is_regular(m) == (cent_dim == n));
    }
}

TEST_CASE("jordan builders") {
    FiniteField F(5, 1);
    RegularMatrix a = RegularMatrix::jordan(F, {{3, 1}});
    CHECK(a.n() == 1);
    CHECK(a.beta().at(0, 0) == 3);
    RegularMatrix b = RegularMatrix::jordan(F, {{1, 2}, {2, 2}});
    CHECK(b.n() == 4);
    CHECK(is_regular(b.beta()));
    CHECK(b.split());
    CHECK(!b.separable());
    CHECK(b.jordan_blocks().size() == 2);
    FiniteField F3(3, 1);
    RegularMatrix c = RegularMatrix::jordan(F3, {{0, 2}});
    CHECK(is_regular(c.beta()));
    CHECK(!c.separable());
}

TEST_CASE("centralizer algebra is F_q[t]/(chi)") {
    FiniteField F(3, 1);
    RegularMatrix rm = RegularMatrix::jordan(F, {{0, 2}});
    CentralizerAlgebra C(rm);
    // |F[beta]^x| = q^n - q^{n-1} = 6 for J_2
    CHECK(C.unit_count() == 6);
    for (auto& u : C.units()) {
        auto inv = C.inv(u);
        CHECK(C.mul(u, inv) == C.one());
        MatrixF mu = C.to_matrix(u);
        CHECK(mu.mul(rm.beta()).equals(rm.beta().mul(mu)));  // commutes
        CHECK(C.from_matrix(mu) == u);
    }
    CHECK(!C.is_unit({0, 1}));  // the nilpotent N
    CHECK_THROWS_AS(C.inv({0, 1}), Error);
    MatrixF e21(F, 2, 2);
    e21.at(1, 0) = 1;
    CHECK_THROWS_AS(C.from_matrix(e21), Error);  // not in the centralizer
}

TEST_CASE("symplectic form descends and matches the hand value") {
    FiniteField F(3, 1);
    RegularMatrix rm = RegularMatrix::jordan(F, {{0, 2}});
    SymplecticSpace sp = build_symplectic_space(rm);
    MatrixF e21(F, 2, 2), e11(F, 2, 2);
    e21.at(1, 0) = 1;
    e11.at(0, 0) = 1;
    CHECK(sp.form(e21, e21) == 0);
    CHECK(sp.form(e21, e11) == 1);  // tr((E21 E11 - E11 E21) J2(0)) = 1
    // X in F[beta] pairs to zero with everything
    CentralizerAlgebra C(rm);
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        CentralizerAlgebra::Elem z = {(FFElem)(rng() % 3), (FFElem)(rng() % 3)};
        MatrixF zm = C.to_matrix(z);
        MatrixF y = random_matrix(F, 2, rng);
        CHECK(sp.form(zm, y) == 0);
        // descends: adding a centralizer element changes nothing
        MatrixF x = random_matrix(F, 2, rng);
        CHECK(sp.form(x.add(zm), y) == sp.form(x, y));
    }
}

TEST_CASE("quotient dimension and nondegeneracy, exhaustive n=2 q=3") {
    FiniteField F(3, 1);
    std::vector<MatrixF> all;
    for (int idx = 0; idx < 81; ++idx) {
        MatrixF m(F, 2, 2);
        int t = idx;
        for (int k = 0; k < 4; ++k) {
            m.at(k / 2, k % 2) = t % 3;
            t /= 3;
        }
        all.push_back(m);
    }
    int regular_count = 0;
    for (auto& m : all) {
        if (!is_regular(m)) continue;
        ++regular_count;
        RegularMatrix rm = RegularMatrix::from_matrix(m);
        SymplecticSpace sp = build_symplectic_space(rm);
        CHECK(sp.dim() == 2);
        CHECK(rank(sp.gram()) == 2);
        CHECK(sp.gram().at(0, 1) != 0);
        CHECK(sp.gram().at(0, 0) == 0);
    }
    CHECK(regular_count > 0);
}

TEST_CASE("space roundtrips") {
    FiniteField F(5, 1);
    RegularMatrix rm = RegularMatrix::jordan(F, {{0, 3}});
    SymplecticSpace sp = build_symplectic_space(rm);
    CHECK(sp.dim() == 6);
    CHECK(rank(sp.gram()) == 6);
    std::mt19937_64 rng(17);
    for (int t = 0; t < 30; ++t) {
        MatrixF x = random_matrix(F, 3, rng);
        auto qc = sp.quot_coords(x);
        auto cc = sp.cent_coords(x);
        MatrixF rebuilt = sp.section(qc);
        for (int k = 0; k < 3; ++k)
            if (cc[k] != 0) rebuilt = rebuilt.add(rm.powers()[k].scaled(cc[k]));
        CHECK(rebuilt.equals(x));
        // form_coords agrees with form on sections
        MatrixF y = random_matrix(F, 3, rng);
        CHECK(sp.form_coords(sp.quot_coords(x), sp.quot_coords(y)) ==
              sp.form(sp.section(sp.quot_coords(x)), sp.section(sp.quot_coords(y))));
    }
}

TEST_CASE("n=1 gives the zero space") {
    FiniteField F(7, 1);
    RegularMatrix rm = RegularMatrix::jordan(F, {{4, 1}});
    SymplecticSpace sp = build_symplectic_space(rm);
    CHECK(sp.dim() == 0);
}

TEST_CASE("transpose-orthogonal complement") {
    FiniteField F(5, 1);
    RegularMatrix rm = RegularMatrix::jordan(F, {{1, 2}});
    SymplecticSpace sp = build_symplectic_space(rm, ComplementKind::TransposeOrtho);
    // every complement basis element is trace-orthogonal to F[beta]
    for (auto& e : sp.quotient_basis())
        for (auto& P : rm.powers()) {
            FFElem s = 0;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) s = F.add(s, F.mul(e.at(i, j), P.at(i, j)));
            CHECK(s == 0);
        }
    // p = n: the transpose pairing degenerates on F[J_3] over F_3
    FiniteField F3(3, 1);
    RegularMatrix j3 = RegularMatrix::jordan(F3, {{0, 3}});
    CHECK_THROWS_AS(build_symplectic_space(j3, ComplementKind::TransposeOrtho), Error);
}

TEST_CASE("split polarization") {
    FiniteField F(7, 1);
    RegularMatrix rm = RegularMatrix::jordan(F, {{1, 3}});
    SymplecticSpace sp = build_symplectic_space(rm);
    Polarization pol = polarization_split(sp);
    CHECK((int)pol.wminus.size() == 3);
    CHECK((int)pol.wplus.size() == 3);
    // W+ sigma_eps = W+ for every unit
    CentralizerAlgebra C(rm);
    for (auto& eps : C.units()) {
        MatrixF sig = sp.conj_action(C, eps);
        SpanBuilder plus_span(F, sp.dim());
        for (auto& w : pol.wplus) plus_span.add(w);
        for (auto& w : pol.wplus) CHECK(plus_span.contains(row_apply(F, w, sig)));
    }
    // non-split input is rejected
    FiniteField F3(3, 1);
    RegularMatrix irr = RegularMatrix::companion(F3, {1, 2, 1, 1});
    if (irr.irreducible()) {
        SymplecticSpace spi = build_symplectic_space(irr);
        CHECK_THROWS_AS(polarization_split(spi), Error);
    }
}

TEST_CASE("involution polarization, quadratic normal form") {
    FiniteField F(3, 1);
    // alpha = 2 is a non-square mod 3; beta = [[0,2],[1,0]]
    MatrixF b(F, 2, 2);
    b.at(0, 1) = 2;
    b.at(1, 0) = 1;
    RegularMatrix rm = RegularMatrix::from_matrix(b);
    CHECK(rm.irreducible());
    InvolutionData inv = involution_data(rm);
    CHECK(inv.g.at(0, 1) == 1);
    CHECK(inv.g.at(1, 0) == 1);
    CHECK(inv.g.at(0, 0) == 0);
    // star is an involution and tr(XY beta) = tr(Y* X* beta)
    std::mt19937_64 rng(11);
    for (int t = 0; t < 100; ++t) {
        MatrixF x = random_matrix(F, 2, rng), y = random_matrix(F, 2, rng);
        CHECK(inv.star(inv.star(x)).equals(x));
        CHECK(x.mul(y).mul(rm.beta()).trace() ==
              inv.star(y).mul(inv.star(x)).mul(rm.beta()).trace());
    }
    SymplecticSpace sp = build_symplectic_space(rm);
    Polarization pol = polarization_involution(sp);
    // W- is spanned by diag(1,-1) mod F[beta]
    MatrixF h(F, 2, 2);
    h.at(0, 0) = 1;
    h.at(1, 1) = 2;
    CHECK(pol.wminus[0] == sp.quot_coords(h));
}

TEST_CASE("involution polarization, general irreducible") {
    FiniteField F(5, 1);
    // an irreducible cubic over F_5: t^3 + t + 1 (no roots)
    Poly f = {1, 1, 0, 1};
    REQUIRE(poly_irreducible(F, f));
    RegularMatrix rm = RegularMatrix::companion(F, f);
    SymplecticSpace sp = build_symplectic_space(rm);
    Polarization pol = polarization_involution(sp);
    CHECK((int)pol.wminus.size() == 3);
    InvolutionData inv = involution_data(rm);
    std::mt19937_64 rng(13);
    for (int t = 0; t < 100; ++t) {
        MatrixF x = random_matrix(F, 3, rng), y = random_matrix(F, 3, rng);
        CHECK(inv.star(inv.star(x)).equals(x));
        CHECK(x.mul(y).mul(rm.beta()).trace() ==
              inv.star(y).mul(inv.star(x)).mul(rm.beta()).trace());
    }
    // F[beta] is fixed by star
    for (auto& P : rm.powers()) CHECK(inv.star(P).equals(P));
    // is rejected for reducible charpoly
    RegularMatrix sp2 = RegularMatrix::jordan(F, {{0, 2}});
    SymplecticSpace s2 = build_symplectic_space(sp2);
    CHECK_THROWS_AS(polarization_involution(s2), Error);
}

TEST_CASE("darboux polarization always works") {
    FiniteField F(3, 1);
    for (auto rm : {RegularMatrix::jordan(F, {{0, 2}}), RegularMatrix::jordan(F, {{0, 3}}),
                    RegularMatrix::companion(F, {2, 2, 1})}) {
        SymplecticSpace sp = build_symplectic_space(rm);
        Polarization pol = polarization_darboux(sp);
        CHECK((int)pol.wminus.size() == sp.dim() / 2);
    }
}

TEST_CASE("sigma_eps is symplectic, exhaustive small cases") {
    FiniteField F(3, 1);
    for (auto rm : {RegularMatrix::jordan(F, {{0, 2}}), RegularMatrix::jordan(F, {{0, 3}}),
                    RegularMatrix::jordan(F, {{0, 1}, {1, 2}})}) {
        SymplecticSpace sp = build_symplectic_space(rm);
        CentralizerAlgebra C(rm);
        for (auto& eps : C.units()) {
            MatrixF sig = sp.conj_action(C, eps);
            // sig * gram * sig^t = gram
            CHECK(sig.mul(sp.gram()).mul(sig.transpose()).equals(sp.gram()));
        }
        // scalars act trivially
        for (FFElem c = 1; c < 3; ++c) {
            MatrixF sig = sp.conj_action(C, C.scalar(c));
            CHECK(sig.equals(MatrixF::identity(F, sp.dim())));
        }
    }
}

TEST_CASE("block diagonal keeps off-block space in the greedy complement") {
    FiniteField F(3, 1);
    RegularMatrix rm = RegularMatrix::jordan(F, {{0, 1}, {1, 2}});
    SymplecticSpace sp = build_symplectic_space(rm);
    // the greedy complement contains all off-block elementary matrices
    SpanBuilder span(F, 9);
    for (auto& e : sp.quotient_basis()) span.add(e.vec());
    auto& layout = rm.block_layout();
    REQUIRE(layout.size() == 2);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            bool off = (i < layout[1].first) != (j < layout[1].first);
            if (!off) continue;
            MatrixF e(F, 3, 3);
            e.at(i, j) = F.one();
            CHECK(span.contains(e.vec()));
        }
}
