#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "schur/cohom.hpp"

using namespace schur;

static AbelianGroupTable cyclic(int n) {
    return AbelianGroupTable(n, [n](int a, int b) { return (a + b) % n; });
}

static AbelianGroupTable product(int a, int b) {
    return AbelianGroupTable(a * b, [a, b](int x, int y) {
        int x1 = x % a, x2 = x / a, y1 = y % a, y2 = y / a;
        return (x1 + y1) % a + a * ((x2 + y2) % b);
    });
}

TEST_CASE("group table basics") {
    auto G = cyclic(6);
    CHECK(G.id() == 0);
    CHECK(G.exponent() == 6);
    CHECK(G.inv(2) == 4);
    CHECK(G.element_order(2) == 3);
    CHECK((int)G.generators().size() == 1);
    auto H = product(2, 4);
    CHECK(H.order() == 8);
    CHECK(H.exponent() == 4);
    CHECK((int)H.generators().size() == 2);
    CHECK_THROWS_AS(AbelianGroupTable(3, [](int a, int b) { return (a * b) % 3; }), Error);
}

TEST_CASE("constant and perturbed cocycles") {
    auto G = cyclic(5);
    std::vector<int64_t> flat(25, 0);
    Cocycle2 one(G, 7, flat);
    CHECK(is_cocycle(one));
    CHECK(is_trivial_class(one));
    auto w = solve_coboundary(one);
    CHECK(witness_matches(one, w));
    CHECK(w.delta[G.id()] == 0);
    flat[7] = 3;
    Cocycle2 bad(G, 7, flat);
    CHECK(!is_cocycle(bad));
}

TEST_CASE("Z/2 carry needs modulus 4") {
    auto G = cyclic(2);
    // c(1,1) = -1, all other values 1
    std::vector<int64_t> t = {0, 0, 0, 1};
    Cocycle2 c(G, 2, t);
    CHECK(is_cocycle(c));
    CHECK(is_trivial_class(c));  // trivial over C^x
    auto w = solve_coboundary(c);
    CHECK(w.M_prime == 4);
    CHECK(witness_matches(c, w));
    CHECK(w.delta[0] == 0);
    CHECK(w.delta[1] % 2 == 1);  // delta(1) is a primitive 4th root
}

TEST_CASE("carry cocycles on cyclic groups") {
    for (int n : {3, 4, 6, 9}) {
        auto G = cyclic(n);
        std::vector<int64_t> t((size_t)n * n);
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) t[(size_t)x * n + y] = (x + y) / n;  // in mu_n
        Cocycle2 c(G, n, t);
        CHECK(is_cocycle(c));
        CHECK(is_trivial_class(c));
        auto w = solve_coboundary(c);
        CHECK(witness_matches(c, w));
    }
}

TEST_CASE("bilinear pairing is a nontrivial class") {
    auto G = product(3, 3);
    int n = G.order();
    std::vector<int64_t> t((size_t)n * n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            int x2 = x / 3, y1 = y % 3;
            t[(size_t)x * n + y] = (x2 * y1) % 3;
        }
    Cocycle2 c(G, 3, t);
    CHECK(is_cocycle(c));
    CHECK(!is_trivial_class(c));
    CHECK_THROWS_AS(solve_coboundary(c), Error);
    auto pairing = antisym_pairing(c);
    // the pairing is nondegenerate: every nonidentity x pairs nontrivially
    for (int x = 0; x < n; ++x) {
        if (x == G.id()) continue;
        bool hit = false;
        for (int y = 0; y < n; ++y) hit = hit || pairing[(size_t)x * n + y] != 0;
        CHECK(hit);
    }
}

TEST_CASE("coboundaries are symmetric and trivial; pairing is coboundary-invariant") {
    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 10; ++trial) {
        int a = 2 + (int)(rng() % 4), b = 2 + (int)(rng() % 4);
        auto G = product(a, b);
        int n = G.order();
        int64_t M = 2 + (int)(rng() % 10);
        std::vector<int64_t> delta(n);
        for (auto& v : delta) v = (int64_t)(rng() % M);
        auto t = coboundary_of(G, M, delta);
        Cocycle2 c(G, M, t);
        CHECK(is_cocycle(c));
        CHECK(is_trivial_class(c));
        auto pairing0 = antisym_pairing(c);
        for (int64_t v : pairing0) CHECK(v == 0);
        auto w = solve_coboundary(c);
        CHECK(witness_matches(c, w));
        // multiplying any cocycle by a coboundary never changes the verdict
        // or the pairing (here: of the bilinear example on the same group)
        std::vector<int64_t> bil((size_t)n * n);
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) bil[(size_t)x * n + y] = ((x / a) * (y % a)) % a;
        Cocycle2 cb(G, a, bil);
        auto base_pairing = antisym_pairing(cb);
        bool base_verdict = is_trivial_class(cb);
        for (int k = 0; k < 100; ++k) {
            std::vector<int64_t> d2(n);
            for (auto& v : d2) v = (int64_t)(rng() % a);
            Cocycle2 shifted = cb.times(Cocycle2(G, a, coboundary_of(G, a, d2)));
            CHECK(is_trivial_class(shifted) == base_verdict);
            auto p = antisym_pairing(shifted);
            for (size_t i = 0; i < p.size(); ++i) CHECK(p[i] == base_pairing[i]);
        }
    }
}

TEST_CASE("witnesses are unique up to a character") {
    std::mt19937_64 rng(777);
    auto G = product(3, 4);
    int n = G.order();
    int64_t M = 6;
    std::vector<int64_t> delta0(n), dshift(n);
    for (auto& v : delta0) v = (int64_t)(rng() % M);
    for (auto& v : dshift) v = (int64_t)(rng() % M);
    Cocycle2 c(G, M, coboundary_of(G, M, delta0));
    Cocycle2 c2 = c.times(Cocycle2(G, M, coboundary_of(G, M, dshift)));
    auto w = solve_coboundary(c);
    auto w2 = solve_coboundary(c2);
    REQUIRE(w.M_prime == w2.M_prime);
    int64_t Mp = w.M_prime;
    int64_t f = Mp / M;
    // diff = w2 - w - lift(dshift) must be a homomorphism G -> Z/Mp
    std::vector<int64_t> diff(n);
    for (int x = 0; x < n; ++x)
        diff[x] = ((w2.delta[x] - w.delta[x] - f * dshift[x]) % Mp + Mp) % Mp;
    for (int t = 0; t < 200; ++t) {
        int x = (int)(rng() % n), y = (int)(rng() % n);
        CHECK((diff[x] + diff[y]) % Mp == diff[G.mul(x, y)] % Mp);
    }
}

TEST_CASE("trivial iff solvable, randomized") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        int a = 2 + (int)(rng() % 6), b = 1 + (int)(rng() % 6);
        auto G = product(a, b);
        int n = G.order();
        int d = (int)std::gcd((int64_t)a, (int64_t)b);
        int64_t M = (int64_t)a * b;
        std::vector<int64_t> delta(n);
        for (auto& v : delta) v = (int64_t)(rng() % M);
        std::vector<int64_t> t = coboundary_of(G, M, delta);
        bool twist = d > 1 && (rng() & 1);
        if (twist) {
            // add the bilinear pairing (M/d) x2 y1, a genuinely nontrivial class
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y) {
                    int64_t add = (M / d) * (((int64_t)(x / a) * (y % a)) % d);
                    t[(size_t)x * n + y] = (t[(size_t)x * n + y] + add) % M;
                }
        }
        Cocycle2 c(G, M, t);
        CHECK(is_cocycle(c));
        CHECK(is_trivial_class(c) == !twist);
        if (twist) {
            CHECK_THROWS_AS(solve_coboundary(c), Error);
        } else {
            CHECK(witness_matches(c, solve_coboundary(c)));
        }
    }
}

TEST_CASE("json round trip is bit exact") {
    auto G = cyclic(4);
    std::vector<int64_t> t(16);
    for (size_t i = 0; i < t.size(); ++i) t[i] = (int64_t)(i % 5);
    Cocycle2 c(G, 5, t);
    auto js = c.to_json();
    auto c2 = Cocycle2::from_json(G, js);
    CHECK(c2.to_json() == js);
    CoboundaryWitness w{20, {0, 3, 7, 11}};
    CHECK(CoboundaryWitness::from_json(w.to_json()).to_json() == w.to_json());
}
