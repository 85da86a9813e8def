#include "schur/cohom.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"
#include "schur/parallel.hpp"

namespace schur {

namespace {

int64_t lcm_checked(int64_t a, int64_t b) {
    int64_t g = std::gcd(a, b);
    __int128 v = (__int128)(a / g) * b;
    require(v < ((__int128)1 << 62), Errc::SolverOverflow, "modulus lcm overflow");
    return (int64_t)v;
}

int64_t mul_checked(int64_t a, int64_t b) {
    __int128 v = (__int128)a * b;
    require(v < ((__int128)1 << 62), Errc::SolverOverflow, "witness modulus overflow");
    return (int64_t)v;
}

int64_t mod_pos(int64_t a, int64_t m) { return ((a % m) + m) % m; }
int64_t mod_pos128(__int128 a, int64_t m) {
    int64_t r = (int64_t)(a % m);
    return r < 0 ? r + m : r;
}

// extended gcd over the integers
int64_t ext_gcd(int64_t a, int64_t b, int64_t& x, int64_t& y) {
    if (b == 0) {
        x = 1;
        y = 0;
        return a;
    }
    int64_t x1, y1;
    int64_t g = ext_gcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

}  // namespace

AbelianGroupTable::AbelianGroupTable(int n, std::function<int(int, int)> mul) : n_(n) {
    require(n >= 1, Errc::ConfigError, "empty group");
    mul_.assign((size_t)n * n, 0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            int v = mul(a, b);
            require(v >= 0 && v < n, Errc::ConfigError, "multiplication out of range");
            mul_[(size_t)a * n + b] = v;
        }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < a; ++b)
            require(mul_[(size_t)a * n + b] == mul_[(size_t)b * n + a], Errc::ConfigError,
                    "group is not commutative");
    // associativity: exhaustive while n^3 is small, sampled otherwise
    if ((int64_t)n * n * n <= (1 << 25)) {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    require(this->mul(this->mul(a, b), c) == this->mul(a, this->mul(b, c)),
                            Errc::ConfigError, "group is not associative");
    } else {
        std::mt19937_64 rng(0x5eed);
        for (int t = 0; t < 200000; ++t) {
            int a = (int)(rng() % n), b = (int)(rng() % n), c = (int)(rng() % n);
            require(this->mul(this->mul(a, b), c) == this->mul(a, this->mul(b, c)),
                    Errc::ConfigError, "group is not associative");
        }
    }
    id_ = -1;
    for (int e = 0; e < n && id_ < 0; ++e) {
        bool ok = true;
        for (int a = 0; a < n && ok; ++a) ok = this->mul(e, a) == a;
        if (ok) id_ = e;
    }
    require(id_ >= 0, Errc::ConfigError, "no identity element");
    inv_.assign(n, -1);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (this->mul(a, b) == id_) {
                inv_[a] = b;
                break;
            }
    for (int a = 0; a < n; ++a) require(inv_[a] >= 0, Errc::ConfigError, "missing inverse");
    exponent_ = 1;
    for (int a = 0; a < n; ++a) exponent_ = lcm_checked(exponent_, element_order(a));
    // greedy generating set
    std::vector<char> span(n, 0);
    span[id_] = 1;
    int covered = 1;
    for (int a = 0; a < n && covered < n; ++a) {
        if (span[a]) continue;
        gens_.push_back(a);
        std::vector<int> frontier;
        for (int x = 0; x < n; ++x)
            if (span[x]) frontier.push_back(x);
        for (size_t i = 0; i < frontier.size(); ++i) {
            int y = this->mul(frontier[i], a);
            while (!span[y]) {
                span[y] = 1;
                ++covered;
                frontier.push_back(y);
                y = this->mul(y, a);
            }
        }
    }
}

int64_t AbelianGroupTable::element_order(int a) const {
    int64_t k = 1;
    int x = a;
    while (x != id_) {
        x = mul(x, a);
        ++k;
    }
    return k;
}

int AbelianGroupTable::power(int a, int64_t k) const {
    int64_t o = element_order(a);
    k = mod_pos(k, o);
    int r = id_, x = a;
    while (k) {
        if (k & 1) r = mul(r, x);
        x = mul(x, x);
        k >>= 1;
    }
    return r;
}

Cocycle2::Cocycle2(const AbelianGroupTable& G, int64_t M, std::vector<int64_t> table)
    : G_(&G), M_(M), table_(std::move(table)) {
    require(M >= 1, Errc::ConfigError, "modulus must be positive");
    require((int64_t)table_.size() == (int64_t)G.order() * G.order(), Errc::WrongShape,
            "cocycle table size mismatch");
    for (auto& v : table_) v = mod_pos(v, M_);
}

Cocycle2 Cocycle2::lifted(int64_t M2) const {
    require(M2 % M_ == 0, Errc::ConfigError, "lift needs divisible modulus");
    std::vector<int64_t> t = table_;
    int64_t f = M2 / M_;
    for (auto& v : t) v *= f;
    return Cocycle2(*G_, M2, std::move(t));
}

Cocycle2 Cocycle2::times(const Cocycle2& o) const {
    require(G_->order() == o.G_->order(), Errc::ConfigError,
            "cocycle product needs the same group");
    int64_t L = lcm_checked(M_, o.M_);
    Cocycle2 a = lifted(L), b = o.lifted(L);
    std::vector<int64_t> t(table_.size());
    for (size_t i = 0; i < t.size(); ++i) t[i] = mod_pos(a.table_[i] + b.table_[i], L);
    return Cocycle2(*G_, L, std::move(t));
}

std::string Cocycle2::to_json() const {
    nlohmann::ordered_json j;
    j["group_order"] = G_->order();
    j["M"] = M_;
    j["table"] = table_;
    return j.dump();
}

Cocycle2 Cocycle2::from_json(const AbelianGroupTable& G, const std::string& js) {
    auto j = nlohmann::ordered_json::parse(js);
    require((int)j["group_order"] == G.order(), Errc::ConfigError, "group order mismatch");
    return Cocycle2(G, j["M"].get<int64_t>(), j["table"].get<std::vector<int64_t>>());
}

bool is_cocycle(const Cocycle2& c) {
    const auto& G = c.group();
    int n = G.order();
    int64_t M = c.modulus();
    auto check = [&](int x, int y, int z) {
        return mod_pos(c.at(x, y) + c.at(G.mul(x, y), z) - c.at(x, G.mul(y, z)) - c.at(y, z),
                       M) == 0;
    };
    if ((int64_t)n * n * n <= (1 << 25)) {
        std::vector<char> ok((size_t)n, 1);
        parallel_for(n, [&](int64_t x) {
            for (int y = 0; y < n && ok[x]; ++y)
                for (int z = 0; z < n; ++z)
                    if (!check((int)x, y, z)) {
                        ok[x] = 0;
                        break;
                    }
        });
        for (char v : ok)
            if (!v) return false;
        return true;
    }
    std::mt19937_64 rng(0xc0c1c1e);
    for (int t = 0; t < 300000; ++t)
        if (!check((int)(rng() % n), (int)(rng() % n), (int)(rng() % n))) return false;
    return true;
}

std::vector<int64_t> antisym_pairing(const Cocycle2& c) {
    int n = c.group().order();
    std::vector<int64_t> out((size_t)n * n, 0);
    parallel_for(n, [&](int64_t x) {
        for (int y = 0; y < n; ++y)
            out[(size_t)x * n + y] = mod_pos(c.at((int)x, y) - c.at(y, (int)x), c.modulus());
    });
    return out;
}

bool is_trivial_class(const Cocycle2& c) {
    auto t = antisym_pairing(c);
    for (int64_t v : t)
        if (v != 0) return false;
    return true;
}

std::vector<int64_t> coboundary_of(const AbelianGroupTable& G, int64_t M,
                                   const std::vector<int64_t>& delta) {
    int n = G.order();
    std::vector<int64_t> out((size_t)n * n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            out[(size_t)x * n + y] = mod_pos(delta[y] - delta[G.mul(x, y)] + delta[x], M);
    return out;
}

bool witness_matches(const Cocycle2& c, const CoboundaryWitness& w) {
    int64_t Mp = w.M_prime;
    if (Mp % c.modulus() != 0) return false;
    int64_t f = Mp / c.modulus();
    auto table = coboundary_of(c.group(), Mp, w.delta);
    int n = c.group().order();
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (table[(size_t)x * n + y] != mod_pos(c.at(x, y) * f, Mp)) return false;
    return true;
}

namespace {

// Solve B x == rhs (mod M) for a system with few unknowns by Smith reduction
// of [B | M I]. Returns false when inconsistent.
bool snf_solve_small(std::vector<std::vector<int64_t>> B, std::vector<int64_t> rhs, int64_t M,
                     std::vector<int64_t>& x_out, int k) {
    int m = (int)B.size();
    if (m == 0) {
        x_out.assign(k, 0);
        return true;
    }
    int cols = k + m;
    for (int i = 0; i < m; ++i) {
        B[i].resize(cols, 0);
        B[i][k + i] = M;
    }
    std::vector<std::vector<int64_t>> V(cols, std::vector<int64_t>(cols, 0));
    for (int i = 0; i < cols; ++i) V[i][i] = 1;
    auto row_sub = [&](int dst, int src, int64_t f) {
        for (int j = 0; j < cols; ++j) B[dst][j] -= f * B[src][j];
        rhs[dst] -= f * rhs[src];
    };
    auto col_sub = [&](int dst, int src, int64_t f) {
        for (int i = 0; i < m; ++i) B[i][dst] -= f * B[i][src];
        for (int i = 0; i < cols; ++i) V[i][dst] -= f * V[i][src];
    };
    int t = 0;
    std::vector<int64_t> diag;
    while (t < m && t < cols) {
        int pi = -1, pj = -1;
        int64_t best = 0;
        for (int i = t; i < m; ++i)
            for (int j = t; j < cols; ++j)
                if (B[i][j] != 0 && (pi < 0 || std::llabs(B[i][j]) < best)) {
                    pi = i;
                    pj = j;
                    best = std::llabs(B[i][j]);
                }
        if (pi < 0) break;
        std::swap(B[t], B[pi]);
        std::swap(rhs[t], rhs[pi]);
        for (int i = 0; i < m; ++i) std::swap(B[i][t], B[i][pj]);
        for (int i = 0; i < cols; ++i) std::swap(V[i][t], V[i][pj]);
        bool clean = true;
        for (int i = t + 1; i < m; ++i)
            if (B[i][t] % B[t][t] != 0) clean = false;
        for (int j = t + 1; j < cols; ++j)
            if (B[t][j] % B[t][t] != 0) clean = false;
        for (int i = t + 1; i < m; ++i)
            if (B[i][t] != 0) row_sub(i, t, B[i][t] / B[t][t]);
        for (int j = t + 1; j < cols; ++j)
            if (B[t][j] != 0) col_sub(j, t, B[t][j] / B[t][t]);
        if (!clean) continue;  // remainders shrank; re-pick the pivot
        diag.push_back(B[t][t]);
        ++t;
    }
    for (int i = t; i < m; ++i)
        if (rhs[i] != 0) return false;
    std::vector<int64_t> u(cols, 0);
    for (int i = 0; i < t; ++i) {
        if (rhs[i] % diag[i] != 0) return false;
        u[i] = rhs[i] / diag[i];
    }
    x_out.assign(k, 0);
    for (int i = 0; i < k; ++i) {
        __int128 s = 0;
        for (int j = 0; j < cols; ++j) s += (__int128)V[i][j] * u[j];
        x_out[i] = mod_pos128(s, M);
    }
    return true;
}

bool try_solve_witness(const Cocycle2& c, int64_t Mp, CoboundaryWitness& out) {
    const auto& G = c.group();
    const int n = G.order();
    const int64_t lift = Mp / c.modulus();
    auto ct = [&](int x, int y) { return mod_pos(c.at(x, y) * lift, Mp); };

    const auto& gens = G.generators();
    const int k = (int)gens.size();
    // express delta(x) = sum_i lam_i(x) delta(g_i) + cst(x) along a BFS tree
    std::vector<std::vector<int64_t>> lam(n, std::vector<int64_t>(k, 0));
    std::vector<int64_t> cst(n, 0);
    std::vector<char> known(n, 0);
    cst[G.id()] = ct(G.id(), G.id());
    known[G.id()] = 1;
    std::vector<int> frontier = {G.id()};
    for (int gi = 0; gi < k; ++gi) {
        int g = gens[gi];
        if (!known[g]) {
            lam[g][gi] = 1;
            known[g] = 1;
            frontier.push_back(g);
        }
    }
    for (size_t fi = 0; fi < frontier.size(); ++fi) {
        int y = frontier[fi];
        for (int gi = 0; gi < k; ++gi) {
            int g = gens[gi];
            int x = G.mul(g, y);
            if (known[x]) continue;
            // delta(x) = delta(g) + delta(y) - c(g, y)
            for (int j = 0; j < k; ++j) lam[x][j] = mod_pos(lam[g][j] + lam[y][j], Mp);
            cst[x] = mod_pos(cst[g] + cst[y] - ct(g, y), Mp);
            known[x] = 1;
            frontier.push_back(x);
        }
    }
    for (int x = 0; x < n; ++x)
        require(known[x], Errc::Internal, "generating set failed to cover the group");

    // residual constraints over the k unknowns delta(g_i)
    std::vector<std::vector<int64_t>> rows;
    std::vector<int64_t> rhs;
    for (int gi = 0; gi < k; ++gi) {
        int g = gens[gi];
        for (int x = 0; x < n; ++x) {
            int gx = G.mul(g, x);
            std::vector<int64_t> row(k);
            bool nonzero = false;
            for (int j = 0; j < k; ++j) {
                row[j] = mod_pos(lam[g][j] + lam[x][j] - lam[gx][j], Mp);
                if (row[j] != 0) nonzero = true;
            }
            int64_t b = mod_pos(ct(g, x) - cst[g] - cst[x] + cst[gx], Mp);
            if (!nonzero) {
                if (b != 0) return false;
                continue;
            }
            rows.push_back(std::move(row));
            rhs.push_back(b);
        }
    }
    // online Hermite reduction to at most k rows (2-row unimodular ops mod Mp)
    std::vector<std::vector<int64_t>> kept;
    std::vector<int64_t> kept_rhs;
    std::vector<int> lead;
    for (size_t r = 0; r < rows.size(); ++r) {
        std::vector<int64_t> row = rows[r];
        int64_t b = rhs[r];
        int col = 0;
        while (col < k) {
            if (row[col] == 0) {
                ++col;
                continue;
            }
            int who = -1;
            for (size_t i = 0; i < kept.size(); ++i)
                if (lead[i] == col) who = (int)i;
            if (who < 0) {
                kept.push_back(row);
                kept_rhs.push_back(b);
                lead.push_back(col);
                row.clear();
                break;
            }
            int64_t a = kept[who][col], v = row[col];
            int64_t xg, yg;
            int64_t g = ext_gcd(a, v, xg, yg);
            std::vector<int64_t> nk(k), nr(k);
            for (int j = 0; j < k; ++j) {
                nk[j] = mod_pos128((__int128)xg * kept[who][j] + (__int128)yg * row[j], Mp);
                nr[j] = mod_pos128((__int128)(v / g) * kept[who][j] -
                                       (__int128)(a / g) * row[j],
                                   Mp);
            }
            int64_t nkb = mod_pos128((__int128)xg * kept_rhs[who] + (__int128)yg * b, Mp);
            int64_t nrb = mod_pos128((__int128)(v / g) * kept_rhs[who] - (__int128)(a / g) * b,
                                     Mp);
            kept[who] = std::move(nk);
            kept_rhs[who] = nkb;
            row = std::move(nr);
            b = nrb;
        }
        if (!row.empty()) {
            bool zero = true;
            for (int64_t v : row) zero = zero && v == 0;
            if (zero && b != 0) return false;
        }
    }
    std::vector<int64_t> sol;
    if (!snf_solve_small(kept, kept_rhs, Mp, sol, k)) return false;

    out.M_prime = Mp;
    out.delta.assign(n, 0);
    for (int x = 0; x < n; ++x) {
        __int128 s = cst[x];
        for (int j = 0; j < k; ++j) s += (__int128)lam[x][j] * sol[j];
        out.delta[x] = mod_pos128(s, Mp);
    }
    // full verification is the safety net for every shortcut above
    Cocycle2 cl = c.lifted(Mp);
    auto table = coboundary_of(G, Mp, out.delta);
    for (size_t i = 0; i < table.size(); ++i)
        if (table[i] != cl.table()[i]) return false;
    return true;
}

}  // namespace

CoboundaryWitness solve_coboundary(const Cocycle2& c) {
    require(is_trivial_class(c), Errc::NotTrivialClass,
            "cocycle class is nontrivial, no witness exists");
    int64_t e = c.group().exponent();
    int64_t enlarge = lcm_checked(c.modulus(), e);
    int64_t Mp = mul_checked(enlarge, c.modulus());
    CoboundaryWitness w;
    if (try_solve_witness(c, Mp, w)) return w;
    // one doubled enlargement, then report
    int64_t Mp2 = mul_checked(Mp, enlarge);
    if (try_solve_witness(c, Mp2, w)) return w;
    fail(Errc::Internal, "coboundary solver failed after enlarging the modulus twice");
}

std::string CoboundaryWitness::to_json() const {
    nlohmann::ordered_json j;
    j["M_prime"] = M_prime;
    j["delta"] = delta;
    return j.dump();
}

CoboundaryWitness CoboundaryWitness::from_json(const std::string& js) {
    auto j = nlohmann::ordered_json::parse(js);
    CoboundaryWitness w;
    w.M_prime = j["M_prime"].get<int64_t>();
    w.delta = j["delta"].get<std::vector<int64_t>>();
    return w;
}

}  // namespace schur
