#include "schur/ffield.hpp"

#include <algorithm>
#include <cmath>

namespace schur {

namespace {

int64_t lcm64(int64_t a, int64_t b) {
    int64_t g = std::gcd(a, b);
    __int128 v = (__int128)(a / g) * b;
    require(v <= INT64_MAX, Errc::SolverOverflow, "root-of-unity modulus overflow");
    return (int64_t)v;
}

bool is_prime(int64_t n) {
    if (n < 2) return false;
    for (int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// dense F_p[t] helpers on coefficient vectors (lowest degree first)
using PPoly = std::vector<int32_t>;

PPoly ppoly_trim(PPoly a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

PPoly ppoly_mod(PPoly a, const PPoly& m, int64_t p) {
    a = ppoly_trim(std::move(a));
    const int dm = (int)m.size() - 1;
    while ((int)a.size() - 1 >= dm) {
        int k = (int)a.size() - 1 - dm;
        int64_t c = a.back() % p;  // m is monic
        for (int i = 0; i <= dm; ++i) {
            int64_t v = a[k + i] - c * m[i];
            a[k + i] = (int32_t)(((v % p) + p) % p);
        }
        a = ppoly_trim(std::move(a));
    }
    return a;
}

PPoly ppoly_mulmod(const PPoly& a, const PPoly& b, const PPoly& m, int64_t p) {
    if (a.empty() || b.empty()) return {};
    PPoly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = (int32_t)((c[i + j] + (int64_t)a[i] * b[j]) % p);
    return ppoly_mod(std::move(c), m, p);
}

}  // namespace

bool fp_poly_irreducible(int64_t p, const std::vector<int32_t>& poly) {
    PPoly f = ppoly_trim(poly);
    int deg = (int)f.size() - 1;
    if (deg <= 0) return false;
    if (deg == 1) return true;
    // trial division by all monic polynomials of degree 1..deg/2
    for (int d = 1; 2 * d <= deg; ++d) {
        int64_t count = 1;
        for (int i = 0; i < d; ++i) count *= p;
        for (int64_t idx = 0; idx < count; ++idx) {
            PPoly g(d + 1, 0);
            int64_t t = idx;
            for (int i = 0; i < d; ++i) {
                g[i] = (int32_t)(t % p);
                t /= p;
            }
            g[d] = 1;
            // f mod g == 0 ?
            PPoly r = f;
            const int dg = d;
            while ((int)r.size() - 1 >= dg && !r.empty()) {
                int k = (int)r.size() - 1 - dg;
                int64_t c = r.back() % p;
                for (int i = 0; i <= dg; ++i) {
                    int64_t v = r[k + i] - c * g[i];
                    r[k + i] = (int32_t)(((v % p) + p) % p);
                }
                r = ppoly_trim(std::move(r));
            }
            if (r.empty()) return false;
        }
    }
    return true;
}

RootOfUnity RootOfUnity::lifted(int64_t M2) const {
    require(M2 % M == 0, Errc::Internal, "root-of-unity lift needs divisible modulus");
    return RootOfUnity(M2, e * (M2 / M));
}

RootOfUnity RootOfUnity::times(const RootOfUnity& o) const {
    int64_t L = lcm64(M, o.M);
    return RootOfUnity(L, e * (L / M) + o.e * (L / o.M));
}

RootOfUnity RootOfUnity::power(int64_t k) const {
    int64_t kk = ((k % M) + M) % M;
    __int128 v = (__int128)e * kk;
    return RootOfUnity(M, (int64_t)(v % M));
}

bool RootOfUnity::equals(const RootOfUnity& o) const {
    int64_t L = lcm64(M, o.M);
    return e * (L / M) % L == o.e * (L / o.M) % L;
}

std::complex<double> RootOfUnity::value() const {
    double t = 2.0 * M_PI * (double)e / (double)M;
    return {std::cos(t), std::sin(t)};
}

FiniteField::FiniteField(int64_t p, int f, std::vector<int32_t> modulus, FFElem twist)
    : p_(p), f_(f), twist_(twist) {
    require(is_prime(p) && p % 2 == 1, Errc::OddCharRequired, "p must be an odd prime");
    require(f >= 1, Errc::ConfigError, "extension degree must be >= 1");
    q_ = 1;
    for (int i = 0; i < f; ++i) {
        q_ *= p;
        require(q_ <= 4096, Errc::ConfigError, "field too large for table-based arithmetic");
    }
    if (modulus.empty()) {
        if (f == 1) {
            modulus = {0, 1};  // t (unused for f = 1)
        } else {
            // smallest coefficient vector, read as base-p counter over c_0..c_{f-1}
            int64_t count = q_;
            for (int64_t idx = 0; idx < count; ++idx) {
                std::vector<int32_t> m(f + 1, 0);
                int64_t t = idx;
                for (int i = 0; i < f; ++i) {
                    m[i] = (int32_t)(t % p);
                    t /= p;
                }
                m[f] = 1;
                if (fp_poly_irreducible(p, m)) {
                    modulus = m;
                    break;
                }
            }
        }
    } else {
        require((int)modulus.size() == f + 1 && modulus[f] == 1, Errc::ConfigError,
                "modulus must be monic of degree f");
        for (auto& c : modulus) c = (int32_t)(((c % p) + p) % p);
        if (f > 1)
            require(fp_poly_irreducible(p, modulus), Errc::ConfigError, "modulus is reducible");
    }
    modulus_ = std::move(modulus);
    require(twist_ > 0 && twist_ < q_, Errc::ConfigError, "twist must be a nonzero element");
    build_tables();
    compute_gamma1();
}

void FiniteField::build_tables() {
    auto decode = [&](FFElem a) {
        std::vector<int32_t> c(f_);
        int64_t t = a;
        for (int i = 0; i < f_; ++i) {
            c[i] = (int32_t)(t % p_);
            t /= p_;
        }
        return c;
    };
    auto encode = [&](const PPoly& c) {
        int64_t v = 0;
        for (int i = f_ - 1; i >= 0; --i) v = v * p_ + (i < (int)c.size() ? c[i] : 0);
        return (FFElem)v;
    };
    mul_.assign((size_t)q_ * q_, 0);
    for (FFElem a = 0; a < q_; ++a) {
        PPoly ca = ppoly_trim(decode(a));
        for (FFElem b = a; b < q_; ++b) {
            PPoly cb = ppoly_trim(decode(b));
            FFElem v = encode(ppoly_mulmod(ca, cb, modulus_, p_));
            mul_[(size_t)a * q_ + b] = v;
            mul_[(size_t)b * q_ + a] = v;
        }
    }
    inv_.assign(q_, 0);
    for (FFElem a = 1; a < q_; ++a) {
        if (inv_[a]) continue;
        for (FFElem b = 1; b < q_; ++b)
            if (mul(a, b) == one()) {
                inv_[a] = b;
                inv_[b] = a;
                break;
            }
    }
    half_ = inv_[from_int(2)];
    // trace via Frobenius orbits: Tr(a) = sum a^{p^k}
    trace_.assign(q_, 0);
    for (FFElem a = 0; a < q_; ++a) {
        FFElem s = 0, x = a;
        for (int k = 0; k < f_; ++k) {
            s = add(s, x);
            x = pow(x, p_);
        }
        // s lies in the prime field: index equals the residue
        require(s < p_, Errc::Internal, "trace landed outside the prime field");
        trace_[a] = (int32_t)s;
    }
    legendre_.assign(q_, 0);
    for (FFElem a = 1; a < q_; ++a) legendre_[a] = pow(a, (q_ - 1) / 2) == one() ? 1 : -1;
}

void FiniteField::compute_gamma1() {
    // g = sum_x tau(x^2) exactly in Z[zeta_p], then gamma = g / sqrt(q) in mu_4.
    // gamma^2 = legendre(-1) narrows to {+-1} or {+-i}; one float evaluation
    // resolves the sign (the two candidates differ by 2 sqrt(q)).
    std::vector<int64_t> coeff(p_, 0);
    for (FFElem x = 0; x < q_; ++x) coeff[trace(mul(twist_, mul(x, x)))]++;
    std::complex<double> g(0.0, 0.0);
    for (int64_t j = 0; j < p_; ++j)
        g += (double)coeff[j] * std::exp(std::complex<double>(0.0, 2.0 * M_PI * (double)j / (double)p_));
    double rq = std::sqrt((double)q_);
    int leg_m1 = legendre(neg(one()));
    std::vector<int> candidates = leg_m1 == 1 ? std::vector<int>{0, 2} : std::vector<int>{1, 3};
    for (int k : candidates) {
        std::complex<double> cand = std::exp(std::complex<double>(0.0, M_PI * k / 2.0)) * rq;
        if (std::abs(g - cand) < 1e-6 * (1.0 + rq)) {
            gamma1_ = RootOfUnity(4, k);
            return;
        }
    }
    fail(Errc::Internal, "gauss sum did not match any mu_4 candidate");
}

FFElem FiniteField::from_int(int64_t a) const {
    int64_t r = ((a % p_) + p_) % p_;
    return (FFElem)r;
}

FFElem FiniteField::generator_t() const {
    require(f_ >= 2, Errc::ConfigError, "prime field has no generator t");
    return (FFElem)p_;
}

FFElem FiniteField::add(FFElem a, FFElem b) const {
    int64_t v = 0, mul = 1, ta = a, tb = b;
    for (int i = 0; i < f_; ++i) {
        int64_t d = (ta % p_ + tb % p_) % p_;
        v += d * mul;
        mul *= p_;
        ta /= p_;
        tb /= p_;
    }
    return (FFElem)v;
}

FFElem FiniteField::neg(FFElem a) const {
    int64_t v = 0, mul = 1, ta = a;
    for (int i = 0; i < f_; ++i) {
        int64_t d = (p_ - ta % p_) % p_;
        v += d * mul;
        mul *= p_;
        ta /= p_;
    }
    return (FFElem)v;
}

FFElem FiniteField::sub(FFElem a, FFElem b) const { return add(a, neg(b)); }

FFElem FiniteField::inv(FFElem a) const {
    require(a != 0, Errc::ZeroArgument, "inverse of zero");
    return inv_[a];
}

FFElem FiniteField::pow(FFElem a, int64_t k) const {
    if (k == 0) return one();  // 0^0 = 1, the polynomial-evaluation convention
    if (a == 0) {
        require(k > 0, Errc::ZeroArgument, "0^k needs k > 0");
        return 0;
    }
    int64_t kk = k % (q_ - 1);
    if (kk < 0) kk += q_ - 1;
    FFElem r = one(), x = a;
    while (kk) {
        if (kk & 1) r = mul(r, x);
        x = mul(x, x);
        kk >>= 1;
    }
    return r;
}

std::vector<int32_t> FiniteField::coeffs(FFElem a) const {
    std::vector<int32_t> c(f_);
    int64_t t = a;
    for (int i = 0; i < f_; ++i) {
        c[i] = (int32_t)(t % p_);
        t /= p_;
    }
    return c;
}

FFElem FiniteField::from_coeffs(const std::vector<int32_t>& c) const {
    int64_t v = 0;
    for (int i = f_ - 1; i >= 0; --i) {
        int64_t d = i < (int)c.size() ? ((c[i] % p_) + p_) % p_ : 0;
        v = v * p_ + d;
    }
    return (FFElem)v;
}

int FiniteField::legendre(FFElem a) const {
    require(a != 0, Errc::ZeroArgument, "legendre symbol of zero");
    return legendre_[a];
}

RootOfUnity FiniteField::additive_character(FFElem x) const {
    return RootOfUnity(p_, trace(mul(twist_, x)));
}

RootOfUnity FiniteField::weil_constant_scalar(FFElem a) const {
    require(a != 0, Errc::ZeroArgument, "weil constant of zero scalar");
    RootOfUnity g = gamma1_;
    if (legendre(a) < 0) g = g.times(RootOfUnity(4, 2));
    return g;
}

RootOfUnity FiniteField::weil_constant_form(const QuadraticFormF& Q) const {
    RootOfUnity r = RootOfUnity(4, 0);
    for (FFElem d : Q.diagonal()) r = r.times(weil_constant_scalar(d));
    return r;
}

QuadraticFormF::QuadraticFormF(const FiniteField& F, int dim, std::vector<FFElem> gram)
    : F_(&F), dim_(dim), gram_(std::move(gram)) {
    require((int)gram_.size() == dim * dim, Errc::WrongShape, "gram size mismatch");
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < i; ++j)
            require(gram_[(size_t)i * dim + j] == gram_[(size_t)j * dim + i], Errc::WrongShape,
                    "gram must be symmetric");
    // congruence diagonalization, first nonzero diagonal pivot; an all-zero
    // diagonal with a nonzero row gets the x_i -> x_i + x_j substitution
    std::vector<FFElem> g = gram_;
    auto at = [&](int i, int j) -> FFElem& { return g[(size_t)i * dim_ + j]; };
    std::vector<char> done(dim_, 0);
    for (int step = 0; step < dim_; ++step) {
        int piv = -1;
        for (int i = 0; i < dim_ && piv < 0; ++i)
            if (!done[i] && at(i, i) != 0) piv = i;
        if (piv < 0) {
            int a = -1, b = -1;
            for (int i = 0; i < dim_ && a < 0; ++i)
                if (!done[i])
                    for (int j = 0; j < dim_; ++j)
                        if (!done[j] && j != i && at(i, j) != 0) {
                            a = i;
                            b = j;
                            break;
                        }
            if (a < 0) break;  // remaining block is zero: the radical
            for (int k = 0; k < dim_; ++k) at(a, k) = F.add(at(a, k), at(b, k));
            for (int k = 0; k < dim_; ++k) at(k, a) = F.add(at(k, a), at(k, b));
            piv = a;
        }
        FFElem d = at(piv, piv);
        diag_.push_back(d);
        done[piv] = 1;
        FFElem dinv = F.inv(d);
        for (int j = 0; j < dim_; ++j) {
            if (done[j] || at(piv, j) == 0) continue;
            FFElem fct = F.mul(at(piv, j), dinv);
            for (int k = 0; k < dim_; ++k) at(j, k) = F.sub(at(j, k), F.mul(fct, at(piv, k)));
            for (int k = 0; k < dim_; ++k) at(k, j) = F.sub(at(k, j), F.mul(fct, at(k, piv)));
        }
    }
    rank_ = (int)diag_.size();
}

FFElem QuadraticFormF::evaluate(const std::vector<FFElem>& x) const {
    const FiniteField& F = *F_;
    FFElem s = 0;
    for (int i = 0; i < dim_; ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < dim_; ++j)
            if (x[j] != 0) s = F.add(s, F.mul(gram(i, j), F.mul(x[i], x[j])));
    }
    return s;
}

}  // namespace schur
