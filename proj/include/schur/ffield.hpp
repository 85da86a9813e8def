#pragma once

#include <complex>
#include <cstdint>
#include <numeric>
#include <vector>

#include "schur/common.hpp"

namespace schur {

// A field element is an index 0 <= x < q encoding the coefficient vector
// (c_0,...,c_{f-1}) of the residue class mod the defining polynomial, as
// x = sum c_i p^i. Index arithmetic goes through the owning FiniteField.
using FFElem = int32_t;

/// Exact root of unity zeta_M^e for the fixed embedding zeta_M = e^{2 pi i/M}.
/// Multiplication lifts both operands to lcm of the moduli; nothing is ever
/// evaluated in floating point except in value().
struct RootOfUnity {
    int64_t M = 1;
    int64_t e = 0;

    RootOfUnity() = default;
    RootOfUnity(int64_t mod, int64_t exp) : M(mod), e(((exp % mod) + mod) % mod) {}

    static RootOfUnity one(int64_t mod = 1) { return RootOfUnity(mod, 0); }

    RootOfUnity lifted(int64_t M2) const;  // M must divide M2
    RootOfUnity times(const RootOfUnity& o) const;
    RootOfUnity inverse() const { return RootOfUnity(M, M - e); }
    RootOfUnity power(int64_t k) const;
    bool is_one() const { return e == 0; }
    bool equals(const RootOfUnity& o) const;
    std::complex<double> value() const;
};

class FiniteField;

/// Quadratic form x -> x * gram * x^t over F_q: diagonal coefficient gram_ii,
/// cross coefficient 2*gram_ij for i < j. gram is symmetric; rank and radical
/// dimension are computed eagerly at construction.
class QuadraticFormF {
  public:
    QuadraticFormF(const FiniteField& F, int dim, std::vector<FFElem> gram);

    const FiniteField& field() const { return *F_; }
    int dim() const { return dim_; }
    FFElem gram(int i, int j) const { return gram_[(size_t)i * dim_ + j]; }
    const std::vector<FFElem>& gram_flat() const { return gram_; }
    int rank() const { return rank_; }
    int radical_dim() const { return dim_ - rank_; }
    FFElem evaluate(const std::vector<FFElem>& x) const;
    /// Diagonal entries <a_1,...,a_r> of a congruent diagonal form, zeros dropped.
    const std::vector<FFElem>& diagonal() const { return diag_; }

  private:
    const FiniteField* F_;
    int dim_;
    std::vector<FFElem> gram_;
    std::vector<FFElem> diag_;
    int rank_;
};

/// F_q with q = p^f, p odd. Elements are table-indexed; add/mul/inv/trace are
/// lookup or digit arithmetic. The additive character is tau(x) =
/// zeta_p^{Tr(twist * x)}; the twist (default 1) is threaded through every
/// character and Weil-constant computation for sensitivity tests.
class FiniteField {
  public:
    /// modulus: monic irreducible of degree f, coefficients c_0..c_f (c_f = 1).
    /// Empty means "lexicographically smallest" (coefficient vector read as a
    /// base-p counter, lowest first).
    FiniteField(int64_t p, int f, std::vector<int32_t> modulus = {}, FFElem twist = 1);

    int64_t p() const { return p_; }
    int f() const { return f_; }
    int64_t q() const { return q_; }
    const std::vector<int32_t>& modulus() const { return modulus_; }
    FFElem twist() const { return twist_; }

    FFElem zero() const { return 0; }
    FFElem one() const { return 1; }
    FFElem from_int(int64_t a) const;  // image of an integer in the prime field
    FFElem generator_t() const;        // the class of t (index p), f >= 2

    FFElem add(FFElem a, FFElem b) const;
    FFElem sub(FFElem a, FFElem b) const;
    FFElem neg(FFElem a) const;
    FFElem mul(FFElem a, FFElem b) const { return mul_[(size_t)a * q_ + b]; }
    FFElem inv(FFElem a) const;
    FFElem div(FFElem a, FFElem b) const { return mul(a, inv(b)); }
    FFElem pow(FFElem a, int64_t k) const;
    FFElem half() const { return half_; }  // 2^{-1}

    std::vector<int32_t> coeffs(FFElem a) const;
    FFElem from_coeffs(const std::vector<int32_t>& c) const;

    /// Absolute trace Tr_{F_q/F_p}(a) as a residue in [0, p).
    int32_t trace(FFElem a) const { return trace_[a]; }

    /// Legendre symbol of a != 0: +1 for squares, -1 for non-squares.
    int legendre(FFElem a) const;

    /// tau(x) = zeta_p^{Tr(twist*x)} in mu_p.
    RootOfUnity additive_character(FFElem x) const;

    /// gamma_tau(a) = q^{-1/2} sum_x tau(a x^2), exact in mu_4.
    RootOfUnity weil_constant_scalar(FFElem a) const;

    /// gamma_tau(Q) for an arbitrary (possibly degenerate) symmetric form.
    RootOfUnity weil_constant_form(const QuadraticFormF& Q) const;

    /// gamma_tau(1); cached at construction.
    RootOfUnity weil_gamma1() const { return gamma1_; }

  private:
    int64_t p_;
    int f_;
    int64_t q_;
    std::vector<int32_t> modulus_;
    FFElem twist_;
    FFElem half_;
    std::vector<FFElem> mul_;
    std::vector<FFElem> inv_;
    std::vector<int32_t> trace_;
    std::vector<int8_t> legendre_;
    RootOfUnity gamma1_;

    void build_tables();
    void compute_gamma1();
};

/// Monic polynomial irreducibility over F_p by trial division (degree <= ~6).
bool fp_poly_irreducible(int64_t p, const std::vector<int32_t>& poly);

}  // namespace schur
