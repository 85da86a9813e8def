#pragma once

#include <memory>

#include "schur/schurmult.hpp"

namespace schur {

/// O_3 in both flavours: Z/p^3 (mixed characteristic) and F_p[t]/(t^3)
/// (equal characteristic). Elements are encoded in an int64: the canonical
/// representative for Z/p^3, base-p digits for F_p[t]/(t^3). The residue
/// lift is the coefficient-wise representative, so lambda(0) = 0.
class LocalRing {
  public:
    enum class Kind { Unequal, Equal };
    using Elem = int64_t;

    LocalRing(Kind kind, int64_t p);

    Kind kind() const { return kind_; }
    int64_t p() const { return p_; }
    int r() const { return 3; }
    const char* kind_name() const { return kind_ == Kind::Unequal ? "Z/p^3" : "F_p[t]/t^3"; }

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    Elem add(Elem a, Elem b) const;
    Elem sub(Elem a, Elem b) const;
    Elem neg(Elem a) const;
    Elem mul(Elem a, Elem b) const;
    Elem inv(Elem a) const;  // NotUnit for non-units
    bool is_unit(Elem a) const { return residue(a) != 0; }

    Elem from_residue(int64_t x) const;  // the lift lambda on scalars
    int64_t residue(Elem a) const;
    Elem times_pi(Elem a) const;
    bool divisible_by_pi(Elem a) const { return residue(a) == 0; }
    Elem div_pi(Elem a) const;

    /// Exponent of tau(pi^{-2} x) in Z/p^2 (x matters mod pi^2).
    int64_t tau2(Elem x) const;
    /// Exponent of tau(pi^{-1} x) in Z/p (x matters mod pi).
    int64_t tau1(Elem x) const;

  private:
    Kind kind_;
    int64_t p_, p2_, p3_;
};

/// Dense matrix over the local ring.
class RingMat {
  public:
    RingMat() : ring_(nullptr), n_(0) {}
    RingMat(const LocalRing& R, int n) : ring_(&R), n_(n), a_((size_t)n * n, 0) {}
    static RingMat identity(const LocalRing& R, int n);

    const LocalRing& ring() const { return *ring_; }
    int n() const { return n_; }
    LocalRing::Elem& at(int i, int j) { return a_[(size_t)i * n_ + j]; }
    LocalRing::Elem at(int i, int j) const { return a_[(size_t)i * n_ + j]; }

    RingMat mul(const RingMat& o) const;
    RingMat add(const RingMat& o) const;
    RingMat sub(const RingMat& o) const;
    RingMat scaled(LocalRing::Elem c) const;
    LocalRing::Elem trace() const;
    bool equals(const RingMat& o) const { return a_ == o.a_; }
    /// Hensel-lifted inverse; NotUnit when the residue matrix is singular.
    RingMat inverse(const FiniteField& F) const;
    bool congruent_identity_mod_pi() const;

  private:
    const LocalRing* ring_;
    int n_;
    std::vector<LocalRing::Elem> a_;
};

/// Brute-force ground truth inside GL_n(O_3), r = 3, l = 2, prime residue
/// field. Builds pi_psi from the Schrodinger model through the fiber-product
/// dictionary and extracts the intertwiner cocycle c_U.
class GroupOracle {
  public:
    GroupOracle(LocalRing::Kind kind, const RegularMatrix& rm);

    const LocalRing& ring() const { return ring_; }
    const FiniteField& field() const { return rm_->field(); }
    const RegularMatrix& regular() const { return *rm_; }
    const SchrodingerModel& model() const { return *model_; }

    RingMat lift_matrix(const MatrixF& X) const;  // entrywise lambda
    const RingMat& beta_lift() const { return beta_; }
    RingMat lift_unit(const CentralizerAlgebra& C, const CentralizerAlgebra::Elem& eb) const;
    RingMat l_of(const MatrixF& Xbar) const;  // 1 + pi lambda(X)

    /// psi_beta on K_2 = K_l, exponent in Z/p.
    int64_t psi_beta_exponent(const RingMat& k) const;
    /// psi in Y(psi_beta) attached to rho, on K_1(F[beta]); exponent mod p^2.
    int64_t psi_rho_exponent(const AdditiveCharacterRho& rho, const RingMat& g) const;

    /// pi_psi(k) for k in K_1.
    CMatrix pi_psi(const AdditiveCharacterRho& rho, const RingMat& k) const;
    int64_t pi_dim() const { return model_->dim(); }

    struct PiPsiChecks {
        bool homomorphism;
        bool scalar_on_N;
        bool inner_product_positive;
        double char_norm;  // <pi, pi>_{K_1}; 1.0 for an irreducible
    };
    PiPsiChecks validate_pi_psi(const AdditiveCharacterRho& rho, uint64_t seed) const;

    struct OrbitCensus {
        int64_t X_size;
        int64_t orbit_count;
        int64_t X0_size;
        int64_t orbits_meeting_X0;
        int64_t omega_T_distinct;
        bool trace_criterion_ok;
        bool restriction_criterion_ok;
    };
    /// Exhaustive census of X(psi_beta) under K_1-conjugation (split Jordan
    /// beta); everything is computed by honest matrix conjugation in G_3.
    OrbitCensus orbit_census() const;

    /// The intertwiner cocycle on F[beta]^x-lifts, snapped into mu_{4 p dim}.
    Cocycle2 extract_cU(const AdditiveCharacterRho& rho, const UnitGroup& G,
                        uint64_t seed) const;

    struct Counts {
        int64_t Y_size;       // = q^n by enumeration
        int64_t irr_abelian;  // |C / C cap K_1| = |Irr| of the abelian quotient
        int64_t product;
    };
    Counts count_irr(const CentralizerAlgebra& C) const;

  private:
    LocalRing ring_;
    const RegularMatrix* rm_;
    RingMat beta_;
    SymplecticSpace sp_;
    std::unique_ptr<SchrodingerModel> model_;

    friend struct OracleProbe;
};

struct OracleCompareReport {
    std::string ring_kind;
    int64_t p;
    int n;
    std::string beta;
    int rho_count;
    int matches;
    std::vector<int> mismatched_rho;
    std::vector<uint8_t> cU_trivial;  // per rho
    std::string to_json() const;
};

/// Runs the master identity check: class of the extracted c_U equals the
/// class of c_{beta,rho} c_T for every additive character rho.
OracleCompareReport oracle_compare(LocalRing::Kind kind, const RegularMatrix& rm,
                                   uint64_t seed);

}  // namespace schur
