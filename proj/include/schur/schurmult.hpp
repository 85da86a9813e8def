#pragma once

#include <optional>
#include <string>

#include "schur/weilrep.hpp"

namespace schur {

/// Additive character rho of F[beta]. TraceForm is rho_a(x) = tau(tr(a x))
/// (faithful when the charpoly is separable); TransposeForm is
/// rho_A(X) = tau(tr(X A^t)) (faithful for split Jordan blocks when p > n);
/// Raw is an arbitrary F_p-functional on the coordinates, which always
/// enumerates the full character group.
class AdditiveCharacterRho {
  public:
    enum class Kind { TraceForm, TransposeForm, Raw };

    static AdditiveCharacterRho trace_form(const CentralizerAlgebra& C,
                                           CentralizerAlgebra::Elem A);
    static AdditiveCharacterRho transpose_form(const CentralizerAlgebra& C,
                                               CentralizerAlgebra::Elem A);
    static AdditiveCharacterRho raw(const CentralizerAlgebra& C, std::vector<int32_t> functional);
    static AdditiveCharacterRho trivial(const CentralizerAlgebra& C);
    /// All q^n characters in a deterministic order (raw functionals).
    static std::vector<AdditiveCharacterRho> enumerate(const CentralizerAlgebra& C);

    Kind kind() const { return kind_; }
    const CentralizerAlgebra& algebra() const { return *C_; }
    /// Exponent of rho(x) in Z/p.
    int32_t exponent(const CentralizerAlgebra::Elem& x) const;
    RootOfUnity value(const CentralizerAlgebra::Elem& x) const;
    bool is_trivial() const;
    std::string describe() const;

  private:
    AdditiveCharacterRho(const CentralizerAlgebra& C, Kind k) : C_(&C), kind_(k) {}
    const CentralizerAlgebra* C_;
    Kind kind_;
    CentralizerAlgebra::Elem A_;
    std::vector<int32_t> functional_;  // length f*n, exponents mod p
};

/// gamma(v, eps) = eps^{-1}[v]eps - [eps^{-1} v eps], the centralizer-valued
/// section defect; linear in v.
CentralizerAlgebra::Elem gamma_map(const SymplecticSpace& sp, const CentralizerAlgebra& C,
                                   const std::vector<FFElem>& v,
                                   const CentralizerAlgebra::Elem& eps);

/// Solves gram * v_eps = (rho o gamma(., eps)) over F_p; the pairing matrix is
/// inverted once, so per-unit solves are a matrix-vector product. Stateless
/// per call and safe to share across threads.
class DualSolver {
  public:
    DualSolver(const SymplecticSpace& sp, const CentralizerAlgebra& C,
               const AdditiveCharacterRho& rho);
    std::vector<FFElem> dual(const CentralizerAlgebra::Elem& eps) const;

  private:
    const SymplecticSpace* sp_;
    const CentralizerAlgebra* C_;
    const AdditiveCharacterRho* rho_;
    std::vector<std::vector<int64_t>> Binv_;  // inverse pairing matrix mod p
};

/// The cocycle c_{beta,rho} on the unit group, with all dual vectors v_eps
/// solved eagerly at construction (parallelizable by the caller over rho).
class CBetaRho {
  public:
    CBetaRho(const SymplecticSpace& sp, const UnitGroup& G, AdditiveCharacterRho rho);

    const SymplecticSpace& space() const { return *sp_; }
    const UnitGroup& units() const { return *G_; }
    const AdditiveCharacterRho& rho() const { return rho_; }

    /// v_eps with rho(gamma(v, eps)) = tau(<v, v_eps>) for all v.
    const std::vector<FFElem>& dual_vector(int unit_index) const { return duals_[unit_index]; }
    std::vector<FFElem> dual_vector(const CentralizerAlgebra::Elem& eps) const;

    /// c(eps, eta) = tau(2^{-1} <v_eps, v_{eps eta}>), exact in mu_p.
    RootOfUnity value(int i, int j) const;
    RootOfUnity value(const CentralizerAlgebra::Elem& eps,
                      const CentralizerAlgebra::Elem& eta) const;

    Cocycle2 table() const;  // modulus p

  private:
    const SymplecticSpace* sp_;
    const UnitGroup* G_;
    AdditiveCharacterRho rho_;
    std::vector<std::vector<FFElem>> duals_;
};

/// Verifies the almost-coboundary identity
/// c(eps,eta) = rho~(2^{-1} eps [v_eta] eps^{-1}) rho~(2^{-1}[v_{eps eta}])^{-1}
///              rho~(2^{-1}[v_eps])
/// where rho~(X) = tau(tr(X B^t)) extends rho to L_beta. NotAnExtension when
/// rho~ does not restrict to rho on F[beta].
bool almost_coboundary_check(const CBetaRho& c, const MatrixF& Btilde, int i, int j);

/// Closed-form split witnesses for beta = J_n(a), n in {2,3,4}, transpose
/// characters rho_A with A = sum rho_k N^k. Requires ch F > {3,5,7}.
class SplitWitness {
  public:
    SplitWitness(const CentralizerAlgebra& C, std::vector<FFElem> rho_coeffs);

    /// exp-coordinates (s_1,...,s_{n-1}) of the unipotent part of eps.
    std::vector<FFElem> exp_coords(const CentralizerAlgebra::Elem& eps) const;
    RootOfUnity delta(const CentralizerAlgebra::Elem& eps) const;
    /// A = sum rho_k N^k expressed on the power basis of beta.
    CentralizerAlgebra::Elem A_power_basis() const;

  private:
    const CentralizerAlgebra* C_;
    std::vector<FFElem> rho_;       // rho_0 .. rho_{n-1}
    MatrixF beta_to_nilpotent_;     // change of basis: power basis -> N basis
};

/// Streams (sampled or full) pairs of units and counts failures of
/// d(delta) = c_{beta,rho}; never materializes a group table, so it scales to
/// the n = 4 unit groups. num_pairs < 0 means the full table.
int64_t split_witness_scan(const SymplecticSpace& sp, const CentralizerAlgebra& C,
                           const AdditiveCharacterRho& rho, const SplitWitness& sw,
                           int64_t num_pairs, uint64_t seed, bool parallel = true);

struct SweepOptions {
    bool want_witnesses = false;
    int64_t rho_cap = -1;  // cap on the number of characters, -1 = all
    bool parallel = true;
};

struct SweepRhoResult {
    int rho_index;
    bool trivial;
};

struct SweepReport {
    std::string beta;
    int64_t q;
    int n;
    std::string polarization;  // "custom" flags the p(t)^e shapes no theorem covers
    int rho_count;
    int trivial_count;
    std::vector<int> counterexamples;        // rho indices with nontrivial class
    std::vector<std::string> witnesses;      // json per trivial rho, if requested
    std::string to_json() const;
};

/// For every additive character rho of F[beta], tests triviality of
/// [c_{beta,rho} c_T] and aggregates counterexamples (expected none).
SweepReport conjecture_sweep(const RegularMatrix& rm, const SweepOptions& opt = {});

/// c_{beta,rho} * c_T as one table over the unit group (modulus 4p).
Cocycle2 combined_cocycle(const CBetaRho& cbr, const Cocycle2& ct);

}  // namespace schur
