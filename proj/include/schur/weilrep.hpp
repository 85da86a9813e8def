#pragma once

#include <complex>
#include <map>

#include "schur/cohom.hpp"
#include "schur/matalg.hpp"

namespace schur {

/// Small dense complex matrix for the operator-level checks.
struct CMatrix {
    int n = 0;
    std::vector<std::complex<double>> a;

    CMatrix() = default;
    explicit CMatrix(int dim) : n(dim), a((size_t)dim * dim, {0.0, 0.0}) {}
    static CMatrix identity(int dim);

    std::complex<double>& at(int i, int j) { return a[(size_t)i * n + j]; }
    std::complex<double> at(int i, int j) const { return a[(size_t)i * n + j]; }
    CMatrix mul(const CMatrix& o) const;
    CMatrix adjoint() const;
    CMatrix scaled(std::complex<double> c) const;
    double max_abs_diff(const CMatrix& o) const;
    double max_abs() const;
    /// Scalar s with A ~ s * B (B unitary); throws IntertwinerNotScalar beyond tol.
    std::complex<double> scalar_ratio(const CMatrix& B, double tol) const;
    bool is_unitary(double tol) const;
};

/// Snap a unit complex number to the nearest element of mu_M; SnapFailure if
/// it is farther than tol from every candidate.
RootOfUnity snap_to_root(std::complex<double> z, int64_t M, double tol = 1e-6);

/// V_beta element in polarization coordinates plus a central root of unity.
struct HeisenbergElement {
    std::vector<FFElem> v;  // length 2L: (w'-part | w-part)
    RootOfUnity s;
};

/// Unit group F[beta]^x as an indexed abelian group table.
struct UnitGroup {
    const CentralizerAlgebra* C;
    std::vector<CentralizerAlgebra::Elem> elems;
    AbelianGroupTable table;

    int index_of(const CentralizerAlgebra::Elem& e) const;
    int order() const { return (int)elems.size(); }

  private:
    friend UnitGroup unit_group(const CentralizerAlgebra& C);
    UnitGroup(const CentralizerAlgebra* c, std::vector<CentralizerAlgebra::Elem> el,
              AbelianGroupTable t)
        : C(c), elems(std::move(el)), table(std::move(t)) {}
    std::map<CentralizerAlgebra::Elem, int> index_;
};

UnitGroup unit_group(const CentralizerAlgebra& C);

/// Schrodinger model of the Heisenberg group H(V_beta) on L^2(W'), for a
/// fixed polarization. Operator-level members are complex; the cocycle c_T is
/// computed exactly from Weil constants of quadratic forms.
class SchrodingerModel {
  public:
    SchrodingerModel(const SymplecticSpace& sp, Polarization pol);

    const SymplecticSpace& space() const { return *sp_; }
    const FiniteField& field() const { return sp_->field(); }
    const Polarization& polarization() const { return pol_; }
    int lagrangian_dim() const { return L_; }
    int64_t dim() const { return dim_; }

    std::vector<FFElem> pol_coords(const std::vector<FFElem>& quot) const;
    std::vector<FFElem> quot_coords(const std::vector<FFElem>& pol) const;
    FFElem form_pol(const std::vector<FFElem>& x, const std::vector<FFElem>& y) const;
    const MatrixF& pairing() const { return P_; }  // <w'_i, w_j>, L x L

    HeisenbergElement compose(const HeisenbergElement& h1, const HeisenbergElement& h2) const;

    // W' points indexed 0..q^L-1
    std::vector<FFElem> point(int64_t idx) const;
    int64_t index(const std::vector<FFElem>& w) const;

    CMatrix pi_matrix(const HeisenbergElement& h) const;
    std::vector<std::complex<double>> schrodinger_apply(
        const HeisenbergElement& h, const std::vector<std::complex<double>>& f) const;

    /// sigma_eps on polarization coordinates (row convention), checked symplectic.
    MatrixF sigma_of_unit(const CentralizerAlgebra& C, const CentralizerAlgebra::Elem& eps) const;

    /// The unitary T(sigma) given by the polarization kernel sum; positive normalization.
    CMatrix weil_operator(const MatrixF& sigma_pol) const;

    /// Exact operator cocycle: T(s1) T(s2) = c_T(s1, s2) T(s1 s2), evaluated as
    /// the Weil constant of the composition Gauss sum. No operators involved.
    RootOfUnity c_T_sigma(const MatrixF& s1, const MatrixF& s2) const;
    RootOfUnity c_T(const CentralizerAlgebra& C, const CentralizerAlgebra::Elem& eps,
                    const CentralizerAlgebra::Elem& eta) const;

  private:
    const SymplecticSpace* sp_;
    Polarization pol_;
    int L_;
    int64_t dim_;
    MatrixF R_, Rinv_;  // pol coords -> quot coords and back
    MatrixF J_;         // form on pol coords
    MatrixF P_;         // upper right block of J
};

/// c_T as a Cocycle2 over the unit group (values in mu_4).
Cocycle2 c_T_table(const SchrodingerModel& model, const UnitGroup& G);

/// Quadratic cuspidal closed forms for beta = [[0,alpha],[1,0]], alpha a
/// non-square. ratio_parts(eps) returns ((eps/eps-bar)_+, (eps/eps-bar)_-).
struct QuadraticCuspidal {
    const CentralizerAlgebra* C;
    FFElem alpha;

    std::pair<FFElem, FFElem> ratio_parts(const CentralizerAlgebra::Elem& eps) const;
    RootOfUnity c_T_closed(const CentralizerAlgebra::Elem& eps,
                           const CentralizerAlgebra::Elem& eta) const;
    /// The two-branch witness with d(delta) = c_T.
    RootOfUnity delta(const CentralizerAlgebra::Elem& eps) const;
};
QuadraticCuspidal quadratic_cuspidal(const CentralizerAlgebra& C);  // WrongNormalForm

/// Polarization assembled from the coprime-block decomposition:
/// W' = M_beta^- + blockwise W', W = M_beta^+ + blockwise W.
Polarization polarization_block_assembled(const SymplecticSpace& sp);

/// Default polarization for a regular beta: triangular when split Jordan,
/// involution when irreducible, block-assembled for separable mixed shapes,
/// Darboux otherwise.
Polarization default_polarization(const SymplecticSpace& sp);

struct BlockReductionReport {
    bool classes_equal;
    bool tables_equal;
    int group_order;
};

/// Verifies [c_T] = prod [c_i] for a block-diagonal beta by comparing the
/// antisymmetrized tables of the assembled model and the blockwise product.
BlockReductionReport c_T_block_reduction(const RegularMatrix& rm);

}  // namespace schur
