#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "schur/ffield.hpp"

namespace schur {

/// Dense matrix over F_q. Row-major; vectors are rows and maps act on the
/// right throughout the project, matching the right group actions in the
/// symplectic machinery.
class MatrixF {
  public:
    MatrixF() : F_(nullptr), r_(0), c_(0) {}
    MatrixF(const FiniteField& F, int rows, int cols)
        : F_(&F), r_(rows), c_(cols), a_((size_t)rows * cols, 0) {}

    static MatrixF identity(const FiniteField& F, int n);

    const FiniteField& field() const { return *F_; }
    int rows() const { return r_; }
    int cols() const { return c_; }
    FFElem& at(int i, int j) { return a_[(size_t)i * c_ + j]; }
    FFElem at(int i, int j) const { return a_[(size_t)i * c_ + j]; }
    const std::vector<FFElem>& flat() const { return a_; }

    MatrixF mul(const MatrixF& o) const;
    MatrixF add(const MatrixF& o) const;
    MatrixF sub(const MatrixF& o) const;
    MatrixF neg() const;
    MatrixF scaled(FFElem c) const;
    MatrixF transpose() const;
    MatrixF pow(int64_t k) const;
    FFElem trace() const;
    bool is_zero() const;
    bool equals(const MatrixF& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }

    std::vector<FFElem> vec() const { return a_; }  // row-major flattening

  private:
    const FiniteField* F_;
    int r_, c_;
    std::vector<FFElem> a_;
};

/// row_vec * M for a row vector.
std::vector<FFElem> row_apply(const FiniteField& F, const std::vector<FFElem>& v, const MatrixF& M);

int rank(const MatrixF& A);
MatrixF inverse(const MatrixF& A);               // throws NotUnit when singular
bool try_inverse(const MatrixF& A, MatrixF& out);
/// solve A x = b (column convention); empty when inconsistent
std::optional<std::vector<FFElem>> solve_linear(const MatrixF& A, const std::vector<FFElem>& b);
/// basis of {x : A x = 0}
std::vector<std::vector<FFElem>> right_kernel(const MatrixF& A);

/// Incremental row span with rref bookkeeping; used for greedy basis
/// extensions and independence tests.
class SpanBuilder {
  public:
    SpanBuilder(const FiniteField& F, int len) : F_(&F), len_(len) {}
    bool add(std::vector<FFElem> v);          // true if v was independent
    bool contains(std::vector<FFElem> v) const;
    int dim() const { return (int)rows_.size(); }

  private:
    const FiniteField* F_;
    int len_;
    std::vector<std::vector<FFElem>> rows_;
    std::vector<int> pivots_;
    void reduce(std::vector<FFElem>& v) const;
};

// -- polynomials over F_q (dense, lowest degree first) --
using Poly = std::vector<FFElem>;

Poly poly_trim(Poly a);
int poly_deg(const Poly& a);  // deg(0) = -1
Poly poly_add(const FiniteField& F, const Poly& a, const Poly& b);
Poly poly_sub(const FiniteField& F, const Poly& a, const Poly& b);
Poly poly_mul(const FiniteField& F, const Poly& a, const Poly& b);
/// division with remainder by a monic divisor
std::pair<Poly, Poly> poly_divmod(const FiniteField& F, Poly a, const Poly& b);
Poly poly_mod(const FiniteField& F, Poly a, const Poly& b);
Poly poly_gcd(const FiniteField& F, Poly a, Poly b);  // monic gcd
Poly poly_monic(const FiniteField& F, Poly a);
FFElem poly_eval(const FiniteField& F, const Poly& a, FFElem x);
Poly poly_derivative(const FiniteField& F, const Poly& a);
bool poly_irreducible(const FiniteField& F, const Poly& a);
/// inverse of a mod m (monic), or nullopt when gcd(a, m) != 1
std::optional<Poly> poly_invmod(const FiniteField& F, const Poly& a, const Poly& m);

struct PolyFactor {
    Poly p;  // monic irreducible
    int mult;
};
std::vector<PolyFactor> factor_poly(const FiniteField& F, Poly a);

/// det(tI - M), exact, by cofactor expansion over F_q[t]; fine for n <= 6.
Poly charpoly(const MatrixF& M);

/// true iff the minimal polynomial has degree n, i.e. {1, M, ..., M^{n-1}}
/// is linearly independent.
bool is_regular(const MatrixF& M);

/// A regular matrix with its factored characteristic polynomial and the
/// power basis of its centralizer algebra F[beta].
class RegularMatrix {
  public:
    static RegularMatrix from_matrix(MatrixF beta);  // NotRegular
    /// Block diagonal of Jordan blocks J_{n_i}(a_i), a_i pairwise distinct;
    /// blocks are canonicalized by (eigenvalue, size).
    static RegularMatrix jordan(const FiniteField& F,
                                std::vector<std::pair<FFElem, int>> blocks);
    static RegularMatrix companion(const FiniteField& F, Poly monic);
    /// Direct sum with pairwise coprime characteristic polynomials.
    static RegularMatrix block_diagonal(std::vector<RegularMatrix> parts);

    const FiniteField& field() const { return beta_.field(); }
    const MatrixF& beta() const { return beta_; }
    int n() const { return beta_.rows(); }
    const Poly& char_poly() const { return charpoly_; }
    const std::vector<PolyFactor>& factors() const { return factors_; }
    const std::vector<MatrixF>& powers() const { return powers_; }  // 1..beta^{n-1}

    bool separable() const;
    bool irreducible() const;
    bool split() const;  // all irreducible factors linear
    /// Jordan block descriptor when beta is in Jordan form, else empty.
    const std::vector<std::pair<FFElem, int>>& jordan_blocks() const { return jordan_blocks_; }
    /// Diagonal block layout (start, size) when built block-diagonally.
    const std::vector<std::pair<int, int>>& block_layout() const { return block_layout_; }

    std::string describe() const;

  private:
    RegularMatrix() = default;
    void finish();  // charpoly, factors, powers
    MatrixF beta_;
    Poly charpoly_;
    std::vector<PolyFactor> factors_;
    std::vector<MatrixF> powers_;
    std::vector<std::pair<FFElem, int>> jordan_blocks_;
    std::vector<std::pair<int, int>> block_layout_;
};

/// F[beta] as F_q[t]/(chi): elements are coefficient vectors on the power
/// basis, multiplication is polynomial multiplication mod chi.
class CentralizerAlgebra {
  public:
    using Elem = std::vector<FFElem>;  // length n

    explicit CentralizerAlgebra(const RegularMatrix& rm, int64_t unit_bound = 1000000);

    const RegularMatrix& regular() const { return *rm_; }
    const FiniteField& field() const { return rm_->field(); }
    int n() const { return rm_->n(); }

    Elem zero() const { return Elem(n(), 0); }
    Elem one() const;
    Elem scalar(FFElem c) const;
    Elem add(const Elem& a, const Elem& b) const;
    Elem sub(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem pow(const Elem& a, int64_t k) const;
    bool is_unit(const Elem& a) const;
    Elem inv(const Elem& a) const;  // NotUnit
    /// Frobenius a -> a^q; the bar map of the quadratic cuspidal case.
    Elem frobenius(const Elem& a) const;

    MatrixF to_matrix(const Elem& a) const;
    /// coordinates of a centralizer matrix on the power basis; NotAnExtension
    /// when X does not commute with beta.
    Elem from_matrix(const MatrixF& X) const;

    /// All units of F[beta], enumerated by rejection over the q^n elements.
    const std::vector<Elem>& units() const { return units_; }
    int64_t unit_count() const { return (int64_t)units_.size(); }

  private:
    const RegularMatrix* rm_;
    std::vector<Elem> units_;
    MatrixF power_basis_mat_;      // n^2 x n, columns vec(beta^k)
};

enum class ComplementKind { Greedy, TransposeOrtho, Custom };

/// V_beta = M_n(F)/F[beta] with a fixed complement (the section), the Gram
/// matrix of <X,Y> = tr((XY-YX) beta) on the complement basis, and coordinate
/// maps both ways.
class SymplecticSpace {
  public:
    SymplecticSpace() = default;

    const RegularMatrix& regular() const { return *rm_; }
    const FiniteField& field() const { return rm_->field(); }
    int dim() const { return (int)quotient_basis_.size(); }  // n^2 - n
    ComplementKind complement_kind() const { return kind_; }

    const std::vector<MatrixF>& quotient_basis() const { return quotient_basis_; }
    std::vector<FFElem> quot_coords(const MatrixF& X) const;
    std::vector<FFElem> cent_coords(const MatrixF& X) const;  // length n
    MatrixF section(const std::vector<FFElem>& v) const;
    const MatrixF& gram() const { return gram_; }
    const MatrixF& gram_inv() const { return gram_inv_; }
    FFElem form(const MatrixF& X, const MatrixF& Y) const;
    FFElem form_coords(const std::vector<FFElem>& u, const std::vector<FFElem>& v) const;

    /// Matrix of v -> eps^{-1} v eps on V_beta (row convention); NotUnit when
    /// eps is not invertible.
    MatrixF conj_action(const CentralizerAlgebra& C, const CentralizerAlgebra::Elem& eps) const;

    friend SymplecticSpace build_symplectic_space(const RegularMatrix&, ComplementKind,
                                                  const std::vector<MatrixF>*);

  private:
    const RegularMatrix* rm_ = nullptr;
    ComplementKind kind_ = ComplementKind::Greedy;
    std::vector<MatrixF> quotient_basis_;
    MatrixF basis_inv_;  // inverse of [vec(powers) | vec(quotient basis)]
    MatrixF gram_, gram_inv_;
};

SymplecticSpace build_symplectic_space(const RegularMatrix& rm,
                                       ComplementKind kind = ComplementKind::Greedy,
                                       const std::vector<MatrixF>* custom = nullptr);

struct Polarization {
    enum class Kind { SplitTriangular, Involution, Custom, BlockAssembled };
    Kind kind = Kind::Custom;
    std::vector<std::vector<FFElem>> wminus;  // W' (functions live here)
    std::vector<std::vector<FFElem>> wplus;   // W
};

/// Triangular polarization of a split Jordan beta: W' = image of the strictly
/// lower triangular matrices, W = image of the upper triangular ones.
Polarization polarization_split(const SymplecticSpace& sp);

/// For irreducible characteristic polynomial: the +-1 eigenspaces of
/// X -> X* = g^{-1} X^t g with g the trace form of F[beta].
Polarization polarization_involution(const SymplecticSpace& sp);

/// Darboux basis polarization; always available.
Polarization polarization_darboux(const SymplecticSpace& sp);

/// The involution data (g, and star as an operator) exposed for tests.
struct InvolutionData {
    MatrixF g;
    MatrixF star(const MatrixF& X) const;  // g^{-1} X^t g
};
InvolutionData involution_data(const RegularMatrix& rm);

/// Checks a polarization: both halves isotropic of dimension dim/2, direct sum.
void validate_polarization(const SymplecticSpace& sp, const Polarization& pol);

}  // namespace schur
