#include "schur/matalg.hpp"

#include <algorithm>
#include <sstream>

namespace schur {

MatrixF MatrixF::identity(const FiniteField& F, int n) {
    MatrixF m(F, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = F.one();
    return m;
}

MatrixF MatrixF::mul(const MatrixF& o) const {
    const FiniteField& F = *F_;
    MatrixF r(F, r_, o.c_);
    for (int i = 0; i < r_; ++i)
        for (int k = 0; k < c_; ++k) {
            FFElem v = at(i, k);
            if (v == 0) continue;
            for (int j = 0; j < o.c_; ++j)
                r.at(i, j) = F.add(r.at(i, j), F.mul(v, o.at(k, j)));
        }
    return r;
}

MatrixF MatrixF::add(const MatrixF& o) const {
    MatrixF r = *this;
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = F_->add(a_[i], o.a_[i]);
    return r;
}

MatrixF MatrixF::sub(const MatrixF& o) const {
    MatrixF r = *this;
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = F_->sub(a_[i], o.a_[i]);
    return r;
}

MatrixF MatrixF::neg() const {
    MatrixF r = *this;
    for (auto& v : r.a_) v = F_->neg(v);
    return r;
}

MatrixF MatrixF::scaled(FFElem c) const {
    MatrixF r = *this;
    for (auto& v : r.a_) v = F_->mul(v, c);
    return r;
}

MatrixF MatrixF::transpose() const {
    MatrixF r(*F_, c_, r_);
    for (int i = 0; i < r_; ++i)
        for (int j = 0; j < c_; ++j) r.at(j, i) = at(i, j);
    return r;
}

MatrixF MatrixF::pow(int64_t k) const {
    MatrixF r = identity(*F_, r_), x = *this;
    while (k) {
        if (k & 1) r = r.mul(x);
        x = x.mul(x);
        k >>= 1;
    }
    return r;
}

FFElem MatrixF::trace() const {
    FFElem s = 0;
    for (int i = 0; i < r_; ++i) s = F_->add(s, at(i, i));
    return s;
}

bool MatrixF::is_zero() const {
    for (FFElem v : a_)
        if (v != 0) return false;
    return true;
}

std::vector<FFElem> row_apply(const FiniteField& F, const std::vector<FFElem>& v, const MatrixF& M) {
    std::vector<FFElem> r(M.cols(), 0);
    for (int i = 0; i < M.rows(); ++i) {
        if (v[i] == 0) continue;
        for (int j = 0; j < M.cols(); ++j) r[j] = F.add(r[j], F.mul(v[i], M.at(i, j)));
    }
    return r;
}

namespace {

// row echelon on an augmented matrix; returns pivot columns
std::vector<int> rref(const FiniteField& F, std::vector<std::vector<FFElem>>& m, int ncols) {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < ncols && row < (int)m.size(); ++col) {
        int sel = -1;
        for (int i = row; i < (int)m.size(); ++i)
            if (m[i][col] != 0) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        std::swap(m[row], m[sel]);
        FFElem pinv = F.inv(m[row][col]);
        for (auto& v : m[row]) v = F.mul(v, pinv);
        for (int i = 0; i < (int)m.size(); ++i) {
            if (i == row || m[i][col] == 0) continue;
            FFElem f = m[i][col];
            for (size_t j = 0; j < m[i].size(); ++j) m[i][j] = F.sub(m[i][j], F.mul(f, m[row][j]));
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace

int rank(const MatrixF& A) {
    std::vector<std::vector<FFElem>> m(A.rows(), std::vector<FFElem>(A.cols()));
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) m[i][j] = A.at(i, j);
    return (int)rref(A.field(), m, A.cols()).size();
}

bool try_inverse(const MatrixF& A, MatrixF& out) {
    const FiniteField& F = A.field();
    int n = A.rows();
    std::vector<std::vector<FFElem>> m(n, std::vector<FFElem>(2 * n, 0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m[i][j] = A.at(i, j);
        m[i][n + i] = F.one();
    }
    auto piv = rref(F, m, n);
    if ((int)piv.size() != n) return false;
    out = MatrixF(F, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.at(i, j) = m[i][n + j];
    return true;
}

MatrixF inverse(const MatrixF& A) {
    MatrixF out;
    require(try_inverse(A, out), Errc::NotUnit, "matrix is singular");
    return out;
}

std::optional<std::vector<FFElem>> solve_linear(const MatrixF& A, const std::vector<FFElem>& b) {
    const FiniteField& F = A.field();
    std::vector<std::vector<FFElem>> m(A.rows(), std::vector<FFElem>(A.cols() + 1, 0));
    for (int i = 0; i < A.rows(); ++i) {
        for (int j = 0; j < A.cols(); ++j) m[i][j] = A.at(i, j);
        m[i][A.cols()] = b[i];
    }
    auto piv = rref(F, m, A.cols());
    for (int i = (int)piv.size(); i < A.rows(); ++i)
        if (m[i][A.cols()] != 0) return std::nullopt;
    std::vector<FFElem> x(A.cols(), 0);
    for (size_t k = 0; k < piv.size(); ++k) x[piv[k]] = m[k][A.cols()];
    return x;
}

std::vector<std::vector<FFElem>> right_kernel(const MatrixF& A) {
    const FiniteField& F = A.field();
    std::vector<std::vector<FFElem>> m(A.rows(), std::vector<FFElem>(A.cols()));
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) m[i][j] = A.at(i, j);
    auto piv = rref(F, m, A.cols());
    std::vector<char> is_piv(A.cols(), 0);
    for (int c : piv) is_piv[c] = 1;
    std::vector<std::vector<FFElem>> basis;
    for (int free = 0; free < A.cols(); ++free) {
        if (is_piv[free]) continue;
        std::vector<FFElem> v(A.cols(), 0);
        v[free] = F.one();
        for (size_t k = 0; k < piv.size(); ++k) v[piv[k]] = F.neg(m[k][free]);
        basis.push_back(std::move(v));
    }
    return basis;
}

void SpanBuilder::reduce(std::vector<FFElem>& v) const {
    const FiniteField& F = *F_;
    for (size_t k = 0; k < rows_.size(); ++k) {
        FFElem c = v[pivots_[k]];
        if (c == 0) continue;
        for (int j = 0; j < len_; ++j) v[j] = F.sub(v[j], F.mul(c, rows_[k][j]));
    }
}

bool SpanBuilder::add(std::vector<FFElem> v) {
    const FiniteField& F = *F_;
    reduce(v);
    int p = -1;
    for (int j = 0; j < len_; ++j)
        if (v[j] != 0) {
            p = j;
            break;
        }
    if (p < 0) return false;
    FFElem pinv = F.inv(v[p]);
    for (auto& c : v) c = F.mul(c, pinv);
    rows_.push_back(std::move(v));
    pivots_.push_back(p);
    return true;
}

bool SpanBuilder::contains(std::vector<FFElem> v) const {
    reduce(v);
    for (FFElem c : v)
        if (c != 0) return false;
    return true;
}

// ---- polynomials ----

Poly poly_trim(Poly a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

int poly_deg(const Poly& a) { return (int)a.size() - 1; }

Poly poly_add(const FiniteField& F, const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) {
        FFElem x = i < a.size() ? a[i] : 0;
        FFElem y = i < b.size() ? b[i] : 0;
        r[i] = F.add(x, y);
    }
    return poly_trim(std::move(r));
}

Poly poly_sub(const FiniteField& F, const Poly& a, const Poly& b) {
    Poly nb = b;
    for (auto& c : nb) c = F.neg(c);
    return poly_add(F, a, nb);
}

Poly poly_mul(const FiniteField& F, const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    }
    return poly_trim(std::move(r));
}

std::pair<Poly, Poly> poly_divmod(const FiniteField& F, Poly a, const Poly& b) {
    a = poly_trim(std::move(a));
    Poly bb = poly_trim(b);
    int db = poly_deg(bb);
    require(db >= 0, Errc::ZeroArgument, "division by zero polynomial");
    FFElem lead_inv = F.inv(bb[db]);
    Poly quot;
    while (poly_deg(a) >= db) {
        int k = poly_deg(a) - db;
        FFElem c = F.mul(a.back(), lead_inv);
        if ((int)quot.size() < k + 1) quot.resize(k + 1, 0);
        quot[k] = c;
        for (int i = 0; i <= db; ++i) a[k + i] = F.sub(a[k + i], F.mul(c, bb[i]));
        a = poly_trim(std::move(a));
    }
    return {poly_trim(std::move(quot)), a};
}

Poly poly_mod(const FiniteField& F, Poly a, const Poly& b) {
    return poly_divmod(F, std::move(a), b).second;
}

Poly poly_monic(const FiniteField& F, Poly a) {
    a = poly_trim(std::move(a));
    if (a.empty()) return a;
    FFElem li = F.inv(a.back());
    for (auto& c : a) c = F.mul(c, li);
    return a;
}

Poly poly_gcd(const FiniteField& F, Poly a, Poly b) {
    a = poly_trim(std::move(a));
    b = poly_trim(std::move(b));
    while (!b.empty()) {
        Poly r = poly_mod(F, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return poly_monic(F, std::move(a));
}

FFElem poly_eval(const FiniteField& F, const Poly& a, FFElem x) {
    FFElem r = 0;
    for (int i = poly_deg(a); i >= 0; --i) r = F.add(F.mul(r, x), a[i]);
    return r;
}

Poly poly_derivative(const FiniteField& F, const Poly& a) {
    Poly r;
    for (int i = 1; i <= poly_deg(a); ++i)
        r.push_back(F.mul(a[i], F.from_int(i)));
    return poly_trim(std::move(r));
}

std::optional<Poly> poly_invmod(const FiniteField& F, const Poly& a, const Poly& m) {
    // extended Euclid: r0 = m, r1 = a mod m
    Poly r0 = poly_trim(m), r1 = poly_mod(F, a, m);
    Poly t0 = {}, t1 = {F.one()};
    while (!r1.empty()) {
        auto [q, r2] = poly_divmod(F, r0, r1);
        Poly t2 = poly_sub(F, t0, poly_mul(F, q, t1));
        r0 = std::move(r1);
        r1 = std::move(r2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (poly_deg(r0) != 0) return std::nullopt;
    FFElem li = F.inv(r0[0]);
    for (auto& c : t0) c = F.mul(c, li);
    return poly_mod(F, std::move(t0), m);
}

bool poly_irreducible(const FiniteField& F, const Poly& a) {
    Poly f = poly_trim(a);
    int deg = poly_deg(f);
    if (deg <= 0) return false;
    if (deg == 1) return true;
    for (int d = 1; 2 * d <= deg; ++d) {
        int64_t count = 1;
        for (int i = 0; i < d; ++i) {
            count *= F.q();
            require(count <= 2000000, Errc::ConfigError, "irreducibility test too large");
        }
        for (int64_t idx = 0; idx < count; ++idx) {
            Poly g(d + 1, 0);
            int64_t t = idx;
            for (int i = 0; i < d; ++i) {
                g[i] = (FFElem)(t % F.q());
                t /= F.q();
            }
            g[d] = F.one();
            if (poly_mod(F, f, g).empty()) return false;
        }
    }
    return true;
}

std::vector<PolyFactor> factor_poly(const FiniteField& F, Poly a) {
    a = poly_monic(F, std::move(a));
    std::vector<PolyFactor> out;
    int guard = poly_deg(a);
    for (int d = 1; d <= poly_deg(a) && poly_deg(a) > 0; ++d) {
        if (2 * d > poly_deg(a)) {
            // nothing of degree <= deg/2 divides it: the remainder is irreducible
            out.push_back({a, 1});
            a = {F.one()};
            break;
        }
        int64_t count = 1;
        for (int i = 0; i < d; ++i) {
            count *= F.q();
            require(count <= 2000000, Errc::ConfigError, "factorization too large");
        }
        for (int64_t idx = 0; idx < count && poly_deg(a) >= d; ++idx) {
            Poly g(d + 1, 0);
            int64_t t = idx;
            for (int i = 0; i < d; ++i) {
                g[i] = (FFElem)(t % F.q());
                t /= F.q();
            }
            g[d] = F.one();
            if (d > 1 && !poly_irreducible(F, g)) continue;
            int mult = 0;
            while (true) {
                auto [q, r] = poly_divmod(F, a, g);
                if (!r.empty()) break;
                a = q;
                ++mult;
            }
            if (mult > 0) out.push_back({g, mult});
        }
        require(--guard > -64, Errc::Internal, "factorization did not terminate");
    }
    std::sort(out.begin(), out.end(), [](const PolyFactor& x, const PolyFactor& y) {
        if (x.p.size() != y.p.size()) return x.p.size() < y.p.size();
        return x.p < y.p;
    });
    return out;
}

Poly charpoly(const MatrixF& M) {
    const FiniteField& F = M.field();
    int n = M.rows();
    require(n <= 6, Errc::ConfigError, "charpoly by cofactor expansion limited to n <= 6");
    // entries of tI - M as polynomials
    std::vector<std::vector<Poly>> E(n, std::vector<Poly>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Poly e;
            if (M.at(i, j) != 0) e.push_back(F.neg(M.at(i, j)));
            if (i == j) {
                e.resize(2, 0);
                e[1] = F.one();
            }
            E[i][j] = poly_trim(std::move(e));
        }
    // recursive determinant over the polynomial ring
    std::vector<int> cols(n);
    for (int i = 0; i < n; ++i) cols[i] = i;
    struct Det {
        const FiniteField& F;
        const std::vector<std::vector<Poly>>& E;
        Poly run(int row, std::vector<int>& cols) {
            if (cols.empty()) return {F.one()};
            Poly det;
            for (size_t k = 0; k < cols.size(); ++k) {
                int c = cols[k];
                if (E[row][c].empty()) continue;
                std::vector<int> rest;
                for (size_t j = 0; j < cols.size(); ++j)
                    if (j != k) rest.push_back(cols[j]);
                Poly sub = run(row + 1, rest);
                Poly term = poly_mul(F, E[row][c], sub);
                if (k % 2 == 1)
                    for (auto& v : term) v = F.neg(v);
                det = poly_add(F, det, term);
            }
            return det;
        }
    } det{F, E};
    return det.run(0, cols);
}

bool is_regular(const MatrixF& M) {
    const FiniteField& F = M.field();
    int n = M.rows();
    SpanBuilder span(F, n * n);
    MatrixF P = MatrixF::identity(F, n);
    for (int k = 0; k < n; ++k) {
        if (!span.add(P.vec())) return false;
        P = P.mul(M);
    }
    return true;
}

// ---- RegularMatrix ----

void RegularMatrix::finish() {
    const FiniteField& F = beta_.field();
    require(is_regular(beta_), Errc::NotRegular, "matrix is not regular");
    charpoly_ = charpoly(beta_);
    factors_ = factor_poly(F, charpoly_);
    powers_.clear();
    MatrixF P = MatrixF::identity(F, beta_.rows());
    for (int k = 0; k < beta_.rows(); ++k) {
        powers_.push_back(P);
        P = P.mul(beta_);
    }
}

RegularMatrix RegularMatrix::from_matrix(MatrixF beta) {
    RegularMatrix r;
    r.beta_ = std::move(beta);
    r.finish();
    // detect a Jordan shape so split helpers work on explicit input too
    const MatrixF& b = r.beta_;
    const FiniteField& F = b.field();
    int n = b.rows();
    bool jordan = true;
    for (int i = 0; i < n && jordan; ++i)
        for (int j = 0; j < n && jordan; ++j) {
            if (j == i || j == i + 1) continue;
            if (b.at(i, j) != 0) jordan = false;
        }
    for (int i = 0; i + 1 < n && jordan; ++i) {
        FFElem s = b.at(i, i + 1);
        if (s != 0 && s != F.one()) jordan = false;
        if (s != 0 && b.at(i, i) != b.at(i + 1, i + 1)) jordan = false;
    }
    if (jordan && n > 0) {
        int start = 0;
        for (int i = 0; i < n; ++i) {
            bool end = (i + 1 == n) || b.at(i, i + 1) == 0;
            if (end) {
                r.jordan_blocks_.push_back({b.at(start, start), i - start + 1});
                r.block_layout_.push_back({start, i - start + 1});
                start = i + 1;
            }
        }
    }
    return r;
}

RegularMatrix RegularMatrix::jordan(const FiniteField& F,
                                    std::vector<std::pair<FFElem, int>> blocks) {
    std::sort(blocks.begin(), blocks.end());
    for (size_t i = 0; i + 1 < blocks.size(); ++i)
        require(blocks[i].first != blocks[i + 1].first, Errc::DuplicateEigenvalue,
                "jordan blocks need pairwise distinct eigenvalues");
    int n = 0;
    for (auto& [a, sz] : blocks) n += sz;
    MatrixF m(F, n, n);
    int pos = 0;
    for (auto& [a, sz] : blocks) {
        for (int i = 0; i < sz; ++i) {
            m.at(pos + i, pos + i) = a;
            if (i + 1 < sz) m.at(pos + i, pos + i + 1) = F.one();
        }
        pos += sz;
    }
    RegularMatrix r = from_matrix(std::move(m));
    return r;
}

RegularMatrix RegularMatrix::companion(const FiniteField& F, Poly monic) {
    monic = poly_trim(std::move(monic));
    int n = poly_deg(monic);
    require(n >= 1 && monic[n] == F.one(), Errc::ConfigError, "companion needs a monic polynomial");
    MatrixF m(F, n, n);
    for (int i = 0; i + 1 < n; ++i) m.at(i + 1, i) = F.one();
    for (int i = 0; i < n; ++i) m.at(i, n - 1) = F.neg(monic[i]);
    return from_matrix(std::move(m));
}

RegularMatrix RegularMatrix::block_diagonal(std::vector<RegularMatrix> parts) {
    require(!parts.empty(), Errc::ConfigError, "empty block list");
    const FiniteField& F = parts[0].field();
    int n = 0;
    for (auto& p : parts) n += p.n();
    MatrixF m(F, n, n);
    std::vector<std::pair<int, int>> layout;
    int pos = 0;
    for (auto& p : parts) {
        for (int i = 0; i < p.n(); ++i)
            for (int j = 0; j < p.n(); ++j) m.at(pos + i, pos + j) = p.beta().at(i, j);
        layout.push_back({pos, p.n()});
        pos += p.n();
    }
    RegularMatrix r = from_matrix(std::move(m));
    r.block_layout_ = layout;
    return r;
}

bool RegularMatrix::separable() const {
    for (auto& f : factors_)
        if (f.mult > 1) return false;
    return true;
}

bool RegularMatrix::irreducible() const {
    return factors_.size() == 1 && factors_[0].mult == 1 &&
           poly_deg(factors_[0].p) == beta_.rows();
}

bool RegularMatrix::split() const {
    for (auto& f : factors_)
        if (poly_deg(f.p) != 1) return false;
    return true;
}

std::string RegularMatrix::describe() const {
    std::ostringstream os;
    if (!jordan_blocks_.empty()) {
        os << "jordan";
        for (auto& [a, sz] : jordan_blocks_) os << " " << sz << ":" << a;
    } else {
        os << "charpoly";
        for (FFElem c : charpoly_) os << " " << c;
    }
    os << " over q=" << field().q();
    return os.str();
}

// ---- CentralizerAlgebra ----

CentralizerAlgebra::CentralizerAlgebra(const RegularMatrix& rm, int64_t unit_bound) : rm_(&rm) {
    const FiniteField& F = rm.field();
    int n = rm.n();
    power_basis_mat_ = MatrixF(F, n * n, n);
    for (int k = 0; k < n; ++k) {
        auto v = rm.powers()[k].vec();
        for (int i = 0; i < n * n; ++i) power_basis_mat_.at(i, k) = v[i];
    }
    int64_t total = 1;
    bool overflow = false;
    for (int i = 0; i < n; ++i) {
        total *= F.q();
        if (total > unit_bound) overflow = true;
    }
    if (!overflow) {
        for (int64_t idx = 0; idx < total; ++idx) {
            Elem e(n);
            int64_t t = idx;
            for (int i = 0; i < n; ++i) {
                e[i] = (FFElem)(t % F.q());
                t /= F.q();
            }
            if (is_unit(e)) units_.push_back(std::move(e));
        }
    }
}

CentralizerAlgebra::Elem CentralizerAlgebra::one() const {
    Elem e(n(), 0);
    e[0] = field().one();
    return e;
}

CentralizerAlgebra::Elem CentralizerAlgebra::scalar(FFElem c) const {
    Elem e(n(), 0);
    e[0] = c;
    return e;
}

CentralizerAlgebra::Elem CentralizerAlgebra::add(const Elem& a, const Elem& b) const {
    Elem r(n());
    for (int i = 0; i < n(); ++i) r[i] = field().add(a[i], b[i]);
    return r;
}

CentralizerAlgebra::Elem CentralizerAlgebra::sub(const Elem& a, const Elem& b) const {
    Elem r(n());
    for (int i = 0; i < n(); ++i) r[i] = field().sub(a[i], b[i]);
    return r;
}

CentralizerAlgebra::Elem CentralizerAlgebra::neg(const Elem& a) const {
    Elem r(n());
    for (int i = 0; i < n(); ++i) r[i] = field().neg(a[i]);
    return r;
}

CentralizerAlgebra::Elem CentralizerAlgebra::mul(const Elem& a, const Elem& b) const {
    Poly r = poly_mod(field(), poly_mul(field(), poly_trim(a), poly_trim(b)), rm_->char_poly());
    r.resize(n(), 0);
    return r;
}

CentralizerAlgebra::Elem CentralizerAlgebra::pow(const Elem& a, int64_t k) const {
    Elem r = one(), x = a;
    require(k >= 0, Errc::ConfigError, "negative power");
    while (k) {
        if (k & 1) r = mul(r, x);
        x = mul(x, x);
        k >>= 1;
    }
    return r;
}

bool CentralizerAlgebra::is_unit(const Elem& a) const {
    Poly g = poly_gcd(field(), poly_trim(a), rm_->char_poly());
    return poly_deg(g) == 0;
}

CentralizerAlgebra::Elem CentralizerAlgebra::inv(const Elem& a) const {
    auto r = poly_invmod(field(), poly_trim(a), rm_->char_poly());
    require(r.has_value(), Errc::NotUnit, "element is not a unit of F[beta]");
    r->resize(n(), 0);
    return *r;
}

CentralizerAlgebra::Elem CentralizerAlgebra::frobenius(const Elem& a) const {
    return pow(a, field().q());
}

MatrixF CentralizerAlgebra::to_matrix(const Elem& a) const {
    const FiniteField& F = field();
    MatrixF m(F, n(), n());
    for (int k = 0; k < n(); ++k)
        if (k < (int)a.size() && a[k] != 0) m = m.add(rm_->powers()[k].scaled(a[k]));
    return m;
}

CentralizerAlgebra::Elem CentralizerAlgebra::from_matrix(const MatrixF& X) const {
    auto sol = solve_linear(power_basis_mat_, X.vec());
    require(sol.has_value(), Errc::NotAnExtension, "matrix is not in F[beta]");
    return *sol;
}

// ---- SymplecticSpace ----

FFElem SymplecticSpace::form(const MatrixF& X, const MatrixF& Y) const {
    MatrixF c = X.mul(Y).sub(Y.mul(X));
    return c.mul(rm_->beta()).trace();
}

std::vector<FFElem> SymplecticSpace::quot_coords(const MatrixF& X) const {
    auto full = row_apply(field(), X.vec(), basis_inv_.transpose());
    // basis_inv_ maps vec(X) (column) to coordinates; with row_apply we use
    // the transpose so the result is the coordinate row
    int n = rm_->n();
    return std::vector<FFElem>(full.begin() + n, full.end());
}

std::vector<FFElem> SymplecticSpace::cent_coords(const MatrixF& X) const {
    auto full = row_apply(field(), X.vec(), basis_inv_.transpose());
    int n = rm_->n();
    return std::vector<FFElem>(full.begin(), full.begin() + n);
}

MatrixF SymplecticSpace::section(const std::vector<FFElem>& v) const {
    const FiniteField& F = field();
    MatrixF m(F, rm_->n(), rm_->n());
    for (size_t k = 0; k < quotient_basis_.size(); ++k)
        if (v[k] != 0) m = m.add(quotient_basis_[k].scaled(v[k]));
    return m;
}

FFElem SymplecticSpace::form_coords(const std::vector<FFElem>& u,
                                    const std::vector<FFElem>& v) const {
    const FiniteField& F = field();
    FFElem s = 0;
    for (int i = 0; i < dim(); ++i) {
        if (u[i] == 0) continue;
        for (int j = 0; j < dim(); ++j)
            if (v[j] != 0) s = F.add(s, F.mul(u[i], F.mul(gram_.at(i, j), v[j])));
    }
    return s;
}

MatrixF SymplecticSpace::conj_action(const CentralizerAlgebra& C,
                                     const CentralizerAlgebra::Elem& eps) const {
    MatrixF e = C.to_matrix(eps);
    MatrixF einv = C.to_matrix(C.inv(eps));
    MatrixF sigma(field(), dim(), dim());
    for (int i = 0; i < dim(); ++i) {
        MatrixF conj = einv.mul(quotient_basis_[i]).mul(e);
        auto row = quot_coords(conj);
        for (int j = 0; j < dim(); ++j) sigma.at(i, j) = row[j];
    }
    return sigma;
}

SymplecticSpace build_symplectic_space(const RegularMatrix& rm, ComplementKind kind,
                                       const std::vector<MatrixF>* custom) {
    const FiniteField& F = rm.field();
    int n = rm.n();
    int nn = n * n;
    SymplecticSpace sp;
    sp.rm_ = &rm;
    sp.kind_ = kind;

    SpanBuilder span(F, nn);
    for (auto& P : rm.powers()) span.add(P.vec());
    require(span.dim() == n, Errc::Internal, "power basis degenerate");

    std::vector<MatrixF> complement;
    if (kind == ComplementKind::Greedy) {
        for (int i = 0; i < n && (int)complement.size() < nn - n; ++i)
            for (int j = 0; j < n && (int)complement.size() < nn - n; ++j) {
                MatrixF e(F, n, n);
                e.at(i, j) = F.one();
                if (span.add(e.vec())) complement.push_back(std::move(e));
            }
    } else if (kind == ComplementKind::TransposeOrtho) {
        // {X : tr(X^t u) = 0 for all u in F[beta]}: tr(X^t u) = sum X_ij u_ij
        MatrixF constraints(F, n, nn);
        for (int k = 0; k < n; ++k) {
            auto v = rm.powers()[k].vec();
            for (int i = 0; i < nn; ++i) constraints.at(k, i) = v[i];
        }
        for (auto& kv : right_kernel(constraints)) {
            MatrixF e(F, n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) e.at(i, j) = kv[(size_t)i * n + j];
            require(span.add(e.vec()), Errc::SingularTraceForm,
                    "transpose pairing is degenerate on F[beta]");
            complement.push_back(std::move(e));
        }
    } else {
        require(custom != nullptr, Errc::ConfigError, "custom complement missing");
        for (auto& e : *custom) {
            require(span.add(e.vec()), Errc::ConfigError, "custom complement not independent");
            complement.push_back(e);
        }
    }
    require((int)complement.size() == nn - n, Errc::Internal, "complement has wrong dimension");
    sp.quotient_basis_ = complement;

    MatrixF basis(F, nn, nn);
    for (int k = 0; k < n; ++k) {
        auto v = rm.powers()[k].vec();
        for (int i = 0; i < nn; ++i) basis.at(i, k) = v[i];
    }
    for (int k = 0; k < nn - n; ++k) {
        auto v = complement[k].vec();
        for (int i = 0; i < nn; ++i) basis.at(i, n + k) = v[i];
    }
    sp.basis_inv_ = inverse(basis);

    int D = nn - n;
    sp.gram_ = MatrixF(F, D, D);
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) sp.gram_.at(i, j) = sp.form(complement[i], complement[j]);
    for (int i = 0; i < D; ++i) {
        require(sp.gram_.at(i, i) == 0, Errc::Internal, "gram not alternating");
        for (int j = 0; j < D; ++j)
            require(sp.gram_.at(i, j) == F.neg(sp.gram_.at(j, i)), Errc::Internal,
                    "gram not skew");
    }
    if (D > 0)
        require(try_inverse(sp.gram_, sp.gram_inv_), Errc::Internal,
                "symplectic form degenerate on the quotient");
    else
        sp.gram_inv_ = sp.gram_;
    return sp;
}

void validate_polarization(const SymplecticSpace& sp, const Polarization& pol) {
    const FiniteField& F = sp.field();
    int D = sp.dim();
    require((int)pol.wminus.size() == D / 2 && (int)pol.wplus.size() == D / 2,
            Errc::WrongShape, "polarization halves must have dimension dim/2");
    for (auto* half : {&pol.wminus, &pol.wplus})
        for (size_t i = 0; i < half->size(); ++i)
            for (size_t j = 0; j < half->size(); ++j)
                require(sp.form_coords((*half)[i], (*half)[j]) == 0, Errc::WrongShape,
                        "polarization half is not isotropic");
    SpanBuilder span(F, D);
    for (auto& v : pol.wminus) require(span.add(v), Errc::WrongShape, "w- not independent");
    for (auto& v : pol.wplus) require(span.add(v), Errc::WrongShape, "w+ not transverse to w-");
}

Polarization polarization_split(const SymplecticSpace& sp) {
    const RegularMatrix& rm = sp.regular();
    const FiniteField& F = sp.field();
    require(!rm.jordan_blocks().empty() && rm.split(), Errc::NotSplit,
            "need a split beta in Jordan form");
    int n = rm.n();
    Polarization pol;
    pol.kind = Polarization::Kind::SplitTriangular;
    SpanBuilder sminus(F, sp.dim()), splus(F, sp.dim());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            MatrixF e(F, n, n);
            e.at(i, j) = F.one();
            auto v = sp.quot_coords(e);
            if (i > j) {
                if (sminus.add(v)) pol.wminus.push_back(v);
            } else {
                if (splus.add(v)) pol.wplus.push_back(v);
            }
        }
    validate_polarization(sp, pol);
    return pol;
}

InvolutionData involution_data(const RegularMatrix& rm) {
    const FiniteField& F = rm.field();
    int n = rm.n();
    require(rm.irreducible(), Errc::NotIrreducible, "involution needs an irreducible charpoly");
    // the quadratic normal form [[0,a],[1,0]] uses the antidiagonal g, which
    // makes W_- the traceless diagonal matrices as in the closed-form case
    if (n == 2 && rm.beta().at(0, 0) == 0 && rm.beta().at(1, 1) == 0 &&
        rm.beta().at(1, 0) == F.one()) {
        MatrixF g(F, 2, 2);
        g.at(0, 1) = F.one();
        g.at(1, 0) = F.one();
        return InvolutionData{g};
    }
    // K = [w, beta w, ..., beta^{n-1} w] with the cyclic vector w = e_1; for an
    // irreducible charpoly every nonzero vector is cyclic
    MatrixF K(F, n, n);
    std::vector<FFElem> w(n, 0);
    w[0] = F.one();
    for (int k = 0; k < n; ++k) {
        // column k = beta^k w
        for (int i = 0; i < n; ++i) {
            FFElem s = 0;
            for (int j = 0; j < n; ++j) s = F.add(s, F.mul(rm.powers()[k].at(i, j), w[j]));
            K.at(i, k) = s;
        }
    }
    MatrixF Kinv = inverse(K);
    // u_i = sum_k Kinv(k, i) beta^k gives the basis whose regular representation
    // is the inclusion; g = (tr(u_i u_j)) conjugates beta to its transpose
    std::vector<MatrixF> u;
    for (int i = 0; i < n; ++i) {
        MatrixF m(F, n, n);
        for (int k = 0; k < n; ++k)
            if (Kinv.at(k, i) != 0) m = m.add(rm.powers()[k].scaled(Kinv.at(k, i)));
        u.push_back(std::move(m));
    }
    MatrixF g(F, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g.at(i, j) = u[i].mul(u[j]).trace();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            require(g.at(i, j) == g.at(j, i), Errc::Internal, "trace form not symmetric");
    MatrixF ginv;
    require(try_inverse(g, ginv), Errc::SingularTraceForm, "trace form singular");
    MatrixF check = g.mul(rm.beta()).mul(ginv);
    require(check.equals(rm.beta().transpose()), Errc::Internal,
            "g does not conjugate beta to its transpose");
    return InvolutionData{g};
}

MatrixF InvolutionData::star(const MatrixF& X) const {
    return inverse(g).mul(X.transpose()).mul(g);
}

Polarization polarization_involution(const SymplecticSpace& sp) {
    const RegularMatrix& rm = sp.regular();
    const FiniteField& F = sp.field();
    InvolutionData inv = involution_data(rm);
    int n = rm.n();
    MatrixF ginv = inverse(inv.g);
    Polarization pol;
    pol.kind = Polarization::Kind::Involution;
    if (n == 2 && rm.beta().at(0, 0) == 0 && rm.beta().at(1, 1) == 0 &&
        rm.beta().at(1, 0) == F.one()) {
        // normal-form identifications: W- = x diag(1,-1), W+ = y E_12
        MatrixF h(F, 2, 2);
        h.at(0, 0) = F.one();
        h.at(1, 1) = F.neg(F.one());
        MatrixF e12(F, 2, 2);
        e12.at(0, 1) = F.one();
        pol.wminus.push_back(sp.quot_coords(h));
        pol.wplus.push_back(sp.quot_coords(e12));
        validate_polarization(sp, pol);
        return pol;
    }
    SpanBuilder sminus(F, sp.dim()), splus(F, sp.dim());
    // solve X* = +-X as a linear condition on the n^2 coordinates
    for (int sign = 0; sign < 2; ++sign) {
        MatrixF op(F, n * n, n * n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                MatrixF e(F, n, n);
                e.at(a, b) = F.one();
                MatrixF se = ginv.mul(e.transpose()).mul(inv.g);
                auto v = se.vec();
                for (int i = 0; i < n * n; ++i) op.at(i, (size_t)a * n + b) = v[i];
            }
        // op - (+-1) id
        for (int i = 0; i < n * n; ++i)
            op.at(i, i) = F.sub(op.at(i, i), sign == 0 ? F.neg(F.one()) : F.one());
        for (auto& kv : right_kernel(op)) {
            MatrixF X(F, n, n);
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) X.at(a, b) = kv[(size_t)a * n + b];
            auto v = sp.quot_coords(X);
            if (sign == 0) {
                if (sminus.add(v)) pol.wminus.push_back(v);
            } else {
                if (splus.add(v)) pol.wplus.push_back(v);
            }
        }
    }
    validate_polarization(sp, pol);
    return pol;
}

Polarization polarization_darboux(const SymplecticSpace& sp) {
    const FiniteField& F = sp.field();
    int D = sp.dim();
    Polarization pol;
    pol.kind = Polarization::Kind::Custom;
    // symplectic Gram-Schmidt
    std::vector<std::vector<FFElem>> remaining;
    for (int i = 0; i < D; ++i) {
        std::vector<FFElem> e(D, 0);
        e[i] = F.one();
        remaining.push_back(std::move(e));
    }
    while (!remaining.empty()) {
        SpanBuilder indep(F, D);
        std::vector<std::vector<FFElem>> basis;
        for (auto& v : remaining)
            if (indep.add(v)) basis.push_back(v);
        if (basis.empty()) break;
        auto v = basis[0];
        std::vector<FFElem> w;
        for (size_t k = 1; k < basis.size(); ++k)
            if (sp.form_coords(v, basis[k]) != 0) {
                w = basis[k];
                break;
            }
        require(!w.empty(), Errc::Internal, "degenerate block in darboux reduction");
        FFElem c = sp.form_coords(v, w);
        FFElem cinv = F.inv(c);
        for (auto& x : w) x = F.mul(x, cinv);  // <v, w> = 1
        pol.wminus.push_back(v);
        pol.wplus.push_back(w);
        std::vector<std::vector<FFElem>> next;
        for (size_t k = 1; k < basis.size(); ++k) {
            auto u = basis[k];
            FFElem uw = sp.form_coords(u, w);
            FFElem uv = sp.form_coords(u, v);
            // u' = u - <u,w> v + <u,v> w
            for (int i = 0; i < D; ++i)
                u[i] = F.add(F.sub(u[i], F.mul(uw, v[i])), F.mul(uv, w[i]));
            bool zero = true;
            for (FFElem x : u)
                if (x != 0) zero = false;
            if (!zero) next.push_back(std::move(u));
        }
        remaining = std::move(next);
    }
    validate_polarization(sp, pol);
    return pol;
}

}  // namespace schur
