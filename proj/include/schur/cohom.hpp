#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "schur/common.hpp"

namespace schur {

/// Finite abelian group given by its multiplication table. Commutativity is
/// checked exhaustively, associativity exhaustively up to ~2^25 triples and
/// on random samples beyond that.
class AbelianGroupTable {
  public:
    AbelianGroupTable(int n, std::function<int(int, int)> mul);

    int order() const { return n_; }
    int mul(int a, int b) const { return mul_[(size_t)a * n_ + b]; }
    int inv(int a) const { return inv_[a]; }
    int id() const { return id_; }
    int64_t element_order(int a) const;
    int64_t exponent() const { return exponent_; }
    int power(int a, int64_t k) const;
    /// Greedy generating set (indices), deterministic.
    const std::vector<int>& generators() const { return gens_; }

  private:
    int n_;
    std::vector<int32_t> mul_;
    std::vector<int32_t> inv_;
    int id_;
    int64_t exponent_;
    std::vector<int> gens_;
};

/// 2-cocycle on G with values in mu_M, stored as exponents mod M.
class Cocycle2 {
  public:
    Cocycle2(const AbelianGroupTable& G, int64_t M, std::vector<int64_t> table);

    const AbelianGroupTable& group() const { return *G_; }
    int64_t modulus() const { return M_; }
    int64_t at(int x, int y) const { return table_[(size_t)x * G_->order() + y]; }
    const std::vector<int64_t>& table() const { return table_; }

    /// Pointwise product after lifting both to lcm of the moduli.
    Cocycle2 times(const Cocycle2& o) const;
    Cocycle2 lifted(int64_t M2) const;

    std::string to_json() const;
    static Cocycle2 from_json(const AbelianGroupTable& G, const std::string& js);

  private:
    const AbelianGroupTable* G_;
    int64_t M_;
    std::vector<int64_t> table_;
};

/// Exhaustive (or sampled, for very large groups) check of the 2-cocycle
/// identity c(x,y) + c(xy,z) = c(x,yz) + c(y,z).
bool is_cocycle(const Cocycle2& c);

/// The alternating pairing c(x,y) - c(y,x) mod M. This is the full class
/// invariant: with C^x coefficients the class is trivial iff it vanishes.
std::vector<int64_t> antisym_pairing(const Cocycle2& c);

bool is_trivial_class(const Cocycle2& c);

struct CoboundaryWitness {
    int64_t M_prime;
    std::vector<int64_t> delta;  // exponents mod M_prime, delta[id] normalized

    std::string to_json() const;
    static CoboundaryWitness from_json(const std::string& js);
};

/// Computes delta with (d delta)(x,y) = delta(y) - delta(xy) + delta(x) equal
/// to the lift of c into mu_M' where M' = lcm(M, exponent(G)) * M. Throws
/// NotTrivialClass when the class is nonzero, SolverOverflow when M' does not
/// fit in 63 bits.
CoboundaryWitness solve_coboundary(const Cocycle2& c);

/// The coboundary table of a given delta (mod M), for tests and verification.
std::vector<int64_t> coboundary_of(const AbelianGroupTable& G, int64_t M,
                                   const std::vector<int64_t>& delta);

/// Verifies d(delta) == (M'/M) * c mod M'.
bool witness_matches(const Cocycle2& c, const CoboundaryWitness& w);

}  // namespace schur
