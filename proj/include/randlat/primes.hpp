#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "randlat/korobov.hpp"

namespace randlat {

std::int64_t mod_mul(std::int64_t a, std::int64_t b, std::int64_t m);
std::int64_t mod_pow(std::int64_t base, std::int64_t exp, std::int64_t m);
/// Inverse of a modulo m; requires gcd(a, m) == 1.
std::int64_t mod_inverse(std::int64_t a, std::int64_t m);

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(std::int64_t n);

/// Sieve of Eratosthenes: flags[i] == true iff i is prime, i = 0..limit.
std::vector<bool> prime_sieve(std::int64_t limit);

/// Distinct prime factors, ascending.
std::vector<std::int64_t> prime_factors(std::int64_t n);

/// Smallest generator of (Z/pZ)^*. Returns 1 for p == 2.
std::int64_t primitive_root(std::int64_t p);

/// True iff g has multiplicative order p-1 modulo p.
bool is_primitive_root(std::int64_t g, std::int64_t p);

/// The primes p with n/2 < p <= n in ascending order, each with its
/// smallest primitive root. Immutable after construction.
class PrimePool {
public:
    explicit PrimePool(std::int64_t n);

    std::int64_t budget() const { return n_; }
    const std::vector<std::int64_t>& primes() const { return primes_; }
    const std::vector<std::int64_t>& primitive_roots() const { return roots_; }
    std::size_t size() const { return primes_.size(); }
    std::int64_t prime(std::size_t i) const { return primes_[i]; }
    std::optional<std::size_t> index_of(std::int64_t p) const;

    friend bool operator==(const PrimePool&, const PrimePool&) = default;

private:
    std::int64_t n_;
    std::vector<std::int64_t> primes_;
    std::vector<std::int64_t> roots_;
};

PrimePool build_prime_pool(std::int64_t n);

/// A generating vector in Z_N^d, N = prod of the pool primes, stored as
/// its residues modulo each pool prime (rows = primes, cols = dimensions).
class ResidueVector {
public:
    /// All residues set to 1.
    ResidueVector(PrimePool pool, int d);
    ResidueVector(PrimePool pool, IntMatrix residues);

    const PrimePool& pool() const { return pool_; }
    int dimension() const { return static_cast<int>(residues_.cols()); }
    const IntMatrix& residues() const { return residues_; }
    std::int64_t residue(std::size_t prime_index, int j) const { return residues_(prime_index, j); }
    void set_residue(std::size_t prime_index, int j, std::int64_t value);

    /// z^{(p)} for the i-th pool prime.
    IntVector vector_for(std::size_t prime_index) const;

    /// Restriction to the first s dimensions.
    ResidueVector truncated(int s) const;

private:
    void validate() const;

    PrimePool pool_;
    IntMatrix residues_;
};

using BigInt = boost::multiprecision::cpp_int;

/// The unique z_j in Z_N congruent to every stored residue of component j.
BigInt crt_reconstruct(const ResidueVector& v, int component);

/// CRT for two coprime moduli: the x in Z_{pq} with x = a (mod p), x = b (mod q).
std::int64_t crt_pair(std::int64_t a, std::int64_t p, std::int64_t b, std::int64_t q);

}  // namespace randlat
