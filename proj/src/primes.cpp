#include "randlat/primes.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>
#include <utility>

namespace randlat {

std::int64_t mod_mul(std::int64_t a, std::int64_t b, std::int64_t m) {
    return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % m);
}

std::int64_t mod_pow(std::int64_t base, std::int64_t exp, std::int64_t m) {
    if (m == 1) return 0;
    std::int64_t result = 1;
    base %= m;
    if (base < 0) base += m;
    while (exp > 0) {
        if (exp & 1) result = mod_mul(result, base, m);
        base = mod_mul(base, base, m);
        exp >>= 1;
    }
    return result;
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
    std::int64_t old_r = ((a % m) + m) % m, r = m;
    std::int64_t old_s = 1, s = 0;
    while (r != 0) {
        const std::int64_t q = old_r / r;
        std::tie(old_r, r) = std::pair{r, old_r - q * r};
        std::tie(old_s, s) = std::pair{s, old_s - q * s};
    }
    if (old_r != 1) throw DomainError("value has no inverse modulo " + std::to_string(m));
    return ((old_s % m) + m) % m;
}

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    std::int64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    // witnesses sufficient for n < 3.3e24
    for (std::int64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        std::int64_t x = mod_pow(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            x = mod_mul(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::vector<bool> prime_sieve(std::int64_t limit) {
    std::vector<bool> flags(static_cast<std::size_t>(std::max<std::int64_t>(limit, 1) + 1), true);
    flags[0] = false;
    flags[1] = false;
    for (std::int64_t i = 2; i * i <= limit; ++i) {
        if (!flags[i]) continue;
        for (std::int64_t k = i * i; k <= limit; k += i) flags[k] = false;
    }
    return flags;
}

std::vector<std::int64_t> prime_factors(std::int64_t n) {
    std::vector<std::int64_t> factors;
    for (std::int64_t f = 2; f * f <= n; ++f) {
        if (n % f != 0) continue;
        factors.push_back(f);
        while (n % f == 0) n /= f;
    }
    if (n > 1) factors.push_back(n);
    return factors;
}

bool is_primitive_root(std::int64_t g, std::int64_t p) {
    if (p == 2) return g % 2 == 1;
    if (g % p == 0) return false;
    for (std::int64_t q : prime_factors(p - 1))
        if (mod_pow(g, (p - 1) / q, p) == 1) return false;
    return true;
}

std::int64_t primitive_root(std::int64_t p) {
    if (!is_prime(p)) throw NotPrimeError(std::to_string(p) + " is not prime");
    if (p == 2) return 1;
    for (std::int64_t g = 2; g < p; ++g)
        if (is_primitive_root(g, p)) return g;
    throw InvalidRootError("no primitive root found for " + std::to_string(p));
}

PrimePool::PrimePool(std::int64_t n) : n_(n) {
    if (n < 4) throw BudgetTooSmall("budget n=" + std::to_string(n) + " is below the minimum of 4");
    const auto flags = prime_sieve(n);
    for (std::int64_t p = n / 2 + 1; p <= n; ++p) {
        if (!flags[p]) continue;
        primes_.push_back(p);
        roots_.push_back(primitive_root(p));
    }
}

std::optional<std::size_t> PrimePool::index_of(std::int64_t p) const {
    const auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
    if (it == primes_.end() || *it != p) return std::nullopt;
    return static_cast<std::size_t>(it - primes_.begin());
}

PrimePool build_prime_pool(std::int64_t n) { return PrimePool(n); }

ResidueVector::ResidueVector(PrimePool pool, int d)
    : pool_(std::move(pool)), residues_(IntMatrix::Ones(static_cast<Eigen::Index>(pool_.size()), d)) {
    if (d < 1) throw DomainError("dimension must be at least 1");
}

ResidueVector::ResidueVector(PrimePool pool, IntMatrix residues)
    : pool_(std::move(pool)), residues_(std::move(residues)) {
    validate();
}

void ResidueVector::validate() const {
    if (residues_.rows() != static_cast<Eigen::Index>(pool_.size()))
        throw ValidationError("residue matrix must have one row per pool prime");
    if (residues_.cols() < 1) throw ValidationError("residue matrix needs at least one dimension");
    for (Eigen::Index i = 0; i < residues_.rows(); ++i) {
        const std::int64_t p = pool_.prime(static_cast<std::size_t>(i));
        if (residues_(i, 0) != 1)
            throw ValidationError("first component must be 1 for prime " + std::to_string(p));
        for (Eigen::Index j = 0; j < residues_.cols(); ++j)
            if (residues_(i, j) < 0 || residues_(i, j) >= p)
                throw ValidationError("residue out of range for prime " + std::to_string(p));
    }
}

void ResidueVector::set_residue(std::size_t prime_index, int j, std::int64_t value) {
    const std::int64_t p = pool_.prime(prime_index);
    if (value < 0 || value >= p) throw ValidationError("residue out of range");
    if (j == 0 && value != 1) throw ValidationError("first component is fixed to 1");
    residues_(static_cast<Eigen::Index>(prime_index), j) = value;
}

IntVector ResidueVector::vector_for(std::size_t prime_index) const {
    return residues_.row(static_cast<Eigen::Index>(prime_index)).transpose();
}

ResidueVector ResidueVector::truncated(int s) const {
    if (s < 1 || s > dimension()) throw DomainError("truncation dimension out of range");
    return ResidueVector(pool_, IntMatrix(residues_.leftCols(s)));
}

BigInt crt_reconstruct(const ResidueVector& v, int component) {
    const auto& primes = v.pool().primes();
    BigInt modulus = 1;
    for (std::int64_t p : primes) modulus *= p;
    BigInt result = 0;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        const std::int64_t p = primes[i];
        const BigInt cofactor = modulus / p;
        const std::int64_t cofactor_mod_p = static_cast<std::int64_t>(cofactor % p);
        const std::int64_t coeff = mod_mul(v.residue(i, component), mod_inverse(cofactor_mod_p, p), p);
        result += cofactor * coeff;
    }
    return result % modulus;
}

std::int64_t crt_pair(std::int64_t a, std::int64_t p, std::int64_t b, std::int64_t q) {
    // x = a + p * t with t = (b - a) p^{-1} mod q
    const std::int64_t t = mod_mul(((b - a) % q + q) % q, mod_inverse(p % q, q), q);
    return a + p * t;
}

}  // namespace randlat
