#include <doctest.h>

#include <cmath>
#include <random>

#include "randlat/primes.hpp"

using namespace randlat;

namespace {

bool trial_division_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t f = 2; f * f <= n; ++f)
        if (n % f == 0) return false;
    return true;
}

std::int64_t multiplicative_order(std::int64_t g, std::int64_t p) {
    std::int64_t x = g % p, order = 1;
    while (x != 1) {
        x = x * g % p;
        ++order;
    }
    return order;
}

}  // namespace

TEST_CASE("prime pool examples") {
    CHECK(build_prime_pool(10).primes() == std::vector<std::int64_t>{7});
    CHECK(build_prime_pool(20).primes() == std::vector<std::int64_t>{11, 13, 17, 19});

    const auto pool = build_prime_pool(491);
    std::vector<std::int64_t> expected;
    for (std::int64_t k = 246; k <= 491; ++k)
        if (trial_division_prime(k)) expected.push_back(k);
    CHECK(pool.primes() == expected);
    CHECK(pool.budget() == 491);
}

TEST_CASE("prime pool invariants") {
    for (std::int64_t n = 4; n <= 3000; n += 7) {
        const auto pool = build_prime_pool(n);
        REQUIRE(pool.size() >= 1);
        CHECK(double(pool.size()) > 0.23 * double(n) / std::log(double(n)));
        for (std::size_t i = 0; i < pool.size(); ++i) {
            const auto p = pool.prime(i);
            CHECK(2 * p > n);
            CHECK(p <= n);
            if (i > 0) CHECK(pool.prime(i - 1) < p);
            const auto g = pool.primitive_roots()[i];
            if (p > 2) {
                for (std::int64_t q : prime_factors(p - 1)) CHECK(mod_pow(g, (p - 1) / q, p) != 1);
            }
        }
    }
    CHECK_THROWS_AS(build_prime_pool(3), BudgetTooSmall);
    CHECK(build_prime_pool(4).primes() == std::vector<std::int64_t>{3});
}

TEST_CASE("sieve agrees with deterministic Miller-Rabin up to 1e6") {
    const auto flags = prime_sieve(1000000);
    std::size_t mismatches = 0;
    for (std::int64_t k = 0; k <= 1000000; ++k)
        if (flags[k] != is_prime(k)) ++mismatches;
    CHECK(mismatches == 0);
    CHECK(is_prime(1000000007));
    CHECK_FALSE(is_prime(561));  // Carmichael
    CHECK_FALSE(is_prime(3215031751));
}

TEST_CASE("primitive roots") {
    CHECK(primitive_root(7) == 3);
    CHECK(primitive_root(11) == 2);
    CHECK(primitive_root(2) == 1);
    CHECK_THROWS_AS(primitive_root(15), NotPrimeError);
    CHECK_THROWS_AS(primitive_root(1), NotPrimeError);
    for (std::int64_t p : {3, 5, 13, 23, 97, 101, 257}) {
        const auto g = primitive_root(p);
        CHECK(multiplicative_order(g, p) == p - 1);
        for (std::int64_t c = 2; c < g; ++c) CHECK(multiplicative_order(c, p) < p - 1);
    }
}

TEST_CASE("crt reconstruction") {
    // pool {3, 5}: component 2 residues (2 mod 3, 3 mod 5)
    {
        IntMatrix r(2, 2);
        r << 1, 2, 1, 3;
        const ResidueVector v(build_prime_pool(5), r);
        CHECK(crt_reconstruct(v, 1) == 8);
        CHECK(crt_reconstruct(v, 0) == 1);
    }
    // pool {11, 13}: residues (7, 2); oracle scans Z_143
    {
        IntMatrix r(2, 2);
        r << 1, 7, 1, 2;
        const ResidueVector v(build_prime_pool(14), r);
        REQUIRE(v.pool().primes() == std::vector<std::int64_t>{11, 13});
        std::int64_t scanned = -1;
        for (std::int64_t x = 0; x < 143; ++x)
            if (x % 11 == 7 && x % 13 == 2) scanned = x;
        CHECK(scanned == 106);
        CHECK(crt_reconstruct(v, 1) == scanned);
        CHECK(crt_pair(7, 11, 2, 13) == scanned);
    }
}

TEST_CASE("crt output reproduces stored residues") {
    std::mt19937_64 rng(42);
    const auto pool = build_prime_pool(400);
    IntMatrix r(static_cast<Eigen::Index>(pool.size()), 4);
    for (std::size_t i = 0; i < pool.size(); ++i) {
        r(i, 0) = 1;
        for (int j = 1; j < 4; ++j) r(i, j) = std::uniform_int_distribution<std::int64_t>(0, pool.prime(i) - 1)(rng);
    }
    const ResidueVector v(pool, r);
    for (int j = 0; j < 4; ++j) {
        const BigInt z = crt_reconstruct(v, j);
        BigInt modulus = 1;
        for (auto p : pool.primes()) modulus *= p;
        CHECK(z >= 0);
        CHECK(z < modulus);
        for (std::size_t i = 0; i < pool.size(); ++i)
            CHECK(static_cast<std::int64_t>(z % pool.prime(i)) == v.residue(i, j));
    }
}

TEST_CASE("residue vector validation") {
    const auto pool = build_prime_pool(20);
    IntMatrix r = IntMatrix::Ones(4, 2);
    r(0, 0) = 2;
    CHECK_THROWS_AS(ResidueVector(pool, r), ValidationError);
    r(0, 0) = 1;
    r(1, 1) = 13;  // p = 13
    CHECK_THROWS_AS(ResidueVector(pool, r), ValidationError);
    r(1, 1) = 0;  // zero residues are allowed
    CHECK_NOTHROW(ResidueVector(pool, r));
    CHECK_THROWS_AS(ResidueVector(pool, IntMatrix::Ones(3, 2)), ValidationError);
}
