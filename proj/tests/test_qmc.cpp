#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>

#include "randlat/cbc.hpp"
#include "randlat/error_eval.hpp"
#include "randlat/oracles.hpp"
#include "randlat/qmc.hpp"
#include "randlat/rpfv.hpp"

using namespace randlat;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

RunConfig config(std::uint64_t seed, std::int64_t reps, double tau = 0.5) {
    RunConfig cfg;
    cfg.seed = seed;
    cfg.repetitions = reps;
    cfg.tau = tau;
    return cfg;
}

Integrand character(IntVector h, bool imaginary) {
    const int d = int(h.size());
    return {d,
            [h, imaginary](std::span<const double> x) {
                double dot = 0.0;
                for (std::size_t j = 0; j < x.size(); ++j) dot += double(h[j]) * x[j];
                return imaginary ? std::sin(two_pi * dot) : std::cos(two_pi * dot);
            },
            0.0, "character"};
}

}  // namespace

TEST_CASE("SplitMix64 reference outputs") {
    SplitMix64 zero(0);
    CHECK(zero.next() == 0xe220a8397b1dcdafULL);
    CHECK(zero.next() == 0x6e789e6aa1b965f4ULL);
    SplitMix64 g(1234567);
    CHECK(g.next() == 6457827717110365317ULL);
    CHECK(g.next() == 3203168211198807973ULL);
    CHECK(g.next() == 9817491932198370423ULL);
    CHECK(SplitMix64::mix(0) == 0);

    auto a = repetition_stream(42, 7), b = repetition_stream(42, 7), c = repetition_stream(42, 8);
    CHECK(a.next() == b.next());
    CHECK(a.next() != c.next());
}

TEST_CASE("uniform_below covers the range evenly") {
    SplitMix64 g(9);
    for (std::uint64_t m : {1ULL, 2ULL, 3ULL, 7ULL, 1000ULL}) {
        std::map<std::uint64_t, int> counts;
        const int draws = 20000;
        for (int t = 0; t < draws; ++t) {
            const auto x = g.uniform_below(m);
            REQUIRE(x < m);
            ++counts[x];
        }
        if (m <= 7) {
            const double expected = double(draws) / double(m);
            for (auto [x, c] : counts) CHECK(std::abs(c - expected) <= 5.0 * std::sqrt(expected));
        }
    }
    CHECK(g.uniform_below(std::uint64_t{1} << 63) < (std::uint64_t{1} << 63));
    CHECK_THROWS_AS(g.uniform_below(0), ValidationError);
}

TEST_CASE("lattice rule on constants, characters and the kernel product") {
    IntVector z(3);
    z << 1, 4, 9;
    CHECK(lattice_rule(constant_integrand(3, 2.5), 13, z) == doctest::Approx(2.5).epsilon(1e-15));

    for (std::int64_t h0 = -3; h0 <= 3; ++h0)
        for (std::int64_t h1 = -3; h1 <= 3; ++h1)
            for (std::int64_t h2 = -2; h2 <= 2; ++h2) {
                IntVector h(3);
                h << h0, h1, h2;
                if ((h.array() == 0).all()) continue;
                const std::int64_t dot = ((h0 + 4 * h1 + 9 * h2) % 13 + 13) % 13;
                CHECK(lattice_rule(character(h, false), 13, z) == doctest::Approx(dot == 0 ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
                CHECK(std::abs(lattice_rule(character(h, true), 13, z)) <= 1e-12);
            }

    const KorobovSpaceParams params(1, Eigen::VectorXd::Ones(2));
    IntVector z2(2);
    z2 << 1, 2;
    CHECK(lattice_rule(product_bernoulli(params), 5, z2) ==
          doctest::Approx(1.0 + worst_case_error_sq(5, z2, params)).epsilon(1e-13));
    // large residues are reduced before stepping
    IntVector big(2);
    big << 1 + 5 * 1000000007LL, -3;
    CHECK(lattice_rule(product_bernoulli(params), 5, big) == doctest::Approx(lattice_rule(product_bernoulli(params), 5, z2)));
    CHECK_THROWS_AS(lattice_rule(constant_integrand(2), 5, z), ValidationError);
}

TEST_CASE("fixed-vector runs") {
    const auto params = KorobovSpaceParams::polynomial_weights(3, 2, 2.0);
    const auto single = construct_fixed_vector(6, params);
    const auto est = run_rpfv(product_cosine(3), single, config(1, 50));
    for (double e : est) CHECK(e == est[0]);

    const auto v = construct_fixed_vector(50, params);
    const auto a = run_rpfv(product_cosine(3), v, config(11, 2000));
    const auto b = run_rpfv(product_cosine(3), v, config(11, 2000));
    CHECK(a == b);
    setenv("RANDLAT_THREADS", "1", 1);
    const auto serial = run_rpfv(product_cosine(3), v, config(11, 2000));
    unsetenv("RANDLAT_THREADS");
    CHECK(serial == a);
    CHECK(run_rpfv(product_cosine(3), v, config(12, 2000)) != a);

    // a frequency annihilated by no prime contributes nothing
    IntVector h(3);
    h << 1, 0, 0;
    for (double e : run_rpfv(character(h, false), v, config(3, 100))) CHECK(std::abs(e) <= 1e-12);

    CHECK_THROWS_AS(run_rpfv(product_cosine(2), v, config(1, 10)), ValidationError);
    CHECK_THROWS_AS(run_rpfv(product_cosine(3), v, config(1, 0)), ValidationError);
}

TEST_CASE("the extremal integrand attains the truncated randomised error") {
    const auto params = KorobovSpaceParams::polynomial_weights(3, 2, 2.0);
    const auto v = construct_fixed_vector(50, params);
    const std::int64_t H = 12;
    const auto ext = truncated_extremal(v, params, H);
    REQUIRE(ext.terms > 0);
    const double e_trunc = randomized_error_sq_truncated(v, params, H).error();
    CHECK(ext.norm == doctest::Approx(e_trunc).epsilon(1e-10));

    // the average over primes of |Q_p(f) - I(f)| divided by the norm is the error itself
    CompensatedSum mean_abs;
    const auto& pool = v.pool();
    for (std::size_t i = 0; i < pool.size(); ++i)
        mean_abs += std::abs(lattice_rule(ext.integrand, pool.prime(i), v.vector_for(i)));
    CHECK(mean_abs.value() / double(pool.size()) / ext.norm == doctest::Approx(e_trunc).epsilon(1e-9));
    CHECK(e_trunc <= randomized_error_sq_fixed(v, params).error());
    CHECK(e_trunc >= 0.9 * randomized_error_sq_fixed(v, params).error());

    const auto est = run_rpfv(ext.integrand, v, config(5, 10000));
    std::vector<double> abs_err(est.size());
    for (std::size_t r = 0; r < est.size(); ++r) abs_err[r] = std::abs(est[r]) / ext.norm;
    const auto s = summarize(abs_err);
    CHECK(std::abs(s.mean - e_trunc) <= 5.0 * s.sem);
}

TEST_CASE("product-cosine estimates are centred on the integral") {
    const auto params = KorobovSpaceParams::polynomial_weights(4, 2, 2.0);
    const auto v = construct_fixed_vector(100, params);
    const auto s = summarize(run_rpfv(product_cosine(4), v, config(2024, 100000)));
    CHECK(s.count == 100000);
    CHECK(std::abs(s.mean - 1.0) <= 4.0 * s.sem + 1e-12);
}

TEST_CASE("online CBC sampling") {
    const auto params = KorobovSpaceParams::polynomial_weights(4, 2, 1.0);
    for (std::int64_t p : {11, 31, 53}) {
        SplitMix64 rng(3);
        // ceil(tau p) = 1 leaves only the CBC choice
        CHECK(sample_rp_cbc_vector(p, params, 0.5 / double(p), rng) == cbc_construct(p, params));
    }
    SplitMix64 rng(4);
    const auto one = sample_rp_cbc_vector(13, KorobovSpaceParams::polynomial_weights(1, 2, 1.0), 0.5, rng);
    CHECK(one == IntVector::Ones(1));

    const auto d1 = KorobovSpaceParams::polynomial_weights(1, 2, 1.0);
    const auto est = run_rp_cbc(product_cosine(1), 30, d1, config(8, 200));
    const auto pool = build_prime_pool(30);
    for (std::size_t r = 0; r < est.size(); ++r) {
        auto g = repetition_stream(8, r);
        const auto p = pool.prime(g.uniform_below(pool.size()));
        CHECK(est[r] == lattice_rule(product_cosine(1), p, IntVector::Ones(1)));
    }
    CHECK(run_rp_cbc(product_cosine(4), 40, params, config(8, 300)) ==
          run_rp_cbc(product_cosine(4), 40, params, config(8, 300)));
}

TEST_CASE("online CBC draws are uniform over the good candidates") {
    const KorobovSpaceParams params(2, Eigen::VectorXd::Ones(2));
    const auto pool = build_prime_pool(12);
    const double tau = 0.5;
    std::map<std::pair<std::int64_t, std::int64_t>, int> counts;
    const int reps = 10000;
    for (int r = 0; r < reps; ++r) {
        auto rng = repetition_stream(77, r);
        const auto p = pool.prime(rng.uniform_below(pool.size()));
        ++counts[{p, sample_rp_cbc_vector(p, params, tau, rng)[1]}];
    }
    std::size_t cells = 0;
    for (auto p : pool.primes()) {
        // good half from the exact per-candidate errors
        const auto errors = oracle::all_wce_sq(p, 2, params);
        Eigen::VectorXd theta(p);
        for (std::int64_t c = 0; c < p; ++c) theta[c] = errors[p + c];  // z_1 = 1
        const auto good = good_candidates(theta, tau, 1e-12);
        const double prob = 1.0 / double(pool.size()) / double(good.size());
        for (auto c : good) {
            const double expected = prob * reps;
            CHECK(std::abs(counts[{p, c}] - expected) <= 5.0 * std::sqrt(expected * (1 - prob)));
            ++cells;
        }
    }
    CHECK(counts.size() == cells);
}

TEST_CASE("random-vector rejection sampling") {
    const auto d1 = KorobovSpaceParams::polynomial_weights(1, 2, 1.0);
    const auto bounds = BoundParams::defaults(2, 0.5);
    SplitMix64 rng(6);
    const double t1 = good_set_threshold(13, d1, bounds);
    for (int k = 0; k < 50; ++k) {
        const auto s = sample_rp_rv_vector(13, d1, t1 * t1, 100, rng);
        CHECK(s.z[0] != 0);
        CHECK(s.tries <= 3);
    }

    const KorobovSpaceParams params(2, Eigen::VectorXd::Ones(2));
    const double t = good_set_threshold(7, params, bounds);
    std::int64_t tries = 0;
    const int draws = 10000;
    for (int k = 0; k < draws; ++k) tries += sample_rp_rv_vector(7, params, t * t, 1000, rng).tries;
    const double rate = double(draws) / double(tries);
    const double sigma = std::sqrt(0.25 / double(tries));
    CHECK(rate >= 0.5 - 3.0 * sigma);
    int good = 0;
    for (double e : oracle::all_wce_sq(7, 2, params)) good += std::sqrt(e) <= t;
    CHECK(rate == doctest::Approx(double(good) / 49.0).epsilon(0.05));

    CHECK_THROWS_AS(sample_rp_rv_vector(7, params, -1.0, 20, rng), SamplingFailure);

    const auto est = run_rp_rv(constant_integrand(2, 3.0), 30, params, config(1, 100));
    for (double e : est) CHECK(e == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(run_rp_rv(product_cosine(2), 30, params, config(1, 100)) ==
          run_rp_rv(product_cosine(2), 30, params, config(1, 100)));
}

TEST_CASE("run configuration") {
    CHECK(algorithm_from_string("rpfv") == Algorithm::Rpfv);
    CHECK(algorithm_from_string("rp-cbc") == Algorithm::RpCbc);
    CHECK(algorithm_from_string("rp-rv") == Algorithm::RpRv);
    CHECK(std::string(to_string(Algorithm::RpRv)) == "rp-rv");
    CHECK_THROWS_AS(algorithm_from_string("mc"), ValidationError);
    CHECK_THROWS_AS(config(0, 1, 1.0).validate(), DomainError);

    const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
    const auto s = summarize(xs);
    CHECK(s.mean == 2.5);
    CHECK(s.stddev == doctest::Approx(std::sqrt(5.0 / 3.0)));
    CHECK(s.sem == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
    CHECK(summarize(std::vector<double>{}).count == 0);
}
