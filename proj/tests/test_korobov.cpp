#include <doctest.h>

#include <cmath>
#include <numbers>

#include "randlat/korobov.hpp"

using namespace randlat;

namespace {

constexpr double pi = std::numbers::pi;

// sum_{0<|h|<=N} cos(2 pi h x) / |h|^{2 alpha}, compensated
double truncated_sigma_series(double x, int alpha, long N) {
    CompensatedSum s;
    for (long h = N; h >= 1; --h) s += 2.0 * std::cos(2.0 * pi * h * x) / std::pow(double(h), 2 * alpha);
    return s.value();
}

// zeta by brute force with an integral tail
double zeta_brute(double s, long N) {
    CompensatedSum sum;
    for (long k = N; k >= 1; --k) sum += std::pow(double(k), -s);
    const double n = double(N);
    sum += std::pow(n, 1.0 - s) / (s - 1.0) - 0.5 * std::pow(n, -s);
    return sum.value();
}

}  // namespace

TEST_CASE("sigma_alpha closed form against the defining series") {
    // pi^2/3 by Richardson extrapolation of the truncated series
    const double s1 = truncated_sigma_series(0.0, 1, 500000);
    const double s2 = truncated_sigma_series(0.0, 1, 1000000);
    const double richardson = 2.0 * s2 - s1;
    CHECK(richardson == doctest::Approx(3.2898681337).epsilon(1e-10));
    CHECK(sigma_alpha(0.0, 1) == doctest::Approx(richardson).epsilon(1e-10));
    CHECK(sigma_alpha(0.0, 1) == doctest::Approx(pi * pi / 3.0).epsilon(1e-14));

    CHECK(sigma_alpha(0.0, 2) == doctest::Approx(pi * pi * pi * pi / 45.0).epsilon(1e-14));
    CHECK(sigma_alpha(0.0, 2) == doctest::Approx(2.1646464675).epsilon(1e-10));

    // alternating series: average of two consecutive partial sums
    const double a1 = truncated_sigma_series(0.5, 1, 100000);
    const double a2 = truncated_sigma_series(0.5, 1, 100001);
    CHECK(0.5 * (a1 + a2) == doctest::Approx(-1.6449340668).epsilon(1e-9));
    CHECK(sigma_alpha(0.5, 1) == doctest::Approx(0.5 * (a1 + a2)).epsilon(1e-9));

    for (int alpha : {1, 2, 3}) {
        for (double x : {0.1, 0.37, 0.73}) {
            CHECK(sigma_alpha(x, alpha) ==
                  doctest::Approx(truncated_sigma_series(x, alpha, 200000)).epsilon(1e-8));
        }
    }
}

TEST_CASE("sigma_alpha reduces modulo one and rejects unsupported smoothness") {
    CHECK(sigma_alpha(1.25, 2) == doctest::Approx(sigma_alpha(0.25, 2)).epsilon(1e-14));
    CHECK(sigma_alpha(-0.25, 2) == doctest::Approx(sigma_alpha(0.75, 2)).epsilon(1e-14));
    CHECK_THROWS_AS(sigma_alpha(0.1, 4), UnsupportedSmoothness);
    CHECK_THROWS_AS(sigma_alpha(0.1, 0), UnsupportedSmoothness);
}

TEST_CASE("sigma_alpha symmetry and value at the origin") {
    for (int alpha : {1, 2, 3}) {
        CHECK(std::abs(sigma_alpha(0.0, alpha) - 2.0 * zeta(2.0 * alpha)) < 1e-12);
        for (int i = 0; i < 1000; ++i) {
            const double x = i / 1000.0;
            CHECK(std::abs(sigma_alpha(x, alpha) - sigma_alpha(1.0 - x, alpha)) < 1e-12);
        }
    }
}

TEST_CASE("sigma tables are exactly symmetric") {
    for (std::int64_t modulus : {7, 10, 143, 391}) {
        const auto t = sigma_table(modulus, 2);
        for (std::int64_t m = 1; m < modulus; ++m) CHECK(t[m] == t[modulus - m]);
        for (std::int64_t m = 0; m < modulus; ++m) CHECK(t[m] == sigma_at(m, modulus, 2));
    }
}

TEST_CASE("character sum identity of the one-dimensional rule") {
    for (int alpha : {1, 2, 3}) {
        for (std::int64_t p : {3, 5, 7, 11}) {
            for (std::int64_t z = 1; z < p; ++z) {
                CompensatedSum s;
                for (std::int64_t k = 0; k < p; ++k) s += sigma_at(k * z % p, p, alpha);
                const double expected = 2.0 * zeta(2.0 * alpha) / std::pow(double(p), 2 * alpha);
                CHECK(s.value() / double(p) == doctest::Approx(expected).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("zeta against known constants and brute force") {
    CHECK(zeta(2.0) == doctest::Approx(pi * pi / 6.0).epsilon(1e-15));
    CHECK(zeta(4.0) == doctest::Approx(std::pow(pi, 4) / 90.0).epsilon(1e-15));
    CHECK(zeta(6.0) == doctest::Approx(std::pow(pi, 6) / 945.0).epsilon(1e-15));
    CHECK(zeta(3.0) == doctest::Approx(1.2020569031595942854).epsilon(1e-14));
    for (double s : {1.01, 1.3, 1.5, 2.7}) CHECK(zeta(s) == doctest::Approx(zeta_brute(s, 2000000)).epsilon(1e-11));
    CHECK_THROWS_AS(zeta(1.0), DomainError);
}

TEST_CASE("r_alpha examples") {
    CHECK(r_alpha(KorobovSpaceParams(1, Eigen::Vector2d(1, 1)), FrequencyVector{0, 0}) == 1.0);
    CHECK(r_alpha(KorobovSpaceParams(2, Eigen::VectorXd::Constant(1, 0.5)), FrequencyVector{3}) == 18.0);
    CHECK(r_alpha(KorobovSpaceParams(1, Eigen::Vector2d(1, 0.25)), FrequencyVector{2, -3}) == 24.0);
}

TEST_CASE("r_alpha scales by n^alpha under integer dilation") {
    const auto params = KorobovSpaceParams::polynomial_weights(3, 2, 2.0);
    for (std::int64_t a = -3; a <= 3; ++a) {
        for (std::int64_t b = -3; b <= 3; ++b) {
            if (a == 0 && b == 0) continue;
            const FrequencyVector h{a, b, 1};
            for (std::int64_t n : {2, 3, 7}) {
                const FrequencyVector nh{n * a, n * b, n};
                // product weights: equality for every nonzero h
                CHECK(r_alpha(params, nh) ==
                      doctest::Approx(std::pow(double(n), 2.0 * double(h.support().size())) * r_alpha(params, h)).epsilon(1e-14));
                CHECK(r_alpha(params, nh) >= std::pow(double(n), 2) * r_alpha(params, h));
            }
        }
    }
}

TEST_CASE("frequency vector support") {
    const FrequencyVector h{0, 4, 0, -1};
    CHECK(h.support() == std::vector<int>{1, 3});
    CHECK(FrequencyVector{0, 0}.is_zero());
}

namespace {

// sum over nonempty subsets u of gamma_u^{1/lambda} (2 zeta(alpha/lambda))^{|u|}
double mu_subset_sum(const Eigen::VectorXd& gamma, double two_zeta, double lambda) {
    const int d = int(gamma.size());
    CompensatedSum total;
    for (unsigned mask = 1; mask < (1u << d); ++mask) {
        double term = 1.0;
        for (int j = 0; j < d; ++j)
            if (mask & (1u << j)) term *= std::pow(gamma[j], 1.0 / lambda) * two_zeta;
        total += term;
    }
    return total.value();
}

}  // namespace

TEST_CASE("mu_quantity examples") {
    const double two_zeta2 = pi * pi / 3.0;
    CHECK(mu_quantity(KorobovSpaceParams(2, Eigen::VectorXd::Ones(1)), 1.0) ==
          doctest::Approx(two_zeta2).epsilon(1e-14));
    CHECK(mu_quantity(KorobovSpaceParams(2, Eigen::VectorXd::Ones(2)), 1.0) ==
          doctest::Approx(mu_subset_sum(Eigen::VectorXd::Ones(2), two_zeta2, 1.0)).epsilon(1e-13));
    CHECK(mu_quantity(KorobovSpaceParams(2, Eigen::VectorXd::Ones(2)), 1.0) == doctest::Approx((1.0 + two_zeta2) * (1.0 + two_zeta2) - 1.0).epsilon(1e-14));

    const auto p5 = KorobovSpaceParams::polynomial_weights(5, 1, 3.0);
    CHECK(mu_quantity(p5, 0.5) == doctest::Approx(mu_subset_sum(p5.gamma(), two_zeta2, 0.5)).epsilon(1e-13));
}

TEST_CASE("mu_quantity closed form equals subset sum") {
    for (int d = 1; d <= 6; ++d) {
        for (int alpha : {1, 2, 3}) {
            const auto params = KorobovSpaceParams::polynomial_weights(d, alpha, 1.5);
            for (double lambda : {0.5, 0.6, 0.9 * alpha}) {
                const double two_zeta = 2.0 * zeta(alpha / lambda);
                CHECK(std::abs(mu_quantity(params, lambda) / mu_subset_sum(params.gamma(), two_zeta, lambda) - 1.0) <
                      1e-12);
            }
        }
    }
}

TEST_CASE("mu_quantity domain") {
    const auto params = KorobovSpaceParams::polynomial_weights(2, 2, 2.0);
    CHECK_THROWS_AS(mu_quantity(params, 0.49), DomainError);
    CHECK_THROWS_AS(mu_quantity(params, 2.0), DomainError);
    CHECK_NOTHROW(mu_quantity(params, 1.99));
}

TEST_CASE("KorobovSpaceParams invariants") {
    CHECK_THROWS_AS(KorobovSpaceParams(4, Eigen::VectorXd::Ones(2)), UnsupportedSmoothness);
    CHECK_THROWS_AS(KorobovSpaceParams(2, Eigen::VectorXd(0)), DomainError);
    CHECK_THROWS_AS(KorobovSpaceParams(2, Eigen::Vector2d(1.0, 0.0)), DomainError);
    CHECK_THROWS_AS(KorobovSpaceParams(2, Eigen::Vector2d(1.0, INFINITY)), DomainError);
}
