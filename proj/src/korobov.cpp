#include "randlat/korobov.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace randlat {

void require_supported_alpha(int alpha) {
    if (alpha < 1 || alpha > 3)
        throw UnsupportedSmoothness("unsupported smoothness alpha=" + std::to_string(alpha) +
                                    " (supported: 1, 2, 3)");
}

KorobovSpaceParams::KorobovSpaceParams(int alpha, Eigen::VectorXd gamma)
    : alpha_(alpha), gamma_(std::move(gamma)) {
    require_supported_alpha(alpha_);
    if (gamma_.size() < 1) throw DomainError("dimension must be at least 1");
    for (Eigen::Index j = 0; j < gamma_.size(); ++j) {
        if (!(gamma_[j] > 0.0) || !std::isfinite(gamma_[j]))
            throw DomainError("weight gamma_" + std::to_string(j + 1) + " must be positive and finite");
    }
}

KorobovSpaceParams KorobovSpaceParams::polynomial_weights(int d, int alpha, double exponent) {
    if (d < 1) throw DomainError("dimension must be at least 1");
    Eigen::VectorXd gamma(d);
    for (int j = 0; j < d; ++j) gamma[j] = std::pow(static_cast<double>(j + 1), -exponent);
    return KorobovSpaceParams(alpha, std::move(gamma));
}

KorobovSpaceParams KorobovSpaceParams::truncated(int s) const {
    if (s < 1 || s > dimension()) throw DomainError("truncation dimension out of range");
    return KorobovSpaceParams(alpha_, gamma_.head(s));
}

FrequencyVector::FrequencyVector(IntVector h) : h_(std::move(h)) {
    for (Eigen::Index j = 0; j < h_.size(); ++j)
        if (h_[j] != 0) support_.push_back(static_cast<int>(j));
}

FrequencyVector::FrequencyVector(std::initializer_list<std::int64_t> h)
    : FrequencyVector(IntVector(Eigen::Map<const IntVector>(h.begin(), static_cast<Eigen::Index>(h.size())))) {}

double sigma_prefactor(int alpha) {
    require_supported_alpha(alpha);
    // (2 pi)^{2a} / (2a)!
    const double two_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;
    static constexpr std::array<double, 4> factorial{1.0, 2.0, 24.0, 720.0};
    const double sign = (alpha % 2 == 1) ? 1.0 : -1.0;
    return sign * std::pow(two_pi_sq, alpha) / factorial[alpha];
}

double sigma_alpha(double x, int alpha) {
    require_supported_alpha(alpha);
    double frac = x - std::floor(x);
    if (frac >= 1.0) frac = 0.0;
    return sigma_prefactor(alpha) * bernoulli_even(alpha, frac);
}

double sigma_at(std::int64_t m, std::int64_t modulus, int alpha) {
    m %= modulus;
    if (m < 0) m += modulus;
    const std::int64_t rep = std::min(m, modulus - m);
    return sigma_prefactor(alpha) *
           bernoulli_even(alpha, static_cast<double>(rep) / static_cast<double>(modulus));
}

Eigen::VectorXd sigma_table(std::int64_t modulus, int alpha) {
    require_supported_alpha(alpha);
    Eigen::VectorXd table(modulus);
    const double c = sigma_prefactor(alpha);
    for (std::int64_t m = 0; m <= modulus / 2; ++m) {
        const double v = c * bernoulli_even(alpha, static_cast<double>(m) / static_cast<double>(modulus));
        table[m] = v;
        if (m != 0) table[modulus - m] = v;
    }
    return table;
}

double zeta(double s) {
    if (!(s > 1.0)) throw DomainError("zeta(s) requires s > 1");
    // sum_{k<N} k^{-s} + N^{1-s}/(s-1) + N^{-s}/2 + sum_j B_{2j}/(2j)! s(s+1)...(s+2j-2) N^{-s-2j+1}
    constexpr int N = 20;
    CompensatedSum sum;
    for (int k = N - 1; k >= 1; --k) sum += std::pow(static_cast<double>(k), -s);
    const double n = N;
    sum += std::pow(n, 1.0 - s) / (s - 1.0);
    sum += 0.5 * std::pow(n, -s);
    static constexpr std::array<double, 6> b2j_over_fact{
        1.0 / 6.0 / 2.0,             // B2/2!
        -1.0 / 30.0 / 24.0,          // B4/4!
        1.0 / 42.0 / 720.0,          // B6/6!
        -1.0 / 30.0 / 40320.0,       // B8/8!
        5.0 / 66.0 / 3628800.0,      // B10/10!
        -691.0 / 2730.0 / 479001600.0  // B12/12!
    };
    double rising = s;                      // s (s+1) ... (s+2j-2)
    double power = std::pow(n, -s - 1.0);   // N^{-s-2j+1}
    for (std::size_t j = 0; j < b2j_over_fact.size(); ++j) {
        sum += b2j_over_fact[j] * rising * power;
        const double a = s + 2.0 * static_cast<double>(j) + 1.0;
        rising *= a * (a + 1.0);
        power /= n * n;
    }
    return sum.value();
}

double r_alpha(const KorobovSpaceParams& params, const FrequencyVector& h) {
    if (h.dimension() != params.dimension()) throw ValidationError("frequency dimension mismatch");
    double r = 1.0;
    for (int j : h.support())
        r *= std::pow(static_cast<double>(std::abs(h.h()[j])), params.alpha()) / params.gamma(j);
    return r;
}

double mu_quantity(const KorobovSpaceParams& params, double lambda) {
    if (!(lambda >= 0.5) || !(lambda < params.alpha()))
        throw DomainError("lambda must lie in [1/2, alpha)");
    const double two_zeta = 2.0 * zeta(params.alpha() / lambda);
    // prod (1 + a_j) - 1 accumulated without cancellation
    double excess = 0.0;
    for (int j = 0; j < params.dimension(); ++j) {
        const double a = std::pow(params.gamma(j), 1.0 / lambda) * two_zeta;
        excess += a * (1.0 + excess);
    }
    return excess;
}

}  // namespace randlat
