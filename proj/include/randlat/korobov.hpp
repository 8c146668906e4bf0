#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "randlat/errors.hpp"

namespace randlat {

using IntVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Weighted Korobov space with product weights gamma_1..gamma_d and
/// integer smoothness alpha in {1, 2, 3}.
class KorobovSpaceParams {
public:
    KorobovSpaceParams(int alpha, Eigen::VectorXd gamma);

    /// gamma_j = j^{-exponent}, j = 1..d
    static KorobovSpaceParams polynomial_weights(int d, int alpha, double exponent);

    int dimension() const { return static_cast<int>(gamma_.size()); }
    int alpha() const { return alpha_; }
    const Eigen::VectorXd& gamma() const { return gamma_; }
    double gamma(int j) const { return gamma_[j]; }

    /// The same space restricted to the first s coordinates.
    KorobovSpaceParams truncated(int s) const;

private:
    int alpha_;
    Eigen::VectorXd gamma_;
};

/// Fourier index h in Z^d together with its support {j : h_j != 0}.
class FrequencyVector {
public:
    explicit FrequencyVector(IntVector h);
    FrequencyVector(std::initializer_list<std::int64_t> h);

    const IntVector& h() const { return h_; }
    const std::vector<int>& support() const { return support_; }
    int dimension() const { return static_cast<int>(h_.size()); }
    bool is_zero() const { return support_.empty(); }

private:
    IntVector h_;
    std::vector<int> support_;
};

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            carry_ += (sum_ - t) + x;
        else
            carry_ += (x - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(double x) {
        add(x);
        return *this;
    }
    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

void require_supported_alpha(int alpha);

/// Bernoulli polynomial B_{2 alpha}(x), alpha in {1, 2, 3}, by Horner's rule.
template <typename Scalar>
Scalar bernoulli_even(int alpha, Scalar x) {
    switch (alpha) {
    case 1:  // x^2 - x + 1/6
        return (x - Scalar(1)) * x + Scalar(1) / Scalar(6);
    case 2:  // x^4 - 2x^3 + x^2 - 1/30
        return ((x - Scalar(2)) * x + Scalar(1)) * x * x - Scalar(1) / Scalar(30);
    case 3:  // x^6 - 3x^5 + 5/2 x^4 - 1/2 x^2 + 1/42
        return ((((x - Scalar(3)) * x + Scalar(5) / Scalar(2)) * x * x - Scalar(1) / Scalar(2)) * x * x) +
               Scalar(1) / Scalar(42);
    default:
        require_supported_alpha(alpha);
        return Scalar(0);
    }
}

/// (-1)^{alpha+1} (2 pi)^{2 alpha} / (2 alpha)!
double sigma_prefactor(int alpha);

/// sigma_alpha(x) = sum_{h != 0} exp(2 pi i h x) / |h|^{2 alpha}; x is reduced mod 1.
double sigma_alpha(double x, int alpha);

/// sigma_alpha(m / modulus) evaluated at the representative min(m, modulus - m).
double sigma_at(std::int64_t m, std::int64_t modulus, int alpha);

/// Table sigma_alpha(m / modulus), m = 0..modulus-1.
Eigen::VectorXd sigma_table(std::int64_t modulus, int alpha);

/// Riemann zeta for real s > 1 (series plus Euler-Maclaurin tail).
double zeta(double s);

double r_alpha(const KorobovSpaceParams& params, const FrequencyVector& h);

/// sum_{h != 0} r_alpha(h)^{-1/lambda} = prod_j (1 + gamma_j^{1/lambda} 2 zeta(alpha/lambda)) - 1
double mu_quantity(const KorobovSpaceParams& params, double lambda);

}  // namespace randlat
