#pragma once

#include <cstdint>
#include <memory>

#include <Eigen/Dense>

#include "randlat/convolution.hpp"
#include "randlat/korobov.hpp"

namespace randlat {

/// Component-by-component state for one prime modulus p: the chosen prefix
/// z_1..z_{s-1} and P_{s-1}(k) = prod_{j<s} (1 + gamma_j^2 sigma_alpha(k z_j / p)).
class CbcState {
public:
    CbcState(std::int64_t p, KorobovSpaceParams params);
    /// Shares an existing kernel for p instead of planning a new one.
    CbcState(std::int64_t p, KorobovSpaceParams params, std::shared_ptr<const RaderKernel> kernel);

    std::int64_t prime() const { return p_; }
    /// 1-based index of the next component to choose.
    int next_component() const { return static_cast<int>(prefix_.size()) + 1; }
    bool complete() const { return next_component() > params_.dimension(); }
    const KorobovSpaceParams& params() const { return params_; }
    const std::vector<std::int64_t>& prefix() const { return prefix_; }
    const Eigen::VectorXd& products() const { return products_; }
    const Eigen::VectorXd& sigma() const { return sigma_; }
    const RaderKernel& kernel() const { return *kernel_; }
    std::shared_ptr<const RaderKernel> shared_kernel() const { return kernel_; }

    /// Fixes the next component and multiplies it into the product table.
    void append(std::int64_t z);
    /// [e_det]^2 of the prefix: mean of P minus one.
    double squared_error() const;
    /// The product table rebuilt from the prefix.
    Eigen::VectorXd recomputed_products() const;

private:
    std::int64_t p_;
    KorobovSpaceParams params_;
    std::vector<std::int64_t> prefix_;
    Eigen::VectorXd sigma_;
    Eigen::VectorXd products_;
    std::shared_ptr<const RaderKernel> kernel_;
};

/// theta_s(z) = (gamma_s^2 / p) sum_k sigma_alpha(k z / p) P_{s-1}(k) for every z in Z_p.
/// theta(z) and theta(p - z) are equal in exact arithmetic and are returned equal.
Eigen::VectorXd theta_all(const CbcState& state);

/// Numerical resolution of theta_all: differences below it are treated as ties.
double theta_resolution(const CbcState& state);

/// Floor for criteria that are sums of `scale`-sized terms over p points.
double criterion_resolution(std::int64_t p, double scale);

/// Smallest index whose value is within max(1e-9 |min|, resolution) of the minimum.
Eigen::Index argmin_with_ties(const Eigen::VectorXd& values, double resolution = 0.0);

/// Deterministic CBC vector for p points: z_1 = 1, then z_s minimises theta_s.
IntVector cbc_construct(std::int64_t p, const KorobovSpaceParams& params);

}  // namespace randlat
