#include "randlat/cbc.hpp"

#include <cmath>
#include <limits>

#include "randlat/primes.hpp"

namespace randlat {

CbcState::CbcState(std::int64_t p, KorobovSpaceParams params)
    : p_(p), params_(std::move(params)), sigma_(sigma_table(p, params_.alpha())),
      products_(Eigen::VectorXd::Ones(p)) {
    if (!is_prime(p)) throw NotPrimeError(std::to_string(p) + " is not prime");
    kernel_ = std::make_shared<RaderKernel>(p, primitive_root(p));
}

CbcState::CbcState(std::int64_t p, KorobovSpaceParams params, std::shared_ptr<const RaderKernel> kernel)
    : p_(p), params_(std::move(params)), sigma_(sigma_table(p, params_.alpha())),
      products_(Eigen::VectorXd::Ones(p)), kernel_(std::move(kernel)) {
    if (!kernel_ || kernel_->prime() != p) throw ValidationError("kernel does not match the modulus");
}

void CbcState::append(std::int64_t z) {
    if (complete()) throw SequencingError("all components already chosen");
    if (z < 0 || z >= p_) throw ValidationError("component must lie in [0, p)");
    const double g2 = params_.gamma(next_component() - 1) * params_.gamma(next_component() - 1);
    for (std::int64_t k = 0; k < p_; ++k) products_[k] *= 1.0 + g2 * sigma_[k * z % p_];
    prefix_.push_back(z);
}

double CbcState::squared_error() const {
    CompensatedSum s;
    for (double x : products_) s += x - 1.0;
    return s.value() / double(p_);
}

Eigen::VectorXd CbcState::recomputed_products() const {
    Eigen::VectorXd out = Eigen::VectorXd::Ones(p_);
    for (std::size_t j = 0; j < prefix_.size(); ++j) {
        const double g2 = params_.gamma(int(j)) * params_.gamma(int(j));
        for (std::int64_t k = 0; k < p_; ++k) out[k] *= 1.0 + g2 * sigma_at(k * prefix_[j] % p_, p_, params_.alpha());
    }
    return out;
}

Eigen::VectorXd theta_all(const CbcState& state) {
    if (state.complete()) throw SequencingError("all components already chosen");
    const std::int64_t p = state.prime();
    const int s = state.next_component();
    const double g2 = state.params().gamma(s - 1) * state.params().gamma(s - 1);
    Eigen::VectorXd theta = state.kernel().apply(state.sigma(), state.products()) * (g2 / double(p));
    for (std::int64_t z = 1; 2 * z < p; ++z) {
        const double mean = 0.5 * (theta[z] + theta[p - z]);
        theta[z] = mean;
        theta[p - z] = mean;
    }
    return theta;
}

double criterion_resolution(std::int64_t p, double scale) {
    return 32.0 * std::numeric_limits<double>::epsilon() * std::log2(2.0 * double(p)) * scale;
}

double theta_resolution(const CbcState& state) {
    const int s = state.next_component();
    const double g2 = state.params().gamma(s - 1) * state.params().gamma(s - 1);
    return criterion_resolution(state.prime(), g2 * std::abs(state.sigma()[0]) * state.products().cwiseAbs().maxCoeff());
}

Eigen::Index argmin_with_ties(const Eigen::VectorXd& values, double resolution) {
    if (values.size() == 0) throw ValidationError("argmin of an empty vector");
    const double best = values.minCoeff();
    const double tolerance = std::max(1e-9 * std::abs(best), resolution);
    for (Eigen::Index i = 0; i < values.size(); ++i)
        if (values[i] <= best + tolerance) return i;
    return 0;
}

IntVector cbc_construct(std::int64_t p, const KorobovSpaceParams& params) {
    CbcState state(p, params);
    state.append(1);
    while (!state.complete()) state.append(argmin_with_ties(theta_all(state), theta_resolution(state)));
    IntVector z(params.dimension());
    for (int j = 0; j < params.dimension(); ++j) z[j] = state.prefix()[j];
    return z;
}

}  // namespace randlat
