#include "randlat/convolution.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "randlat/errors.hpp"
#include "randlat/korobov.hpp"
#include "randlat/primes.hpp"

namespace randlat {

FftPlan::FftPlan(std::size_t size) : size_(size), bit_reverse_(size) {
    if (size == 0 || !std::has_single_bit(size)) throw ValidationError("FFT size must be a power of two");
    const int bits = std::countr_zero(size);
    for (std::size_t i = 0; i < size; ++i) {
        std::size_t r = 0;
        for (int b = 0; b < bits; ++b)
            if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
        bit_reverse_[i] = r;
    }
    twiddles_.resize(size / 2);
    for (std::size_t k = 0; k < size / 2; ++k) {
        const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(size);
        twiddles_[k] = Complex(std::cos(angle), std::sin(angle));
    }
}

void FftPlan::forward(std::span<Complex> data) const { transform(data, false); }
void FftPlan::inverse(std::span<Complex> data) const { transform(data, true); }

void FftPlan::transform(std::span<Complex> data, bool inverse) const {
    if (data.size() != size_) throw ValidationError("FFT input has wrong length");
    for (std::size_t i = 0; i < size_; ++i)
        if (i < bit_reverse_[i]) std::swap(data[i], data[bit_reverse_[i]]);
    for (std::size_t half = 1; half < size_; half *= 2) {
        const std::size_t stride = size_ / (2 * half);
        for (std::size_t start = 0; start < size_; start += 2 * half) {
            for (std::size_t k = 0; k < half; ++k) {
                Complex w = twiddles_[k * stride];
                if (inverse) w = std::conj(w);
                const Complex t = w * data[start + k + half];
                data[start + k + half] = data[start + k] - t;
                data[start + k] += t;
            }
        }
    }
}

namespace {

std::size_t padded_size(std::size_t length) {
    return std::bit_ceil(std::max<std::size_t>(2 * length - 1, 1));
}

}  // namespace

ConvolutionPlan::ConvolutionPlan(std::size_t length) : length_(length), fft_(padded_size(length)) {
    if (length == 0) throw ValidationError("convolution length must be positive");
}

ConvolutionScratch ConvolutionPlan::make_scratch() const {
    return ConvolutionScratch{std::vector<Complex>(padded_length()), std::vector<Complex>(padded_length())};
}

void ConvolutionPlan::execute(std::span<const double> a, std::span<const double> b, std::span<double> out,
                              ConvolutionScratch& scratch) const {
    if (a.size() != length_ || b.size() != length_ || out.size() != length_)
        throw ValidationError("convolution operands must all have length " + std::to_string(length_));
    const std::size_t n = padded_length();
    scratch.lhs.assign(n, Complex(0.0, 0.0));
    scratch.rhs.assign(n, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < length_; ++i) {
        scratch.lhs[i] = Complex(a[i], 0.0);
        scratch.rhs[i] = Complex(b[i], 0.0);
    }
    fft_.forward(scratch.lhs);
    fft_.forward(scratch.rhs);
    for (std::size_t i = 0; i < n; ++i) scratch.lhs[i] *= scratch.rhs[i];
    fft_.inverse(scratch.lhs);
    const double scale = 1.0 / static_cast<double>(n);
    // fold the linear convolution (length 2L-1) back onto Z_L
    for (std::size_t m = 0; m < length_; ++m) {
        double value = scratch.lhs[m].real();
        if (m + length_ < 2 * length_ - 1) value += scratch.lhs[m + length_].real();
        out[m] = value * scale;
    }
}

Eigen::VectorXd cyclic_convolve(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size()) throw ValidationError("cyclic_convolve: length mismatch");
    const auto length = static_cast<std::size_t>(a.size());
    ConvolutionPlan plan(length);
    auto scratch = plan.make_scratch();
    Eigen::VectorXd out(a.size());
    plan.execute({a.data(), length}, {b.data(), length}, {out.data(), length}, scratch);
    return out;
}

RaderKernel::RaderKernel(std::int64_t p, std::int64_t g) : p_(p), g_(g) {
    if (!is_prime(p)) throw NotPrimeError(std::to_string(p) + " is not prime");
    if (!is_primitive_root(g, p))
        throw InvalidRootError(std::to_string(g) + " is not a primitive root of " + std::to_string(p));
    const std::int64_t order = p - 1;
    power_.resize(order);
    inverse_power_.resize(order);
    const std::int64_t g_inv = mod_inverse(g % p, p);
    std::int64_t x = 1, y = 1;
    for (std::int64_t a = 0; a < order; ++a) {
        power_[a] = x;
        inverse_power_[a] = y;
        x = x * g % p;
        y = y * g_inv % p;
    }
    plan_ = std::make_unique<ConvolutionPlan>(static_cast<std::size_t>(order));
}

RaderScratch RaderKernel::make_scratch() const {
    const auto order = static_cast<std::size_t>(p_ - 1);
    return RaderScratch{plan_->make_scratch(), std::vector<double>(order), std::vector<double>(order),
                        std::vector<double>(order)};
}

void RaderKernel::apply(std::span<const double> v, std::span<const double> w, std::span<double> out,
                        RaderScratch& scratch) const {
    const auto p = static_cast<std::size_t>(p_);
    if (v.size() != p || w.size() != p || out.size() != p)
        throw ValidationError("Rader kernel operands must have length p=" + std::to_string(p_));
    const std::size_t order = p - 1;
    CompensatedSum w_total;
    for (double x : w) w_total += x;
    for (std::size_t a = 0; a < order; ++a) {
        scratch.a[a] = w[power_[a]];
        scratch.b[a] = v[inverse_power_[a]];
    }
    plan_->execute(scratch.a, scratch.b, scratch.c, scratch.conv);
    const double origin = v[0] * w[0];
    out[0] = v[0] * w_total.value();
    for (std::size_t m = 0; m < order; ++m) out[inverse_power_[m]] = origin + scratch.c[m];
}

Eigen::VectorXd RaderKernel::apply(const Eigen::VectorXd& v, const Eigen::VectorXd& w) const {
    const auto p = static_cast<std::size_t>(p_);
    Eigen::VectorXd out(p_);
    auto scratch = make_scratch();
    apply({v.data(), static_cast<std::size_t>(v.size())}, {w.data(), static_cast<std::size_t>(w.size())},
          {out.data(), p}, scratch);
    return out;
}

Eigen::VectorXd rader_cbc_kernel(std::int64_t p, std::int64_t g, const Eigen::VectorXd& v,
                                 const Eigen::VectorXd& w) {
    return RaderKernel(p, g).apply(v, w);
}

}  // namespace randlat
