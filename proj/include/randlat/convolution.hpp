#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace randlat {

using Complex = std::complex<double>;

/// In-place iterative radix-2 FFT of fixed power-of-two size.
class FftPlan {
public:
    explicit FftPlan(std::size_t size);

    std::size_t size() const { return size_; }
    void forward(std::span<Complex> data) const;
    /// Unnormalised inverse; divide by size() to invert forward().
    void inverse(std::span<Complex> data) const;

private:
    void transform(std::span<Complex> data, bool inverse) const;

    std::size_t size_;
    std::vector<std::size_t> bit_reverse_;
    std::vector<Complex> twiddles_;  // exp(-2 pi i k / size), k < size/2
};

/// Working memory for ConvolutionPlan::execute. One per thread.
struct ConvolutionScratch {
    std::vector<Complex> lhs;
    std::vector<Complex> rhs;
};

/// Cyclic convolution of length L computed as a zero-padded linear
/// convolution of power-of-two length >= 2L-1.
class ConvolutionPlan {
public:
    explicit ConvolutionPlan(std::size_t length);

    std::size_t length() const { return length_; }
    std::size_t padded_length() const { return fft_.size(); }

    ConvolutionScratch make_scratch() const;

    /// out[m] = sum_k a[k] b[(m - k) mod L]
    void execute(std::span<const double> a, std::span<const double> b, std::span<double> out,
                 ConvolutionScratch& scratch) const;

private:
    std::size_t length_;
    FftPlan fft_;
};

/// Convenience wrapper building a one-off plan.
Eigen::VectorXd cyclic_convolve(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Working memory for RaderKernel::apply.
struct RaderScratch {
    ConvolutionScratch conv;
    std::vector<double> a;
    std::vector<double> b;
    std::vector<double> c;
};

/// Evaluates S[z] = sum_{k in Z_p} v[k z mod p] w[k] for all z in Z_p
/// in O(p log p) by reindexing k = g^a, z = g^{-b} with a primitive root g,
/// which turns the k != 0, z != 0 block into a cyclic convolution of length p-1.
class RaderKernel {
public:
    RaderKernel(std::int64_t p, std::int64_t g);

    std::int64_t prime() const { return p_; }
    std::int64_t root() const { return g_; }

    RaderScratch make_scratch() const;

    void apply(std::span<const double> v, std::span<const double> w, std::span<double> out,
               RaderScratch& scratch) const;
    Eigen::VectorXd apply(const Eigen::VectorXd& v, const Eigen::VectorXd& w) const;

private:
    std::int64_t p_;
    std::int64_t g_;
    std::vector<std::int64_t> power_;  // g^a mod p, a = 0..p-2
    std::vector<std::int64_t> inverse_power_;  // g^{-a} mod p
    std::unique_ptr<ConvolutionPlan> plan_;
};

Eigen::VectorXd rader_cbc_kernel(std::int64_t p, std::int64_t g, const Eigen::VectorXd& v,
                                 const Eigen::VectorXd& w);

}  // namespace randlat
