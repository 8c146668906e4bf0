#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "randlat/cbc.hpp"
#include "randlat/error_eval.hpp"
#include "randlat/primes.hpp"

namespace randlat {

enum class MemoryMode { Auto, Cached, Streaming };

const char* to_string(MemoryMode mode);
MemoryMode memory_mode_from_string(const std::string& name);

struct ConstructionOptions {
    double tau = 0.5;
    MemoryMode mode = MemoryMode::Auto;
    std::uint64_t memory_budget_bytes = std::uint64_t{8} << 30;
};

/// Bytes held by the pair sigma tables and pair product tables in cached mode.
std::uint64_t cached_mode_bytes(const PrimePool& pool);

/// sigma_alpha(k / p) for each pool prime and, when pairs are kept, sigma_alpha(m / (p q))
/// for each pair p < q. Pair lookups without stored tables evaluate the kernel directly
/// and agree bit for bit with the stored values.
class SigmaGrid {
public:
    SigmaGrid(const PrimePool& pool, int alpha, bool store_pairs);

    const Eigen::VectorXd& prime_table(std::size_t i) const { return primes_[i]; }
    /// sigma_alpha(m / (p_a p_b)), a < b
    double pair(std::size_t a, std::size_t b, std::int64_t m) const;
    bool stores_pairs() const { return !pairs_.empty(); }

private:
    std::size_t pair_index(std::size_t a, std::size_t b) const;

    const PrimePool* pool_;
    int alpha_;
    std::vector<Eigen::VectorXd> primes_;
    std::vector<Eigen::VectorXd> pairs_;
};

/// P^{(p,q)}_{s-1}(k, l) = prod_{j<s} (1 + gamma_j^2 sigma_alpha(k z_j^(p)/p + l z_j^(q)/q)) for every
/// pair of pool primes a < b, addressed as rows k in Z_{p_a} of length p_b. Cached mode
/// keeps all tables and multiplies in each finished dimension; streaming mode rebuilds
/// rows from the residues on demand. Both produce identical rows.
class PairProductCache {
public:
    PairProductCache(const PrimePool& pool, const KorobovSpaceParams& params, const SigmaGrid& sigma,
                     bool cached);

    bool cached() const { return !tables_.empty(); }
    /// Row k of the (a, b) table, a < b, for dimensions < s (1-based s).
    void row(std::size_t a, std::size_t b, std::int64_t k, const ResidueVector& v, int s,
             std::span<double> out) const;
    /// Multiplies dimension s (1-based) into every cached table; no-op when streaming.
    void absorb(const ResidueVector& v, int s);

private:
    std::size_t pair_index(std::size_t a, std::size_t b) const;

    const PrimePool* pool_;
    const KorobovSpaceParams* params_;
    const SigmaGrid* sigma_;
    std::vector<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> tables_;
};

/// Tie resolution of T-hat at dimension s (1-based) for pool prime i, from an a priori
/// bound on the size of its summands.
double t_hat_resolution(const PrimePool& pool, const KorobovSpaceParams& params, int s, std::size_t i);

/// The good_count(tau, p) indices with the smallest theta, ascending. Theta values within
/// max(1e-9 |theta|, resolution) of each other are ranked by index.
std::vector<std::int64_t> good_candidates(const Eigen::VectorXd& theta, double tau, double theta_resolution = 0.0);

/// Among the good_count(tau, p) indices with the smallest theta, the one minimising t_hat.
/// Values within max(1e-9 |value|, resolution) of each other count as ties, and ties go
/// to the smaller index, both when ranking theta and when minimising t_hat.
std::int64_t select_candidate(const Eigen::VectorXd& theta, const Eigen::VectorXd& t_hat, double tau,
                              double theta_resolution = 0.0, double t_hat_resolution = 0.0);

/// Prime-by-prime, component-by-component construction of the fixed residue vector.
/// Dimension s = 1 is fixed to 1 for every prime; step() then chooses z_s^(p) for
/// s = 2..d and primes in ascending order.
class FixedVectorBuilder {
public:
    FixedVectorBuilder(std::int64_t n, KorobovSpaceParams params, ConstructionOptions options = {});
    FixedVectorBuilder(const FixedVectorBuilder&) = delete;
    FixedVectorBuilder& operator=(const FixedVectorBuilder&) = delete;

    const PrimePool& pool() const { return pool_; }
    const KorobovSpaceParams& params() const { return params_; }
    const ResidueVector& residues() const { return residues_; }
    MemoryMode mode() const { return mode_; }
    double tau() const { return options_.tau; }
    bool complete() const { return s_ > params_.dimension(); }
    /// 1-based dimension currently being chosen.
    int dimension() const { return s_; }
    std::size_t next_prime_index() const { return next_; }

    /// theta_s^(p_i) over Z_p for the current dimension.
    Eigen::VectorXd theta(std::size_t i) const;
    /// T-hat_s^(p_i) over Z_p; requires residues at dimension s for every prime below p_i.
    Eigen::VectorXd t_hat(std::size_t i) const;
    double t_hat_resolution(std::size_t i) const;
    /// Candidate-independent amount by which T-hat exceeds T:
    /// 2 sum_{q<p} gamma_s^2 / (p^{2 alpha} p q) sum_l sigma_alpha(l p z_s^(q) / q) sum_k P^{(p,q)}(k, l).
    double dropped_term(std::size_t i) const;

    /// Sets z_s^(p_i) for the next prime; finishing the last prime advances the dimension.
    void choose(std::size_t i, std::int64_t z);
    /// Chooses the next residue by select_candidate and returns it.
    std::int64_t step();
    ResidueVector run();

private:
    void require_ready(std::size_t i) const;
    Eigen::VectorXd t_hat_with(std::size_t i, Eigen::VectorXd theta) const;

    PrimePool pool_;
    KorobovSpaceParams params_;
    ConstructionOptions options_;
    MemoryMode mode_;
    ResidueVector residues_;
    SigmaGrid sigma_;
    PairProductCache cache_;
    std::vector<CbcState> states_;
    int s_ = 2;
    std::size_t next_ = 0;
};

ResidueVector construct_fixed_vector(std::int64_t n, const KorobovSpaceParams& params,
                                     const ConstructionOptions& options = {});

}  // namespace randlat
