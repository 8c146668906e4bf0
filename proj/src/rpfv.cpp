#include "randlat/rpfv.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "randlat/parallel.hpp"

namespace randlat {

namespace {

// shared by the cached and streaming paths so both round identically
inline double factor(double g2, double sigma) { return 1.0 + g2 * sigma; }

MemoryMode resolve_mode(const PrimePool& pool, const ConstructionOptions& options) {
    const std::uint64_t bytes = cached_mode_bytes(pool);
    switch (options.mode) {
    case MemoryMode::Cached:
        if (bytes > options.memory_budget_bytes)
            throw CapacityError("cached construction needs " + std::to_string(bytes) + " bytes, budget is " +
                                std::to_string(options.memory_budget_bytes) + "; use streaming mode");
        return MemoryMode::Cached;
    case MemoryMode::Streaming:
        return MemoryMode::Streaming;
    case MemoryMode::Auto:
        break;
    }
    return bytes <= options.memory_budget_bytes ? MemoryMode::Cached : MemoryMode::Streaming;
}

std::size_t triangle_index(std::size_t L, std::size_t a, std::size_t b) {
    return a * L - a * (a + 1) / 2 + (b - a - 1);
}

}  // namespace

const char* to_string(MemoryMode mode) {
    switch (mode) {
    case MemoryMode::Auto:
        return "auto";
    case MemoryMode::Cached:
        return "cached";
    case MemoryMode::Streaming:
        return "streaming";
    }
    return "auto";
}

MemoryMode memory_mode_from_string(const std::string& name) {
    if (name == "auto") return MemoryMode::Auto;
    if (name == "cached") return MemoryMode::Cached;
    if (name == "streaming") return MemoryMode::Streaming;
    throw ValidationError("unknown memory mode '" + name + "' (expected auto, cached or streaming)");
}

std::uint64_t cached_mode_bytes(const PrimePool& pool) {
    std::uint64_t entries = 0;
    for (std::size_t a = 0; a < pool.size(); ++a)
        for (std::size_t b = a + 1; b < pool.size(); ++b)
            entries += std::uint64_t(pool.prime(a)) * std::uint64_t(pool.prime(b));
    // one sigma table and one product table per pair
    return 2 * entries * sizeof(double);
}

SigmaGrid::SigmaGrid(const PrimePool& pool, int alpha, bool store_pairs) : pool_(&pool), alpha_(alpha) {
    for (auto p : pool.primes()) primes_.push_back(sigma_table(p, alpha));
    if (!store_pairs) return;
    const std::size_t L = pool.size();
    pairs_.resize(L * (L - 1) / 2);
    parallel_for(pairs_.size(), [&](std::size_t t) {
        std::size_t a = 0, b = 0, idx = 0;
        for (a = 0; a < L; ++a) {
            if (t < idx + (L - a - 1)) {
                b = a + 1 + (t - idx);
                break;
            }
            idx += L - a - 1;
        }
        pairs_[t] = sigma_table(pool.prime(a) * pool.prime(b), alpha);
    });
}

std::size_t SigmaGrid::pair_index(std::size_t a, std::size_t b) const {
    return triangle_index(pool_->size(), a, b);
}

double SigmaGrid::pair(std::size_t a, std::size_t b, std::int64_t m) const {
    if (!pairs_.empty()) return pairs_[pair_index(a, b)][m];
    return sigma_at(m, pool_->prime(a) * pool_->prime(b), alpha_);
}

PairProductCache::PairProductCache(const PrimePool& pool, const KorobovSpaceParams& params,
                                   const SigmaGrid& sigma, bool cached)
    : pool_(&pool), params_(&params), sigma_(&sigma) {
    if (!cached) return;
    const std::size_t L = pool.size();
    for (std::size_t a = 0; a < L; ++a)
        for (std::size_t b = a + 1; b < L; ++b)
            tables_.emplace_back(Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>::Ones(
                pool.prime(a), pool.prime(b)));
}

std::size_t PairProductCache::pair_index(std::size_t a, std::size_t b) const {
    return triangle_index(pool_->size(), a, b);
}

void PairProductCache::row(std::size_t a, std::size_t b, std::int64_t k, const ResidueVector& v, int s,
                           std::span<double> out) const {
    const std::int64_t pa = pool_->prime(a), pb = pool_->prime(b), N = pa * pb;
    if (!tables_.empty()) {
        const auto& table = tables_[pair_index(a, b)];
        std::copy(table.row(k).data(), table.row(k).data() + pb, out.begin());
        return;
    }
    std::fill(out.begin(), out.end(), 1.0);
    for (int j = 0; j + 1 < s; ++j) {
        const double g2 = params_->gamma(j) * params_->gamma(j);
        const std::int64_t step = v.residue(b, j) * pa % N;
        std::int64_t m = v.residue(a, j) * pb % N * k % N;
        for (std::int64_t l = 0; l < pb; ++l) {
            out[l] *= factor(g2, sigma_->pair(a, b, m));
            m += step;
            if (m >= N) m -= N;
        }
    }
}

void PairProductCache::absorb(const ResidueVector& v, int s) {
    if (tables_.empty()) return;
    const std::size_t L = pool_->size();
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < L; ++a)
        for (std::size_t b = a + 1; b < L; ++b) pairs.emplace_back(a, b);
    const int j = s - 1;
    const double g2 = params_->gamma(j) * params_->gamma(j);
    parallel_for(pairs.size(), [&](std::size_t t) {
        const auto [a, b] = pairs[t];
        const std::int64_t pa = pool_->prime(a), pb = pool_->prime(b), N = pa * pb;
        auto& table = tables_[t];
        const std::int64_t step = v.residue(b, j) * pa % N;
        const std::int64_t row_step = v.residue(a, j) * pb % N;
        std::int64_t base = 0;
        for (std::int64_t k = 0; k < pa; ++k) {
            std::int64_t m = base;
            double* row = table.row(k).data();
            for (std::int64_t l = 0; l < pb; ++l) {
                row[l] *= factor(g2, sigma_->pair(a, b, m));
                m += step;
                if (m >= N) m -= N;
            }
            base += row_step;
            if (base >= N) base -= N;
        }
    });
}

double t_hat_resolution(const PrimePool& pool, const KorobovSpaceParams& params, int s, std::size_t i) {
    const int alpha = params.alpha();
    const double sigma0 = std::abs(sigma_alpha(0.0, alpha));
    // |1 + gamma^2 sigma(x)| <= 1 + gamma^2 sigma(0)
    double bound = 1.0;
    for (int j = 0; j + 1 < s; ++j) bound *= 1.0 + params.gamma(j) * params.gamma(j) * sigma0;
    double terms = 1.0;
    for (std::size_t t = 0; t < pool.size(); ++t) {
        if (t < i) terms += 2.0;
        if (t > i) terms += 2.0 * std::pow(double(pool.prime(t)), -2.0 * alpha);
    }
    const double g2 = params.gamma(s - 1) * params.gamma(s - 1);
    return criterion_resolution(pool.prime(i), g2 * sigma0 * bound * terms);
}

std::vector<std::int64_t> good_candidates(const Eigen::VectorXd& theta, double tau, double theta_resolution) {
    if (theta.size() == 0) throw ValidationError("theta must be nonempty");
    const std::int64_t p = theta.size();
    const std::int64_t m = good_count(tau, p);
    std::vector<std::int64_t> order(p);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::int64_t a, std::int64_t b) { return theta[a] < theta[b] || (theta[a] == theta[b] && a < b); });
    // runs of tied theta values are ordered by index
    for (std::size_t start = 0; start < order.size();) {
        std::size_t end = start + 1;
        while (end < order.size() &&
               theta[order[end]] - theta[order[end - 1]] <=
                   std::max(1e-9 * std::abs(theta[order[end - 1]]), theta_resolution))
            ++end;
        std::sort(order.begin() + start, order.begin() + end);
        start = end;
    }
    order.resize(m);
    std::sort(order.begin(), order.end());
    return order;
}

std::int64_t select_candidate(const Eigen::VectorXd& theta, const Eigen::VectorXd& t_hat, double tau,
                              double theta_resolution, double t_hat_resolution) {
    if (theta.size() != t_hat.size() || theta.size() == 0)
        throw ValidationError("theta and t_hat must have the same nonzero length");
    const auto good = good_candidates(theta, tau, theta_resolution);
    double best = t_hat[good[0]];
    for (auto idx : good) best = std::min(best, t_hat[idx]);
    const double tolerance = std::max(1e-9 * std::abs(best), t_hat_resolution);
    for (auto idx : good)
        if (t_hat[idx] <= best + tolerance) return idx;
    return good[0];
}

FixedVectorBuilder::FixedVectorBuilder(std::int64_t n, KorobovSpaceParams params, ConstructionOptions options)
    : pool_(build_prime_pool(n)), params_(std::move(params)), options_(options),
      mode_((require_tau(options.tau), resolve_mode(pool_, options))),
      residues_(pool_, params_.dimension()),
      sigma_(pool_, params_.alpha(), mode_ == MemoryMode::Cached),
      cache_(pool_, params_, sigma_, mode_ == MemoryMode::Cached) {
    states_.reserve(pool_.size());
    for (auto p : pool_.primes()) {
        states_.emplace_back(p, params_);
        states_.back().append(1);
    }
    cache_.absorb(residues_, 1);
}

void FixedVectorBuilder::require_ready(std::size_t i) const {
    if (complete()) throw SequencingError("construction is complete");
    if (i >= pool_.size()) throw ValidationError("prime index out of range");
    if (i > next_)
        throw SequencingError("residues for smaller primes at dimension " + std::to_string(s_) +
                              " are not chosen yet");
}

Eigen::VectorXd FixedVectorBuilder::theta(std::size_t i) const {
    if (complete()) throw SequencingError("construction is complete");
    return theta_all(states_.at(i));
}

Eigen::VectorXd FixedVectorBuilder::t_hat(std::size_t i) const {
    require_ready(i);
    return t_hat_with(i, theta(i));
}

double FixedVectorBuilder::t_hat_resolution(std::size_t i) const {
    return randlat::t_hat_resolution(pool_, params_, s_, i);
}

Eigen::VectorXd FixedVectorBuilder::t_hat_with(std::size_t i, Eigen::VectorXd out) const {
    const std::size_t L = pool_.size();
    const std::int64_t p = pool_.prime(i);
    const int j = s_ - 1;
    const double g2 = params_.gamma(j) * params_.gamma(j);
    const int alpha = params_.alpha();
    const RaderKernel& kernel = states_[i].kernel();

    std::vector<std::size_t> others;
    for (std::size_t t = 0; t < L; ++t)
        if (t != i) others.push_back(t);
    std::vector<Eigen::VectorXd> parts(others.size());

    parallel_for(others.size(), [&](std::size_t u) {
        const std::size_t t = others[u];
        const std::int64_t q = pool_.prime(t), N = p * q;
        auto scratch = kernel.make_scratch();
        Eigen::VectorXd part = Eigen::VectorXd::Zero(p);
        Eigen::VectorXd tmp(p);
        if (t < i) {
            // 2/q sum_l (gamma_s^2/p) sum_k sigma((k z q + l c p) / pq) P(k, l)
            const std::int64_t c = residues_.residue(t, j);
            Eigen::VectorXd v(p), w(p);
            for (std::int64_t l = 0; l < q; ++l) {
                cache_.row(t, i, l, residues_, s_, {w.data(), std::size_t(p)});
                const std::int64_t shift = l * c % q * p % N;
                std::int64_t m = shift;
                for (std::int64_t r = 0; r < p; ++r) {
                    v[r] = sigma_.pair(t, i, m);
                    m += q;
                    if (m >= N) m -= N;
                }
                kernel.apply({v.data(), std::size_t(p)}, {w.data(), std::size_t(p)}, {tmp.data(), std::size_t(p)},
                             scratch);
                part += tmp;
            }
            part *= 2.0 / double(q) * g2 / double(p);
        } else {
            // 2 gamma_s^2 / (q^{2 alpha + 1} p) sum_k sigma(k q z / p) sum_l P(k, l)
            Eigen::VectorXd R(p), row(q);
            for (std::int64_t k = 0; k < p; ++k) {
                cache_.row(i, t, k, residues_, s_, {row.data(), std::size_t(q)});
                double sum = 0.0;
                for (std::int64_t l = 0; l < q; ++l) sum += row[l];
                R[k] = sum;
            }
            kernel.apply({states_[i].sigma().data(), std::size_t(p)}, {R.data(), std::size_t(p)},
                         {tmp.data(), std::size_t(p)}, scratch);
            const double scale = 2.0 * g2 / (std::pow(double(q), 2 * alpha + 1) * double(p));
            for (std::int64_t z = 0; z < p; ++z) part[z] = scale * tmp[q % p * z % p];
        }
        parts[u] = std::move(part);
    });
    for (const auto& part : parts) out += part;
    return out;
}

double FixedVectorBuilder::dropped_term(std::size_t i) const {
    require_ready(i);
    const std::int64_t p = pool_.prime(i);
    const int j = s_ - 1;
    const double g2 = params_.gamma(j) * params_.gamma(j);
    CompensatedSum total;
    Eigen::VectorXd w(p);
    for (std::size_t t = 0; t < i; ++t) {
        const std::int64_t q = pool_.prime(t);
        const std::int64_t c = residues_.residue(t, j);
        CompensatedSum inner;
        for (std::int64_t l = 0; l < q; ++l) {
            cache_.row(t, i, l, residues_, s_, {w.data(), std::size_t(p)});
            inner += sigma_.prime_table(t)[l * p % q * c % q] * w.sum();
        }
        total += 2.0 * g2 / (std::pow(double(p), 2 * params_.alpha()) * double(p) * double(q)) * inner.value();
    }
    return total.value();
}

void FixedVectorBuilder::choose(std::size_t i, std::int64_t z) {
    if (complete()) throw SequencingError("construction is complete");
    if (i != next_) throw SequencingError("residues must be chosen in ascending prime order");
    if (z < 0 || z >= pool_.prime(i)) throw ValidationError("residue out of range");
    residues_.set_residue(i, s_ - 1, z);
    if (++next_ < pool_.size()) return;
    for (std::size_t t = 0; t < pool_.size(); ++t) states_[t].append(residues_.residue(t, s_ - 1));
    cache_.absorb(residues_, s_);
    ++s_;
    next_ = 0;
}

std::int64_t FixedVectorBuilder::step() {
    const std::size_t i = next_;
    require_ready(i);
    Eigen::VectorXd th = theta(i);
    const Eigen::VectorXd criterion = t_hat_with(i, th);
    const std::int64_t z =
        select_candidate(th, criterion, options_.tau, theta_resolution(states_[i]), t_hat_resolution(i));
    choose(i, z);
    return z;
}

ResidueVector FixedVectorBuilder::run() {
    while (!complete()) step();
    return residues_;
}

ResidueVector construct_fixed_vector(std::int64_t n, const KorobovSpaceParams& params,
                                     const ConstructionOptions& options) {
    FixedVectorBuilder builder(n, params, options);
    return builder.run();
}

}  // namespace randlat
