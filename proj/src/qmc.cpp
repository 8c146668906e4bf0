#include "randlat/qmc.hpp"

#include <cmath>
#include <memory>
#include <numbers>

#include "randlat/cbc.hpp"
#include "randlat/convolution.hpp"
#include "randlat/parallel.hpp"
#include "randlat/rpfv.hpp"

namespace randlat {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void require_dimension(const Integrand& f, Eigen::Index d) {
    if (f.dimension != d)
        throw ValidationError("integrand dimension " + std::to_string(f.dimension) +
                              " does not match vector dimension " + std::to_string(d));
}

// Draws the prime index of every repetition up front.
std::vector<std::size_t> draw_primes(const PrimePool& pool, const RunConfig& cfg) {
    std::vector<std::size_t> out(cfg.repetitions);
    for (std::int64_t r = 0; r < cfg.repetitions; ++r) {
        auto rng = repetition_stream(cfg.seed, std::uint64_t(r));
        out[r] = rng.uniform_below(pool.size());
    }
    return out;
}

}  // namespace

std::uint64_t SplitMix64::uniform_below(std::uint64_t m) {
    if (m == 0) throw ValidationError("empty range");
    // accept x < 2^64 - (2^64 mod m)
    const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % m + 1) % m;
    while (true) {
        const std::uint64_t x = next();
        if (x <= limit) return x % m;
    }
}

SplitMix64 repetition_stream(std::uint64_t seed, std::uint64_t rep) {
    return SplitMix64(SplitMix64::mix(seed ^ SplitMix64::mix(rep)));
}

Integrand constant_integrand(int d, double c) {
    return {d, [c](std::span<const double>) { return c; }, c, "constant"};
}

Integrand product_cosine(int d, double exponent) {
    std::vector<double> a(d);
    for (int j = 0; j < d; ++j) a[j] = std::pow(double(j + 1), -exponent);
    return {d,
            [a](std::span<const double> x) {
                double f = 1.0;
                for (std::size_t j = 0; j < a.size(); ++j) f *= 1.0 + a[j] * std::cos(two_pi * x[j]);
                return f;
            },
            1.0, "product-cosine"};
}

Integrand product_bernoulli(const KorobovSpaceParams& params) {
    const Eigen::VectorXd gamma = params.gamma();
    const int alpha = params.alpha();
    return {params.dimension(),
            [gamma, alpha](std::span<const double> x) {
                double f = 1.0;
                for (Eigen::Index j = 0; j < gamma.size(); ++j) f *= 1.0 + gamma[j] * sigma_alpha(x[j], alpha);
                return f;
            },
            1.0, "product-bernoulli"};
}

ExtremalIntegrand truncated_extremal(const ResidueVector& v, const KorobovSpaceParams& params, std::int64_t H) {
    const int d = params.dimension();
    if (v.dimension() != d) throw ValidationError("vector and space dimensions differ");
    if (H < 1) throw DomainError("truncation must be positive");
    std::vector<IntVector> freqs;
    std::vector<double> coef;
    CompensatedSum norm_sq;
    IntVector h = IntVector::Constant(d, -H);
    while (true) {
        const FrequencyVector fh(h);
        if (!fh.is_zero()) {
            const double omega = omega_weight(fh, v);
            if (omega > 0.0) {
                const double r = r_alpha(params, fh);
                freqs.push_back(h);
                coef.push_back(omega / (r * r));
                norm_sq += omega * omega / (r * r);
            }
        }
        int j = d - 1;
        while (j >= 0 && h[j] == H) h[j--] = -H;
        if (j < 0) break;
        ++h[j];
    }
    ExtremalIntegrand out;
    out.terms = freqs.size();
    out.norm = std::sqrt(norm_sq.value());
    out.integrand = {d,
                     [freqs = std::move(freqs), coef = std::move(coef)](std::span<const double> x) {
                         CompensatedSum f;
                         for (std::size_t t = 0; t < freqs.size(); ++t) {
                             double dot = 0.0;
                             for (std::size_t j = 0; j < x.size(); ++j) dot += double(freqs[t][j]) * x[j];
                             f += coef[t] * std::cos(two_pi * dot);
                         }
                         return f.value();
                     },
                     0.0, "extremal"};
    return out;
}

double lattice_rule(const Integrand& f, std::int64_t n, const IntVector& z) {
    if (n < 1) throw DomainError("lattice rule needs n >= 1");
    require_dimension(f, z.size());
    const Eigen::Index d = z.size();
    IntVector step(d), current = IntVector::Zero(d);
    for (Eigen::Index j = 0; j < d; ++j) step[j] = ((z[j] % n) + n) % n;
    std::vector<double> x(d);
    CompensatedSum sum;
    for (std::int64_t k = 0; k < n; ++k) {
        for (Eigen::Index j = 0; j < d; ++j) x[j] = double(current[j]) / double(n);
        sum += f.evaluate(x);
        for (Eigen::Index j = 0; j < d; ++j) {
            current[j] += step[j];
            if (current[j] >= n) current[j] -= n;
        }
    }
    return sum.value() / double(n);
}

const char* to_string(Algorithm a) {
    switch (a) {
    case Algorithm::Rpfv:
        return "rpfv";
    case Algorithm::RpCbc:
        return "rp-cbc";
    case Algorithm::RpRv:
        return "rp-rv";
    }
    return "?";
}

Algorithm algorithm_from_string(const std::string& name) {
    if (name == "rpfv") return Algorithm::Rpfv;
    if (name == "rp-cbc") return Algorithm::RpCbc;
    if (name == "rp-rv") return Algorithm::RpRv;
    throw ValidationError("unknown algorithm '" + name + "' (expected rpfv, rp-cbc or rp-rv)");
}

void RunConfig::validate() const {
    if (repetitions < 1) throw ValidationError("repetitions must be at least 1");
    if (max_tries < 1) throw ValidationError("max_tries must be at least 1");
    require_tau(tau);
}

std::vector<double> run_rpfv(const Integrand& f, const ResidueVector& v, const RunConfig& cfg) {
    cfg.validate();
    require_dimension(f, v.dimension());
    const auto& pool = v.pool();
    const auto drawn = draw_primes(pool, cfg);
    std::vector<char> needed(pool.size(), 0);
    for (auto i : drawn) needed[i] = 1;
    std::vector<std::size_t> work;
    for (std::size_t i = 0; i < pool.size(); ++i)
        if (needed[i]) work.push_back(i);
    // one rule evaluation per distinct prime
    std::vector<double> per_prime(pool.size(), 0.0);
    parallel_for(work.size(), [&](std::size_t u) {
        const std::size_t i = work[u];
        per_prime[i] = lattice_rule(f, pool.prime(i), v.vector_for(i));
    });
    std::vector<double> out(drawn.size());
    for (std::size_t r = 0; r < drawn.size(); ++r) out[r] = per_prime[drawn[r]];
    return out;
}

namespace {

IntVector complete_randomly(CbcState& state, double tau, SplitMix64& rng) {
    state.append(1);
    while (!state.complete()) {
        const auto good = good_candidates(theta_all(state), tau, theta_resolution(state));
        state.append(good[rng.uniform_below(good.size())]);
    }
    const auto& prefix = state.prefix();
    IntVector z(prefix.size());
    for (std::size_t j = 0; j < prefix.size(); ++j) z[j] = prefix[j];
    return z;
}

}  // namespace

IntVector sample_rp_cbc_vector(std::int64_t p, const KorobovSpaceParams& params, double tau, SplitMix64& rng) {
    require_tau(tau);
    CbcState state(p, params);
    return complete_randomly(state, tau, rng);
}

std::vector<double> run_rp_cbc(const Integrand& f, std::int64_t n, const KorobovSpaceParams& params,
                               const RunConfig& cfg) {
    cfg.validate();
    require_dimension(f, params.dimension());
    const auto pool = build_prime_pool(n);
    std::vector<std::shared_ptr<const RaderKernel>> kernels(pool.size());
    parallel_for(pool.size(), [&](std::size_t i) {
        kernels[i] = std::make_shared<RaderKernel>(pool.prime(i), primitive_root(pool.prime(i)));
    });
    std::vector<double> out(cfg.repetitions);
    parallel_for(out.size(), [&](std::size_t r) {
        auto rng = repetition_stream(cfg.seed, r);
        const std::size_t i = rng.uniform_below(pool.size());
        CbcState state(pool.prime(i), params, kernels[i]);
        out[r] = lattice_rule(f, pool.prime(i), complete_randomly(state, cfg.tau, rng));
    });
    return out;
}

RejectionSample sample_rp_rv_vector(std::int64_t p, const KorobovSpaceParams& params, double threshold_sq,
                                    std::int64_t max_tries, SplitMix64& rng) {
    const int d = params.dimension();
    RejectionSample out;
    out.z.resize(d);
    while (out.tries < max_tries) {
        ++out.tries;
        for (int j = 0; j < d; ++j) out.z[j] = std::int64_t(rng.uniform_below(std::uint64_t(p)));
        if (worst_case_error_sq(p, out.z, params) <= threshold_sq) return out;
    }
    throw SamplingFailure("no good vector for p = " + std::to_string(p) + " after " + std::to_string(max_tries) +
                          " tries");
}

std::vector<double> run_rp_rv(const Integrand& f, std::int64_t n, const KorobovSpaceParams& params,
                              const RunConfig& cfg) {
    cfg.validate();
    require_dimension(f, params.dimension());
    const auto pool = build_prime_pool(n);
    const auto bounds = BoundParams::defaults(params.alpha(), cfg.tau);
    std::vector<double> threshold_sq(pool.size());
    parallel_for(pool.size(), [&](std::size_t i) {
        const double t = good_set_threshold(pool.prime(i), params, bounds);
        threshold_sq[i] = t * t;
    });
    std::vector<double> out(cfg.repetitions);
    parallel_for(out.size(), [&](std::size_t r) {
        auto rng = repetition_stream(cfg.seed, r);
        const std::size_t i = rng.uniform_below(pool.size());
        const auto sample = sample_rp_rv_vector(pool.prime(i), params, threshold_sq[i], cfg.max_tries, rng);
        out[r] = lattice_rule(f, pool.prime(i), sample.z);
    });
    return out;
}

SampleSummary summarize(std::span<const double> samples) {
    SampleSummary s;
    s.count = std::int64_t(samples.size());
    if (samples.empty()) return s;
    CompensatedSum sum;
    for (double x : samples) sum += x;
    s.mean = sum.value() / double(s.count);
    if (s.count > 1) {
        CompensatedSum sq;
        for (double x : samples) sq += (x - s.mean) * (x - s.mean);
        s.stddev = std::sqrt(sq.value() / double(s.count - 1));
        s.sem = s.stddev / std::sqrt(double(s.count));
    }
    return s;
}

}  // namespace randlat
