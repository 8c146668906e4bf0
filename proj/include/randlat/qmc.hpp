#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "randlat/error_eval.hpp"
#include "randlat/korobov.hpp"
#include "randlat/primes.hpp"

namespace randlat {

/// SplitMix64: state += 0x9e3779b97f4a7c15, output = mix(state).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t state) : state_(state) {}

    /// The SplitMix64 output finaliser.
    static std::uint64_t mix(std::uint64_t x) {
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    /// Uniform on {0, ..., m - 1} by rejection from whole 64-bit outputs.
    std::uint64_t uniform_below(std::uint64_t m);

private:
    std::uint64_t state_;
};

/// Generator for repetition `rep`: initial state mix(seed ^ mix(rep)).
SplitMix64 repetition_stream(std::uint64_t seed, std::uint64_t rep);

struct Integrand {
    int dimension = 0;
    std::function<double(std::span<const double>)> evaluate;
    std::optional<double> known_integral;
    std::string description;
};

/// f = c.
Integrand constant_integrand(int d, double c = 1.0);
/// f(x) = prod_j (1 + cos(2 pi x_j) / j^exponent), integral 1.
Integrand product_cosine(int d, double exponent = 2.0);
/// f(x) = prod_j (1 + gamma_j sigma_alpha(x_j)), integral 1.
Integrand product_bernoulli(const KorobovSpaceParams& params);

/// sum over 0 < |h|_inf <= H of omega(h) r_alpha^{-2}(h) cos(2 pi h.x), omega the fraction of
/// pool primes annihilating h. Its fixed-vector error is as large as the norm allows.
struct ExtremalIntegrand {
    Integrand integrand;
    double norm = 0.0;
    std::size_t terms = 0;
};
ExtremalIntegrand truncated_extremal(const ResidueVector& v, const KorobovSpaceParams& params, std::int64_t H);

/// (1/n) sum_k f({k z / n}); points advance by modular addition.
double lattice_rule(const Integrand& f, std::int64_t n, const IntVector& z);

enum class Algorithm { Rpfv, RpCbc, RpRv };
const char* to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);

struct RunConfig {
    std::uint64_t seed = 0;
    std::int64_t repetitions = 1;
    Algorithm algorithm = Algorithm::Rpfv;
    double tau = 0.5;
    /// rejection tries per repetition for rp-rv
    std::int64_t max_tries = 100000;

    void validate() const;
};

/// Each repetition draws p uniformly from the pool and applies the stored z^(p).
std::vector<double> run_rpfv(const Integrand& f, const ResidueVector& v, const RunConfig& cfg);

/// z_1 = 1, then each z_s uniform among the good_count(tau, p) smallest theta_s values.
IntVector sample_rp_cbc_vector(std::int64_t p, const KorobovSpaceParams& params, double tau, SplitMix64& rng);
std::vector<double> run_rp_cbc(const Integrand& f, std::int64_t n, const KorobovSpaceParams& params,
                               const RunConfig& cfg);

/// z uniform in Z_p^d, redrawn until its worst-case error is within the good-set threshold.
struct RejectionSample {
    IntVector z;
    std::int64_t tries = 0;
};
RejectionSample sample_rp_rv_vector(std::int64_t p, const KorobovSpaceParams& params, double threshold_sq,
                                    std::int64_t max_tries, SplitMix64& rng);
std::vector<double> run_rp_rv(const Integrand& f, std::int64_t n, const KorobovSpaceParams& params,
                              const RunConfig& cfg);

struct SampleSummary {
    std::int64_t count = 0;
    double mean = 0.0;
    double stddev = 0.0;
    double sem = 0.0;
};
SampleSummary summarize(std::span<const double> samples);

}  // namespace randlat
